#include "tdcorpus/langid.h"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tdcorpus/error.h"
#include "tdcorpus/text.h"

namespace tdcorpus::langid {

namespace {

std::u32string prepare(std::string_view raw) {
  const std::u32string cps = text::decode(text::fold_case(raw));
  std::u32string out = U" ";
  for (char32_t cp : cps) {
    if (text::is_letter(cp)) {
      out.push_back(cp);
    } else if (out.back() != U' ') {
      out.push_back(U' ');
    }
  }
  if (out.back() != U' ') out.push_back(U' ');
  return out;
}

template <class Fn>
void for_each_ngram(const std::u32string& s, int n_max, Fn&& fn) {
  for (int n = 1; n <= n_max; ++n) {
    if (s.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t i = 0; i + n <= s.size(); ++i) {
      if (n == 1 && s[i] == U' ') continue;
      fn(n, text::encode(std::u32string_view(s).substr(i, n)));
    }
  }
}

double parse_double(std::string_view s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError("langid profile: bad number '" + std::string(s) + "'", 0);
  }
  return v;
}

}  // namespace

void NgramCounts::merge(const NgramCounts& other) {
  if (orders.size() < other.orders.size()) orders.resize(other.orders.size());
  for (std::size_t n = 0; n < other.orders.size(); ++n) {
    for (const auto& [gram, c] : other.orders[n]) orders[n][gram] += c;
  }
}

NgramCounts count_ngrams(std::string_view text, int n_max) {
  NgramCounts counts;
  counts.orders.resize(static_cast<std::size_t>(n_max));
  for_each_ngram(prepare(text), n_max, [&](int n, std::string gram) {
    ++counts.orders[n - 1][std::move(gram)];
  });
  return counts;
}

double LanguageProfile::log_prob(const std::string& gram, int order) const {
  const auto& table = log_probs[order - 1];
  auto it = table.find(gram);
  return it == table.end() ? unseen_log_prob[order - 1] : it->second;
}

LanguageProfile train_profile(const std::vector<std::string>& texts,
                              const std::string& lang, int n_max, double smoothing) {
  if (texts.empty()) throw InputError("train_profile: empty corpus for " + lang);
  if (n_max < 1 || n_max > 3) throw InputError("train_profile: n_max must be 1..3");
  if (!(smoothing > 0)) throw InputError("train_profile: smoothing must be positive");

  NgramCounts counts;
  counts.orders.resize(static_cast<std::size_t>(n_max));
  for (const auto& t : texts) counts.merge(count_ngrams(t, n_max));

  LanguageProfile p;
  p.lang = lang;
  p.n_max = n_max;
  p.smoothing = smoothing;
  p.log_probs.resize(static_cast<std::size_t>(n_max));
  p.unseen_log_prob.resize(static_cast<std::size_t>(n_max));
  for (int n = 0; n < n_max; ++n) {
    const auto& table = counts.orders[n];
    double total = 0;
    for (const auto& [gram, c] : table) total += static_cast<double>(c);
    if (total == 0) throw InputError("train_profile: corpus for " + lang + " has no letters");
    const double denom = total + smoothing * (static_cast<double>(table.size()) + 1.0);
    for (const auto& [gram, c] : table) {
      p.log_probs[n][gram] = std::log((static_cast<double>(c) + smoothing) / denom);
    }
    p.unseen_log_prob[n] = std::log(smoothing / denom);
  }
  return p;
}

Detection detect(std::string_view text, std::span<const LanguageProfile> profiles) {
  if (profiles.size() < 2) throw InputError("detect needs at least two profiles");
  const std::string_view trimmed = text::trim(text);
  if (text::code_point_count(trimmed) < kMinDetectLength) {
    return {std::string(kUnknown), 0.0};
  }
  int n_max = profiles[0].n_max;
  for (const auto& p : profiles) n_max = std::min(n_max, p.n_max);

  std::vector<double> scores(profiles.size(), 0.0);
  std::size_t grams = 0;
  for_each_ngram(prepare(trimmed), n_max, [&](int n, const std::string& gram) {
    ++grams;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      scores[i] += profiles[i].log_prob(gram, n);
    }
  });
  if (grams == 0) return {std::string(kUnknown), 0.0};

  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != best) second = std::max(second, scores[i]);
  }
  const double g = static_cast<double>(grams);
  return {profiles[best].lang, scores[best] / g - second / g};
}

std::string_view to_string(Consistency c) {
  switch (c) {
    case Consistency::ok: return "ok";
    case Consistency::swapped: return "swapped";
    case Consistency::inconsistent: return "inconsistent";
  }
  return "inconsistent";
}

Consistency check_consistency(const DocumentRecord& record,
                              std::span<const LanguageProfile> profiles) {
  const auto native = detect(record.abstract_native, profiles).lang;
  const auto foreign = detect(record.abstract_foreign, profiles).lang;
  if (native == "pt" && foreign == "en") return Consistency::ok;
  if (native == "en" && foreign == "pt") return Consistency::swapped;
  return Consistency::inconsistent;
}

std::string serialize(const LanguageProfile& p) {
  std::string out = "#tdcorpus-langid-profile\t1\n";
  out += fmt::format("#lang\t{}\n#n_max\t{}\n#smoothing\t{:.17g}\n", p.lang, p.n_max,
                     p.smoothing);
  for (int n = 0; n < p.n_max; ++n) {
    out += fmt::format("#unseen\t{}\t{:.17g}\n", n + 1, p.unseen_log_prob[n]);
  }
  for (int n = 0; n < p.n_max; ++n) {
    for (const auto& [gram, lp] : p.log_probs[n]) {
      out += fmt::format("{}\t{:.17g}\n", gram, lp);
    }
  }
  return out;
}

LanguageProfile deserialize(std::string_view data) {
  LanguageProfile p;
  p.n_max = 0;
  std::size_t line_no = 0;
  bool versioned = false;
  for (auto& line : text::split(data, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    auto f = text::split(line, '\t');
    try {
      if (line[0] == '#') {
        const auto& key = f[0];
        if (key == "#tdcorpus-langid-profile") {
          if (f.size() != 2 || f[1] != "1") throw ParseError("unsupported profile version", line_no);
          versioned = true;
        } else if (key == "#lang" && f.size() == 2) {
          p.lang = f[1];
        } else if (key == "#n_max" && f.size() == 2) {
          p.n_max = static_cast<int>(parse_double(f[1]));
          if (p.n_max < 1 || p.n_max > 3) throw ParseError("n_max out of range", line_no);
          p.log_probs.assign(p.n_max, {});
          p.unseen_log_prob.assign(p.n_max, 0.0);
        } else if (key == "#smoothing" && f.size() == 2) {
          p.smoothing = parse_double(f[1]);
        } else if (key == "#unseen" && f.size() == 3 && p.n_max > 0) {
          const int n = static_cast<int>(parse_double(f[1]));
          if (n < 1 || n > p.n_max) throw ParseError("unseen order out of range", line_no);
          p.unseen_log_prob[n - 1] = parse_double(f[2]);
        } else {
          throw ParseError("unrecognized header line", line_no);
        }
        continue;
      }
      if (f.size() != 2 || p.n_max == 0) throw ParseError("expected ngram<TAB>logprob", line_no);
      const auto order = text::code_point_count(f[0]);
      if (order < 1 || order > static_cast<std::size_t>(p.n_max)) {
        throw ParseError("n-gram order out of range", line_no);
      }
      p.log_probs[order - 1][f[0]] = parse_double(f[1]);
    } catch (const ParseError& e) {
      if (e.line()) throw;
      throw ParseError(e.what(), line_no);
    }
  }
  if (!versioned || p.lang.empty() || p.n_max == 0) {
    throw ParseError("langid profile: missing header", 0);
  }
  return p;
}

void save_profile(const std::filesystem::path& path, const LanguageProfile& profile) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << serialize(profile);
  if (!out) throw IoError("write failed: " + path.string());
}

LanguageProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

std::vector<std::string> read_seed_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

std::vector<LanguageProfile> bundled_profiles(const std::filesystem::path& data_dir) {
  std::vector<LanguageProfile> out;
  for (const char* lang : {"pt", "en"}) {
    out.push_back(train_profile(read_seed_text(data_dir / "langid" / (std::string(lang) + ".txt")),
                                lang, 3));
  }
  return out;
}

}  // namespace tdcorpus::langid
