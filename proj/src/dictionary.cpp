#include "tdcorpus/dictionary.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <tuple>

#include "tdcorpus/error.h"
#include "tdcorpus/text.h"

namespace tdcorpus {

void BilingualDictionary::add(const std::string& source, const std::string& target,
                              double score) {
  auto& tr = by_source_[source];
  auto it = std::find(tr.targets.begin(), tr.targets.end(), target);
  if (it != tr.targets.end()) {
    tr.scores[static_cast<std::size_t>(it - tr.targets.begin())] = score;
    return;
  }
  tr.targets.push_back(target);
  tr.scores.push_back(score);
  ++size_;
}

std::optional<double> BilingualDictionary::score(std::string_view source,
                                                 std::string_view target) const {
  auto it = by_source_.find(std::string(source));
  if (it == by_source_.end()) return std::nullopt;
  const auto& tr = it->second;
  for (std::size_t i = 0; i < tr.targets.size(); ++i) {
    if (tr.targets[i] == target) return tr.scores[i];
  }
  return std::nullopt;
}

const std::vector<std::string>* BilingualDictionary::translations(
    std::string_view source) const {
  auto it = by_source_.find(std::string(source));
  return it == by_source_.end() ? nullptr : &it->second.targets;
}

std::vector<BilingualDictionary::Entry> BilingualDictionary::entries() const {
  std::vector<Entry> out;
  out.reserve(size_);
  for (const auto& [src, tr] : by_source_) {
    for (std::size_t i = 0; i < tr.targets.size(); ++i) {
      out.push_back({src, tr.targets[i], tr.scores[i]});
    }
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  return out;
}

BilingualDictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read dictionary " + path.string());
  BilingualDictionary dict;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line[0] == '#') continue;
    auto f = text::split(line, '\t');
    if (f.size() != 3 && f.size() != 2) {
      throw ParseError(path.string() + ": expected src<TAB>tgt<TAB>score", line_no);
    }
    double score = 1.0;
    if (f.size() == 3) {
      auto s = text::trim(f[2]);
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), score);
      if (ec != std::errc() || p != s.data() + s.size() || !(score > 0) || score > 1) {
        throw ParseError(path.string() + ": score must be in (0, 1]", line_no);
      }
    }
    const std::string src = text::fold_case(text::trim(f[0]));
    const std::string tgt = text::fold_case(text::trim(f[1]));
    if (src.empty() || tgt.empty()) throw ParseError(path.string() + ": empty word", line_no);
    dict.add(src, tgt, score);
  }
  return dict;
}

void save_dictionary(const std::filesystem::path& path, const BilingualDictionary& dict) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& e : dict.entries()) {
    out << fmt::format("{}\t{}\t{:.17g}\n", e.source, e.target, e.score);
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> word_types(std::string_view t) {
  std::vector<std::string> out;
  for (auto tok : text::split_whitespace(t)) {
    auto w = text::strip_punctuation(tok);
    if (!w.empty()) out.push_back(std::move(w));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> dictionary_words(std::string_view t, std::size_t min_chars) {
  auto words = word_types(t);
  std::erase_if(words, [&](const std::string& w) {
    return text::code_point_count(w) < min_chars;
  });
  return words;
}

std::uint32_t CooccurrenceCounts::intern(std::unordered_map<std::string, std::uint32_t>& ids,
                                         std::vector<std::string>& words,
                                         std::vector<std::uint64_t>& counts,
                                         const std::string& w) {
  auto [it, inserted] = ids.try_emplace(w, static_cast<std::uint32_t>(words.size()));
  if (inserted) {
    words.push_back(w);
    counts.push_back(0);
  }
  return it->second;
}

void CooccurrenceCounts::add_bead(std::string_view src_text, std::string_view tgt_text) {
  ++beads_;
  std::vector<std::uint32_t> s_ids, t_ids;
  for (const auto& w : dictionary_words(src_text)) {
    const auto id = intern(src_ids_, src_words_, src_counts_, w);
    ++src_counts_[id];
    s_ids.push_back(id);
  }
  for (const auto& w : dictionary_words(tgt_text)) {
    const auto id = intern(tgt_ids_, tgt_words_, tgt_counts_, w);
    ++tgt_counts_[id];
    t_ids.push_back(id);
  }
  for (auto s : s_ids) {
    for (auto t : t_ids) ++pairs_[key(s, t)];
  }
}

void CooccurrenceCounts::merge(const CooccurrenceCounts& other) {
  beads_ += other.beads_;
  std::vector<std::uint32_t> s_map(other.src_words_.size());
  std::vector<std::uint32_t> t_map(other.tgt_words_.size());
  for (std::size_t i = 0; i < other.src_words_.size(); ++i) {
    s_map[i] = intern(src_ids_, src_words_, src_counts_, other.src_words_[i]);
    src_counts_[s_map[i]] += other.src_counts_[i];
  }
  for (std::size_t i = 0; i < other.tgt_words_.size(); ++i) {
    t_map[i] = intern(tgt_ids_, tgt_words_, tgt_counts_, other.tgt_words_[i]);
    tgt_counts_[t_map[i]] += other.tgt_counts_[i];
  }
  for (const auto& [k, c] : other.pairs_) {
    pairs_[key(s_map[k >> 32], t_map[k & 0xFFFFFFFFu])] += c;
  }
}

std::uint64_t CooccurrenceCounts::source_count(std::string_view w) const {
  auto it = src_ids_.find(std::string(w));
  return it == src_ids_.end() ? 0 : src_counts_[it->second];
}

std::uint64_t CooccurrenceCounts::target_count(std::string_view w) const {
  auto it = tgt_ids_.find(std::string(w));
  return it == tgt_ids_.end() ? 0 : tgt_counts_[it->second];
}

std::uint64_t CooccurrenceCounts::pair_count(std::string_view s, std::string_view t) const {
  auto si = src_ids_.find(std::string(s));
  auto ti = tgt_ids_.find(std::string(t));
  if (si == src_ids_.end() || ti == tgt_ids_.end()) return 0;
  auto it = pairs_.find(key(si->second, ti->second));
  return it == pairs_.end() ? 0 : it->second;
}

BilingualDictionary CooccurrenceCounts::build(std::size_t min_count, double min_assoc) const {
  BilingualDictionary dict;
  dict.min_count = min_count;
  dict.min_assoc = min_assoc;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> kept;
  for (const auto& [k, c] : pairs_) {
    if (c < min_count) continue;
    const double assoc = 2.0 * static_cast<double>(c) /
                         static_cast<double>(src_counts_[k >> 32] + tgt_counts_[k & 0xFFFFFFFFu]);
    if (assoc >= min_assoc) kept.emplace_back(k, c);
  }
  // Deterministic insertion order regardless of hash layout.
  std::sort(kept.begin(), kept.end(), [&](const auto& a, const auto& b) {
    const auto& as = src_words_[a.first >> 32];
    const auto& bs = src_words_[b.first >> 32];
    if (as != bs) return as < bs;
    return tgt_words_[a.first & 0xFFFFFFFFu] < tgt_words_[b.first & 0xFFFFFFFFu];
  });
  for (const auto& [k, c] : kept) {
    const auto s = k >> 32;
    const auto t = k & 0xFFFFFFFFu;
    const double assoc =
        2.0 * static_cast<double>(c) / static_cast<double>(src_counts_[s] + tgt_counts_[t]);
    dict.add(src_words_[s], tgt_words_[t], assoc);
  }
  return dict;
}

bool CooccurrenceCounts::operator==(const CooccurrenceCounts& other) const {
  if (beads_ != other.beads_ || src_words_.size() != other.src_words_.size() ||
      tgt_words_.size() != other.tgt_words_.size() || pairs_.size() != other.pairs_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < src_words_.size(); ++i) {
    if (other.source_count(src_words_[i]) != src_counts_[i]) return false;
  }
  for (std::size_t i = 0; i < tgt_words_.size(); ++i) {
    if (other.target_count(tgt_words_[i]) != tgt_counts_[i]) return false;
  }
  for (const auto& [k, c] : pairs_) {
    if (other.pair_count(src_words_[k >> 32], tgt_words_[k & 0xFFFFFFFFu]) != c) return false;
  }
  return true;
}

BilingualDictionary build_dictionary(std::span<const BeadText> beads,
                                     std::size_t min_count, double min_assoc) {
  CooccurrenceCounts counts;
  for (const auto& b : beads) {
    if (is_substitution(b.kind)) counts.add_bead(b.src_text, b.tgt_text);
  }
  return counts.build(min_count, min_assoc);
}

}  // namespace tdcorpus
