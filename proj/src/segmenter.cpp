#include "tdcorpus/segmenter.h"

#include <fstream>

#include "tdcorpus/error.h"
#include "tdcorpus/text.h"

namespace tdcorpus {

namespace {

constexpr std::size_t kParenGuard = 40;

bool is_ws(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' || c == U'\f';
}

bool is_closer(char32_t c) {
  return c == U'"' || c == U'\'' || c == U'”' || c == U'’' || c == U'»';
}

bool is_opener(char32_t c) {
  return c == U'(' || c == U'[' || c == U'"' || c == U'\'' || c == U'“' ||
         c == U'‘' || c == U'«';
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

std::vector<bool> short_paren_spans(const std::u32string& s) {
  std::vector<bool> inside(s.size(), false);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == U'(') {
      open.push_back(i);
    } else if (s[i] == U')' && !open.empty()) {
      const std::size_t b = open.back();
      open.pop_back();
      if (i - b + 1 <= kParenGuard) {
        for (std::size_t k = b; k <= i; ++k) inside[k] = true;
      }
    }
  }
  return inside;
}

}  // namespace

Sentence make_sentence(std::string t) {
  Sentence s;
  s.char_len = text::non_space_length(t);
  s.token_count = text::split_whitespace(t).size();
  s.text = std::move(t);
  return s;
}

std::vector<std::string> read_abbreviations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read abbreviation list " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto t = text::trim(line);
    if (!t.empty()) out.push_back(text::fold_case(t));
  }
  return out;
}

Segmenter::Segmenter(std::vector<std::string> abbreviations, bool split_on_semicolon)
    : abbreviations_(std::move(abbreviations)), split_on_semicolon_(split_on_semicolon) {
  for (const auto& a : abbreviations_) abbrev_cps_.push_back(text::decode(a));
}

Segmenter Segmenter::for_language(std::string_view lang,
                                  const std::filesystem::path& data_dir,
                                  bool split_on_semicolon) {
  return Segmenter(read_abbreviations(data_dir / "abbrev" / (std::string(lang) + ".txt")),
                   split_on_semicolon);
}

bool Segmenter::guarded_period(const std::u32string& s, std::size_t pos) const {
  if (pos > 0 && pos + 1 < s.size() && is_digit(s[pos - 1]) && is_digit(s[pos + 1])) {
    return true;
  }
  std::size_t tok = pos;
  while (tok > 0 && !is_ws(s[tok - 1])) --tok;
  while (tok < pos && is_opener(s[tok])) ++tok;
  const std::size_t len = pos - tok;  // code points before the period
  if (len == 1 && text::is_letter(s[tok])) return true;
  if (len >= 2 && (s[pos - 1] == U'º' || s[pos - 1] == U'ª' || s[pos - 1] == U'°') &&
      is_digit(s[pos - 2])) {
    return true;
  }
  for (const auto& abbr : abbrev_cps_) {
    const std::size_t n = abbr.size();
    if (n == 0 || n > pos + 1) continue;
    const std::size_t start = pos + 1 - n;
    if (s.compare(start, n, abbr) != 0) continue;
    if (start == 0 || is_ws(s[start - 1]) || is_opener(s[start - 1])) return true;
  }
  return false;
}

std::vector<Sentence> Segmenter::segment(std::string_view input) const {
  std::vector<Sentence> out;
  const std::u32string s = text::decode(input);
  const std::vector<bool> protect = short_paren_spans(s);

  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && is_ws(s[b])) ++b;
    while (e > b && is_ws(s[e - 1])) --e;
    if (e > b) out.push_back(make_sentence(text::encode(std::u32string_view(s).substr(b, e - b))));
  };

  auto terminal = [&](char32_t c) {
    return c == U'.' || c == U'!' || c == U'?' || (split_on_semicolon_ && c == U';');
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!terminal(s[i])) {
      ++i;
      continue;
    }
    std::size_t e = i;
    bool only_period = true;
    while (e < s.size() && (terminal(s[e]) || is_closer(s[e]))) {
      if (terminal(s[e]) && s[e] != U'.') only_period = false;
      ++e;
    }
    const bool at_gap = e == s.size() || is_ws(s[e]);
    bool boundary = at_gap && !protect[i];
    if (boundary && only_period && s[i] == U'.' && (e - i == 1 || !terminal(s[i + 1]))) {
      boundary = !guarded_period(s, i);
    }
    if (boundary) {
      emit(start, e);
      start = e;
    }
    i = e;
  }
  emit(start, s.size());
  return out;
}

}  // namespace tdcorpus
