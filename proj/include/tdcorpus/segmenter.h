#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tdcorpus {

struct Sentence {
  std::string text;
  std::size_t char_len = 0;     // non-whitespace code points
  std::size_t token_count = 0;  // whitespace tokens

  bool operator==(const Sentence&) const = default;
};

Sentence make_sentence(std::string text);

/// Sentence splitter for case-folded text. Capitalization carries no signal
/// here, so a boundary is any run of terminal punctuation followed by
/// whitespace, minus the guarded cases:
///   - the period closes a listed abbreviation ("et al.", "fig.");
///   - the period ends a single-letter token ("j. r. silva");
///   - the period follows an ordinal indicator ("1º.");
///   - the period sits between two digits;
///   - the punctuation is inside a parenthesized span of at most 40 code
///     points.
class Segmenter {
 public:
  Segmenter() = default;
  Segmenter(std::vector<std::string> abbreviations, bool split_on_semicolon);

  /// Loads `<data_dir>/abbrev/<lang>.txt`.
  static Segmenter for_language(std::string_view lang,
                                const std::filesystem::path& data_dir,
                                bool split_on_semicolon = false);

  std::vector<Sentence> segment(std::string_view text) const;

  const std::vector<std::string>& abbreviations() const { return abbreviations_; }

 private:
  bool guarded_period(const std::u32string& s, std::size_t pos) const;

  std::vector<std::string> abbreviations_;
  std::vector<std::u32string> abbrev_cps_;
  bool split_on_semicolon_ = false;
};

/// One entry per line; '#' starts a comment; entries are case-folded.
std::vector<std::string> read_abbreviations(const std::filesystem::path& path);

}  // namespace tdcorpus
