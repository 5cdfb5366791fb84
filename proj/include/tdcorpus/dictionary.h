#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tdcorpus/length_model.h"

namespace tdcorpus {

/// Word-pair association table used to reward substitution beads whose
/// sentences share known translations.
class BilingualDictionary {
 public:
  struct Entry {
    std::string source;
    std::string target;
    double score = 0;
    bool operator==(const Entry&) const = default;
  };

  std::size_t min_count = 0;
  double min_assoc = 0;

  /// Replaces the score when the pair is already present.
  void add(const std::string& source, const std::string& target, double score);
  std::optional<double> score(std::string_view source, std::string_view target) const;
  bool contains(std::string_view source, std::string_view target) const {
    return score(source, target).has_value();
  }

  /// Targets listed for `source`, or nullptr.
  const std::vector<std::string>* translations(std::string_view source) const;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// All entries sorted by (source, target).
  std::vector<Entry> entries() const;

 private:
  struct Translations {
    std::vector<std::string> targets;
    std::vector<double> scores;
  };
  std::unordered_map<std::string, Translations> by_source_;
  std::size_t size_ = 0;
};

/// `src<TAB>tgt<TAB>score` per line; blank lines and '#' comments ignored.
BilingualDictionary load_dictionary(const std::filesystem::path& path);
void save_dictionary(const std::filesystem::path& path, const BilingualDictionary& dict);

/// Distinct punctuation-stripped tokens of a sentence, sorted.
std::vector<std::string> word_types(std::string_view text);

/// Distinct word types of at least `min_chars` code points; these are the
/// only words that enter an automatically built dictionary.
std::vector<std::string> dictionary_words(std::string_view text, std::size_t min_chars = 3);

/// Bead-level co-occurrence statistics. Counts are per bead (a word seen
/// twice in one bead counts once), so merging two tables is associative
/// and commutative.
class CooccurrenceCounts {
 public:
  void add_bead(std::string_view src_text, std::string_view tgt_text);
  void merge(const CooccurrenceCounts& other);

  std::uint64_t beads() const { return beads_; }
  std::uint64_t source_count(std::string_view w) const;
  std::uint64_t target_count(std::string_view w) const;
  std::uint64_t pair_count(std::string_view s, std::string_view t) const;

  /// Dice association 2 c(s,t) / (c(s) + c(t)); keeps pairs with
  /// c(s,t) >= min_count and association >= min_assoc.
  BilingualDictionary build(std::size_t min_count, double min_assoc) const;

  bool operator==(const CooccurrenceCounts& other) const;

 private:
  static std::uint64_t key(std::uint32_t s, std::uint32_t t) {
    return (static_cast<std::uint64_t>(s) << 32) | t;
  }
  std::uint32_t intern(std::unordered_map<std::string, std::uint32_t>& ids,
                       std::vector<std::string>& words,
                       std::vector<std::uint64_t>& counts, const std::string& w);

  std::unordered_map<std::string, std::uint32_t> src_ids_, tgt_ids_;
  std::vector<std::string> src_words_, tgt_words_;
  std::vector<std::uint64_t> src_counts_, tgt_counts_;
  std::unordered_map<std::uint64_t, std::uint64_t> pairs_;
  std::uint64_t beads_ = 0;
};

/// Text view of one bead, for dictionary construction.
struct BeadText {
  BeadKind kind = BeadKind::k11;
  std::string src_text;
  std::string tgt_text;
};

/// Only substitution beads contribute.
BilingualDictionary build_dictionary(std::span<const BeadText> beads,
                                     std::size_t min_count, double min_assoc);

}  // namespace tdcorpus
