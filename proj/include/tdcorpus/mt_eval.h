#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tdcorpus/aligner.h"

namespace tdcorpus {

struct SplitSpec {
  std::size_t dev_size = 0;
  std::size_t test_size = 0;
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<AlignedPair> train;
  std::vector<AlignedPair> dev;
  std::vector<AlignedPair> test;
};

/// Index-level partition: a seeded shuffle assigns the first dev_size
/// positions to dev, the next test_size to test and the rest to train.
/// Each list is returned in ascending corpus order. Throws InputError
/// unless dev_size + test_size < corpus_size.
struct SplitIndices {
  std::vector<std::size_t> train, dev, test;
};
SplitIndices split_indices(std::size_t corpus_size, const SplitSpec& spec);

Split split(const std::vector<AlignedPair>& pairs, const SplitSpec& spec);

using Tokens = std::vector<std::string>;

/// Whitespace tokenization used for scoring.
Tokens tokenize(std::string_view line);

inline constexpr int kBleuOrder = 4;

struct Precision {
  std::uint64_t matches = 0;  // clipped n-gram matches
  std::uint64_t total = 0;    // hypothesis n-grams
  double value() const { return total ? static_cast<double>(matches) / static_cast<double>(total) : 0.0; }
  bool operator==(const Precision&) const = default;
};

struct BleuReport {
  std::array<Precision, kBleuOrder> precisions;
  double brevity_penalty = 0;
  std::uint64_t hyp_len = 0;
  std::uint64_t ref_len = 0;
  double score = 0;  // in [0, 1]

  bool operator==(const BleuReport&) const = default;
};

/// Sufficient statistics for corpus BLEU. Sentences are accumulated
/// independently, so tables built over disjoint parts merge to the same
/// result in any grouping.
class BleuStats {
 public:
  void add(const Tokens& hypothesis, const Tokens& reference);
  void merge(const BleuStats& other);

  std::uint64_t sentences() const { return sentences_; }

  /// With `smooth`, orders 2..4 use (matches + 1) / (total + 1).
  BleuReport report(bool smooth = false) const;

 private:
  std::array<Precision, kBleuOrder> counts_{};
  std::uint64_t hyp_len_ = 0;
  std::uint64_t ref_len_ = 0;
  std::uint64_t sentences_ = 0;
};

/// Corpus-level single-reference BLEU with clipped n-gram counts (n = 1..4)
/// summed over the corpus before division. Brevity penalty is 1 when
/// hyp_len > ref_len and exp(1 - ref_len / hyp_len) otherwise (0 for an
/// empty hypothesis side). Without smoothing the score is 0 as soon as one
/// precision is 0. Throws InputError on an empty corpus or mismatched
/// list lengths.
BleuReport bleu(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references,
                bool smooth = false);

/// Multi-line human-readable report; `percent` scales the score to 0-100.
std::string format_report(const BleuReport& report, bool percent);

/// Lines of a text file, without terminators.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace tdcorpus
