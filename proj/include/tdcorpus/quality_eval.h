#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdcorpus/aligner.h"

namespace tdcorpus {

enum class Label { unlabeled, correct, partial, no_alignment };

std::string_view to_string(Label l);
std::optional<Label> parse_label(std::string_view s);

struct EvalSample {
  std::size_t sample_id = 0;  // index of the pair in the sampled corpus
  AlignedPair pair;
  Label label = Label::unlabeled;

  bool operator==(const EvalSample&) const = default;
};

/// Seeded uniform sample of n pairs without replacement, in draw order.
/// Throws InputError when n exceeds the corpus.
std::vector<EvalSample> sample_pairs(const std::vector<AlignedPair>& pairs, std::size_t n,
                                     std::uint64_t seed);

void write_samples(const std::filesystem::path& path, const std::vector<EvalSample>& samples);
std::vector<EvalSample> read_samples(const std::filesystem::path& path);

/// Append-only label log, one `sample_id<TAB>label<TAB>timestamp` line per
/// answer. The file is held under an exclusive advisory lock for the
/// lifetime of the object; a second session fails with IoError.
class LabelLog {
 public:
  using Clock = std::function<std::string()>;

  explicit LabelLog(const std::filesystem::path& path, Clock clock = {});
  ~LabelLog();
  LabelLog(const LabelLog&) = delete;
  LabelLog& operator=(const LabelLog&) = delete;

  /// Labels recorded so far; later lines win.
  const std::map<std::size_t, Label>& labels() const { return labels_; }

  /// Writes and flushes one line before returning.
  void append(std::size_t sample_id, Label label);

 private:
  int fd_ = -1;
  Clock clock_;
  std::map<std::size_t, Label> labels_;
};

/// Reads a log without locking it.
std::map<std::size_t, Label> read_label_log(const std::filesystem::path& path);

/// Copies logged labels onto the matching samples.
void apply_labels(std::vector<EvalSample>& samples, const std::map<std::size_t, Label>& labels);

/// UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

struct AnnotateResult {
  std::size_t answered = 0;
  std::size_t skipped = 0;
  bool quit = false;  // 'q' or end of input before the last sample
};

/// Prompt loop over the unlabeled samples. Keys, separated by whitespace or
/// commas: c (correct), p (partial: incomplete because of a segmentation
/// error), n (no alignment), s (skip), q (quit). Any other key re-prompts.
/// Every answer is appended to `log` before the next prompt.
AnnotateResult annotate(std::vector<EvalSample>& samples, std::istream& in, std::ostream& out,
                        LabelLog& log);

struct EvalSummary {
  std::size_t correct = 0;
  std::size_t partial = 0;
  std::size_t no_alignment = 0;
  std::size_t unlabeled = 0;

  std::size_t labeled() const { return correct + partial + no_alignment; }
  /// Share of the labeled samples, in percent.
  double percent(Label l) const;
};

/// Counts per label. Throws InputError when nothing is labeled.
EvalSummary summarize(const std::vector<EvalSample>& samples);

/// Counts and percentages with two decimals.
std::string format_summary(const EvalSummary& summary);

}  // namespace tdcorpus
