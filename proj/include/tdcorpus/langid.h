#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdcorpus/record.h"

namespace tdcorpus::langid {

/// Raw character n-gram counts, one table per order (index 0 = unigrams).
struct NgramCounts {
  std::vector<std::map<std::string, std::uint64_t>> orders;

  void merge(const NgramCounts& other);
  bool operator==(const NgramCounts&) const = default;
};

/// Text is case-folded, every non-letter becomes a space, whitespace is
/// collapsed and the result padded with one space on each side. Every
/// window of 1..n_max code points is counted except the lone space.
NgramCounts count_ngrams(std::string_view text, int n_max);

/// Additively smoothed n-gram model. For an order with N observed tokens
/// and V distinct n-grams, an n-gram seen c times gets
/// (c + a) / (N + a (V + 1)); every unseen n-gram shares the leftover mass
/// a / (N + a (V + 1)).
struct LanguageProfile {
  std::string lang;
  int n_max = 3;
  double smoothing = 0.5;
  std::vector<std::map<std::string, double>> log_probs;
  std::vector<double> unseen_log_prob;

  double log_prob(const std::string& gram, int order) const;
  bool operator==(const LanguageProfile&) const = default;
};

LanguageProfile train_profile(const std::vector<std::string>& texts,
                              const std::string& lang, int n_max,
                              double smoothing = 0.5);

inline constexpr std::string_view kUnknown = "unknown";
inline constexpr std::size_t kMinDetectLength = 20;

struct Detection {
  std::string lang;  // kUnknown below the length threshold
  double margin = 0;
};

/// Picks the profile with the highest mean n-gram log-likelihood. The
/// margin is best minus runner-up. Needs at least two profiles.
Detection detect(std::string_view text, std::span<const LanguageProfile> profiles);

enum class Consistency { ok, swapped, inconsistent };
std::string_view to_string(Consistency c);

/// ok: native side is pt and foreign side en; swapped: the reverse;
/// inconsistent: anything else, including an unknown side.
Consistency check_consistency(const DocumentRecord& record,
                              std::span<const LanguageProfile> profiles);

std::string serialize(const LanguageProfile& profile);
LanguageProfile deserialize(std::string_view text);
void save_profile(const std::filesystem::path& path, const LanguageProfile& profile);
LanguageProfile load_profile(const std::filesystem::path& path);

/// One sentence per line; blank lines and lines starting with '#' skipped.
std::vector<std::string> read_seed_text(const std::filesystem::path& path);

/// pt and en profiles trained on the bundled seed text in `data_dir`.
std::vector<LanguageProfile> bundled_profiles(const std::filesystem::path& data_dir);

}  // namespace tdcorpus::langid
