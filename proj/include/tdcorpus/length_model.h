#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "tdcorpus/config.h"

namespace tdcorpus {

/// Bead shapes, listed in the dynamic program's tie-break order.
enum class BeadKind { k11, k21, k12, k22, k10, k01 };

inline constexpr std::array<BeadKind, 6> kBeadKinds = {
    BeadKind::k11, BeadKind::k21, BeadKind::k12,
    BeadKind::k22, BeadKind::k10, BeadKind::k01};

std::size_t source_size(BeadKind k);
std::size_t target_size(BeadKind k);
bool is_substitution(BeadKind k);
std::string_view to_string(BeadKind k);       // "1-1", "2-1", ...
std::optional<BeadKind> parse_bead_kind(std::string_view s);

/// Source/target transposition: 2-1 <-> 1-2, 1-0 <-> 0-1.
BeadKind transpose(BeadKind k);

/// Published bead priors in kBeadKinds order. They sum to 1.0098, so they
/// are accepted as they stand rather than held to the sum check below.
inline constexpr std::array<double, 6> kDefaultPriors = {0.89, 0.0445, 0.0445,
                                                         0.011, 0.0099, 0.0099};

struct AlignParams {
  double c = 1.0;    // expected target/source character ratio
  double s2 = 6.8;   // variance of the length difference per character
  std::array<double, 6> priors = kDefaultPriors;
  double dict_weight = 1.0;
  std::size_t chunk_limit = 10000;
  std::size_t dict_min_count = 2;
  double dict_min_assoc = 0.3;

  double prior(BeadKind k) const { return priors[static_cast<std::size_t>(k)]; }
  double& prior(BeadKind k) { return priors[static_cast<std::size_t>(k)]; }

  /// Throws ConfigError unless priors are positive and, when they differ
  /// from kDefaultPriors, sum to 1 (1e-6); s2 > 0, c > 0, dict_weight >= 0, chunk_limit >= 100 and
  /// dict_min_assoc is in (0, 1].
  void validate() const;

  /// Reads keys under `[align]` (c, s2, prior_1_1 ... prior_0_1,
  /// dict_weight, chunk_limit, dict_min_count, dict_min_assoc). Priors are
  /// all given or none.
  static AlignParams from_config(const Config& cfg);
};

/// Insertion and deletion length terms are capped at this many nats.
inline constexpr double kIndelLengthCap = 4.5;

/// -log of the two-sided standard normal tail, -log(2 (1 - Phi(|z|))).
/// Uses erfc from the C library (fdlibm-derived rational approximations,
/// accurate to a few ulp); beyond z = 25 it switches to the asymptotic
/// series for log erfc, where erfc itself underflows.
double neg_log_two_sided_tail(double z);

/// Length discrepancy (l2 - l1 c) / sqrt(((l1 + l2) / 2) s2).
double length_delta(double l1, double l2, const AlignParams& params);

/// Gale-Church bead cost in nats. Substitution kinds:
///   -log prior(kind) - log(2 (1 - Phi(|delta|))).
/// Insertions / deletions (l = length of the present side):
///   -log prior(kind) + min(4.5, -log(2 (1 - Phi(l / sqrt(l s2 + 1))))).
double length_cost(std::size_t l1, std::size_t l2, BeadKind kind,
                   const AlignParams& params);

}  // namespace tdcorpus
