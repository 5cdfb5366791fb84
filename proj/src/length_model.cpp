#include "tdcorpus/length_model.h"

#include <cmath>
#include <numbers>
#include <string>

#include "tdcorpus/error.h"

namespace tdcorpus {

std::size_t source_size(BeadKind k) {
  switch (k) {
    case BeadKind::k11: return 1;
    case BeadKind::k21: return 2;
    case BeadKind::k12: return 1;
    case BeadKind::k22: return 2;
    case BeadKind::k10: return 1;
    case BeadKind::k01: return 0;
  }
  return 0;
}

std::size_t target_size(BeadKind k) {
  switch (k) {
    case BeadKind::k11: return 1;
    case BeadKind::k21: return 1;
    case BeadKind::k12: return 2;
    case BeadKind::k22: return 2;
    case BeadKind::k10: return 0;
    case BeadKind::k01: return 1;
  }
  return 0;
}

bool is_substitution(BeadKind k) { return source_size(k) > 0 && target_size(k) > 0; }

std::string_view to_string(BeadKind k) {
  switch (k) {
    case BeadKind::k11: return "1-1";
    case BeadKind::k21: return "2-1";
    case BeadKind::k12: return "1-2";
    case BeadKind::k22: return "2-2";
    case BeadKind::k10: return "1-0";
    case BeadKind::k01: return "0-1";
  }
  return "?";
}

std::optional<BeadKind> parse_bead_kind(std::string_view s) {
  for (auto k : kBeadKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

BeadKind transpose(BeadKind k) {
  switch (k) {
    case BeadKind::k21: return BeadKind::k12;
    case BeadKind::k12: return BeadKind::k21;
    case BeadKind::k10: return BeadKind::k01;
    case BeadKind::k01: return BeadKind::k10;
    default: return k;
  }
}

void AlignParams::validate() const {
  double sum = 0;
  for (double p : priors) {
    if (!(p > 0)) throw ConfigError("bead priors must be positive");
    sum += p;
  }
  if (priors != kDefaultPriors && std::abs(sum - 1.0) > 1e-6) {
    throw ConfigError("bead priors must sum to 1 (got " + std::to_string(sum) + ")");
  }
  if (!(s2 > 0)) throw ConfigError("s2 must be positive");
  if (!(c > 0)) throw ConfigError("c must be positive");
  if (!(dict_weight >= 0)) throw ConfigError("dict_weight must be nonnegative");
  if (chunk_limit < 100) throw ConfigError("chunk_limit must be at least 100");
  if (!(dict_min_assoc > 0 && dict_min_assoc <= 1)) {
    throw ConfigError("dict_min_assoc must be in (0, 1]");
  }
}

AlignParams AlignParams::from_config(const Config& cfg) {
  AlignParams p;
  p.c = cfg.get_double("align.c", p.c);
  p.s2 = cfg.get_double("align.s2", p.s2);
  std::size_t given = 0;
  for (auto k : kBeadKinds) {
    std::string key = "align.prior_" + std::string(to_string(k));
    key[key.size() - 2] = '_';
    given += cfg.has(key);
    p.prior(k) = cfg.get_double(key, p.prior(k));
  }
  if (given != 0 && given != kBeadKinds.size()) {
    throw ConfigError("align: give all six bead priors or none");
  }
  p.dict_weight = cfg.get_double("align.dict_weight", p.dict_weight);
  const auto limit = cfg.get_int("align.chunk_limit", static_cast<long long>(p.chunk_limit));
  const auto min_count = cfg.get_int("align.dict_min_count", static_cast<long long>(p.dict_min_count));
  if (limit < 0 || min_count < 0) throw ConfigError("align: negative count");
  p.chunk_limit = static_cast<std::size_t>(limit);
  p.dict_min_count = static_cast<std::size_t>(min_count);
  p.dict_min_assoc = cfg.get_double("align.dict_min_assoc", p.dict_min_assoc);
  p.validate();
  return p;
}

double neg_log_two_sided_tail(double z) {
  // 2 (1 - Phi(z)) = erfc(z / sqrt 2)
  const double x = std::abs(z) / std::numbers::sqrt2;
  if (x < 25.0) return -std::log(std::erfc(x));
  // log erfc(x) = -x^2 - log(x sqrt(pi)) + log(1 - 1/(2x^2) + 3/(4x^4) - ...)
  const double inv = 1.0 / (x * x);
  const double series =
      1.0 + inv * (-0.5 + inv * (0.75 + inv * (-1.875 + inv * 6.5625)));
  return x * x + std::log(x * std::sqrt(std::numbers::pi)) - std::log(series);
}

double length_delta(double l1, double l2, const AlignParams& params) {
  const double mean = (l1 + l2) / 2.0;
  if (mean <= 0) return 0.0;
  return (l2 - l1 * params.c) / std::sqrt(mean * params.s2);
}

double length_cost(std::size_t l1, std::size_t l2, BeadKind kind,
                   const AlignParams& params) {
  const double prior_cost = -std::log(params.prior(kind));
  if (is_substitution(kind)) {
    return prior_cost +
           neg_log_two_sided_tail(length_delta(static_cast<double>(l1),
                                               static_cast<double>(l2), params));
  }
  const double l = static_cast<double>(kind == BeadKind::k10 ? l1 : l2);
  const double z = l / std::sqrt(l * params.s2 + 1.0);
  return prior_cost + std::min(kIndelLengthCap, neg_log_two_sided_tail(z));
}

}  // namespace tdcorpus
