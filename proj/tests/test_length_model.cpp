#include <doctest.h>

#include <cmath>

#include "oracle.h"
#include "tdcorpus/error.h"
#include "tdcorpus/length_model.h"
#include "tdcorpus/random.h"

using namespace tdcorpus;

TEST_CASE("equal lengths cost only the 1-1 prior") {
  const AlignParams p;
  CHECK(length_cost(10, 10, BeadKind::k11, p) == doctest::Approx(-std::log(0.89)).epsilon(1e-12));
  CHECK(length_cost(10, 10, BeadKind::k11, p) == doctest::Approx(0.1165).epsilon(1e-3));
  for (std::size_t l : {1u, 7u, 50u, 400u, 5000u}) {
    CHECK(length_cost(l, l, BeadKind::k11, p) == doctest::Approx(-std::log(0.89)).epsilon(1e-12));
  }
}

TEST_CASE("cost grows with the length discrepancy") {
  const AlignParams p;
  CHECK(length_cost(10, 30, BeadKind::k11, p) > length_cost(10, 12, BeadKind::k11, p));
  double prev = -1;
  for (std::size_t l2 = 100; l2 < 400; l2 += 3) {
    const double c = length_cost(100, l2, BeadKind::k11, p);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("length_cost matches the formula restated with std::erfc") {
  const AlignParams p;
  Rng rng(1);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t l1 = rng.below(400);
    const std::size_t l2 = rng.below(400);
    for (BeadKind k : kBeadKinds) {
      if (is_substitution(k) && l1 + l2 == 0) continue;
      CHECK(length_cost(l1, l2, k, p) ==
            doctest::Approx(oracle::bead_cost(l1, l2, k, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("delta follows the mean-length denominator") {
  AlignParams p;
  p.c = 1.2;
  p.s2 = 4.0;
  CHECK(length_delta(100, 150, p) == doctest::Approx((150 - 120) / std::sqrt(125.0 * 4.0)));
}

TEST_CASE("tail is finite and accurate far from the mean") {
  // 2 (1 - Phi(z)) = erfc(z / sqrt 2); compare where erfc is still
  // representable and check monotone growth past its underflow.
  for (double z : {0.0, 0.5, 1.0, 3.0, 8.0, 20.0, 30.0}) {
    CHECK(neg_log_two_sided_tail(z) ==
          doctest::Approx(-std::log(std::erfc(z / std::sqrt(2.0)))).epsilon(1e-12));
  }
  double prev = neg_log_two_sided_tail(30.0);
  for (double z = 35; z < 1e4; z *= 1.5) {
    const double v = neg_log_two_sided_tail(z);
    CHECK(std::isfinite(v));
    CHECK(v > prev);
    // Leading asymptotic term z^2 / 2.
    CHECK(v / (z * z / 2) == doctest::Approx(1.0).epsilon(0.02));
    prev = v;
  }
  CHECK(std::isfinite(length_cost(1, 100000, BeadKind::k11, AlignParams{})));
}

TEST_CASE("insertion and deletion penalties are capped") {
  const AlignParams p;
  CHECK(length_cost(1000, 0, BeadKind::k10, p) == doctest::Approx(-std::log(0.0099) + 4.5));
  CHECK(length_cost(0, 1000, BeadKind::k01, p) == doctest::Approx(-std::log(0.0099) + 4.5));
  CHECK(length_cost(2, 0, BeadKind::k10, p) < length_cost(1000, 0, BeadKind::k10, p));
}

TEST_CASE("bead kind helpers") {
  CHECK(source_size(BeadKind::k21) == 2);
  CHECK(target_size(BeadKind::k21) == 1);
  CHECK(to_string(BeadKind::k12) == "1-2");
  CHECK(parse_bead_kind("2-2") == BeadKind::k22);
  CHECK_FALSE(parse_bead_kind("3-1").has_value());
  CHECK(transpose(BeadKind::k10) == BeadKind::k01);
  CHECK(transpose(BeadKind::k21) == BeadKind::k12);
  CHECK(transpose(BeadKind::k22) == BeadKind::k22);
  CHECK_FALSE(is_substitution(BeadKind::k01));
}

TEST_CASE("parameter validation and config") {
  AlignParams p;
  CHECK_NOTHROW(p.validate());
  p.prior(BeadKind::k11) = 0.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = AlignParams{};
  p.chunk_limit = 99;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = AlignParams{};
  p.s2 = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);

  const auto cfg = Config::parse("[align]\nc = 1.1\ns2 = 5\nchunk_limit = 500\ndict_weight = 2\n");
  const auto q = AlignParams::from_config(cfg);
  CHECK(q.c == doctest::Approx(1.1));
  CHECK(q.s2 == doctest::Approx(5));
  CHECK(q.chunk_limit == 500);
  CHECK(q.dict_weight == doctest::Approx(2));
  CHECK(q.prior(BeadKind::k11) == doctest::Approx(0.89));

  const auto custom = AlignParams::from_config(Config::parse(
      "[align]\nprior_1_1 = 0.9\nprior_2_1 = 0.04\nprior_1_2 = 0.04\nprior_2_2 = 0.01\n"
      "prior_1_0 = 0.005\nprior_0_1 = 0.005\n"));
  CHECK(custom.prior(BeadKind::k11) == doctest::Approx(0.9));
  CHECK(custom.prior(BeadKind::k01) == doctest::Approx(0.005));
  CHECK_THROWS_AS(AlignParams::from_config(Config::parse("[align]\nprior_1_1 = 0.9\n")), ConfigError);
  CHECK_THROWS_AS(AlignParams::from_config(Config::parse(
                      "[align]\nprior_1_1 = 0.9\nprior_2_1 = 0.04\nprior_1_2 = 0.04\nprior_2_2 = 0.01\n"
                      "prior_1_0 = 0.05\nprior_0_1 = 0.005\n")),
                  ConfigError);
}
