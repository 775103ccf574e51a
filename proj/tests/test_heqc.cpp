#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qcamsim/heqc.hpp"
#include "qcamsim/qcam.hpp"
#include "test_util.hpp"

namespace qcamsim {
namespace {

using testing::max_diff;
using testing::random_sequence;

constexpr double kPi = std::numbers::pi;

TEST(ThetaFromOverlap, Examples) {
  EXPECT_NEAR(theta_from_overlap(0.0, HeqcVariant::Hadamard).theta, kPi / 2, 1e-15);
  EXPECT_NEAR(theta_from_overlap(0.5, HeqcVariant::Hadamard).theta, kPi / 3, 1e-15);
  EXPECT_NEAR(theta_from_overlap(0.5625, HeqcVariant::Squared).theta, std::acos(0.75), 1e-15);
  EXPECT_NEAR(theta_from_overlap(0.5625, HeqcVariant::Squared).theta, 0.7227, 5e-5);
}

TEST(ThetaFromOverlap, ClampsWithFlag) {
  const ThetaEstimate hi = theta_from_overlap(1.2, HeqcVariant::Hadamard);
  EXPECT_TRUE(hi.clamped);
  EXPECT_EQ(hi.theta, 0.0);
  const ThetaEstimate lo = theta_from_overlap(-1.5, HeqcVariant::Exact);
  EXPECT_TRUE(lo.clamped);
  EXPECT_NEAR(lo.theta, kPi, 1e-15);
  const ThetaEstimate neg = theta_from_overlap(-0.1, HeqcVariant::Squared);
  EXPECT_TRUE(neg.clamped);
  EXPECT_NEAR(neg.theta, kPi / 2, 1e-15);
  EXPECT_FALSE(theta_from_overlap(0.3, HeqcVariant::Hadamard).clamped);
  EXPECT_THROW((void)theta_from_overlap(std::nan(""), HeqcVariant::Hadamard), std::domain_error);
}

TEST(SolutionsFromTheta, Examples) {
  EXPECT_NEAR(solutions_from_theta(kPi / 2, 1024), 512.0, 1e-9);
  EXPECT_NEAR(solutions_from_theta(kPi / 3, 1024), 256.0, 1e-9);
  const double theta = 2.0 * std::asin(std::sqrt(32.0 / 1024.0));
  EXPECT_NEAR(theta, 0.35542, 5e-6);
  EXPECT_NEAR(solutions_from_theta(theta, 1024), 32.0, 1e-9);
}

TEST(IterationsFromTheta, Examples) {
  EXPECT_EQ(iterations_from_theta(kPi / 3), 1);
  const double t1 = 2.0 * std::asin(std::sqrt(1.0 / 1024.0));
  EXPECT_NEAR(t1, 0.062511, 1e-6);
  EXPECT_EQ(iterations_from_theta(t1), 25);
  EXPECT_EQ(iterations_from_theta(kPi), 0);
  // (pi - pi/2) / pi = 0.5 rounds away from zero.
  EXPECT_EQ(iterations_from_theta(kPi / 2), 1);
  EXPECT_EQ(iterations_from_theta(0.0), std::nullopt);
  EXPECT_THROW((void)iterations_from_theta(-0.1), std::domain_error);
  EXPECT_THROW((void)iterations_from_theta(4.0), std::domain_error);
}

TEST(Converters, Monotonic) {
  double prev_m = -1.0;
  int prev_k = 1 << 30;
  for (int i = 1; i <= 2000; ++i) {
    const double theta = kPi * i / 2000.0;
    const double m = solutions_from_theta(theta, 256);
    const int k = *iterations_from_theta(theta);
    EXPECT_GE(m, prev_m);
    EXPECT_LE(k, prev_k);
    prev_m = m;
    prev_k = k;
  }
}

TEST(Converters, ParametrizationsAgree) {
  for (int n = 1; n <= 4; ++n) {
    const double big_n = std::ldexp(1.0, 2 * n);
    for (int m = 0; m <= static_cast<int>(big_n); ++m) {
      EXPECT_NEAR(std::acos((big_n - 2 * m) / big_n), 2 * std::asin(std::sqrt(m / big_n)), 1e-12);
    }
  }
}

TEST(Converters, SuccessProbabilityAtLeastHalf) {
  for (int n = 1; n <= 5; ++n) {
    const double big_n = std::ldexp(1.0, 2 * n);
    for (int m = 1; m <= static_cast<int>(big_n); ++m) {
      const double theta = 2 * std::asin(std::sqrt(m / big_n));
      const int k = *iterations_from_theta(theta);
      EXPECT_GE(std::pow(std::sin((2 * k + 1) * theta / 2), 2), 0.5) << m << "/" << big_n;
    }
  }
}

TEST(ExactOverlap, PlantedInstancesGiveClosedForm) {
  for (auto [n, m] : {std::pair{2, 0}, std::pair{2, 3}, std::pair{3, 8}, std::pair{3, 32}, std::pair{3, 48}}) {
    const PlantedInstance p = plant_matches(n, n, 4, static_cast<std::size_t>(m), 2);
    const double big_n = std::ldexp(1.0, 2 * n);
    EXPECT_NEAR(exact_overlap(p.a, p.b), (big_n - 2 * m) / big_n, 1e-12);
    const HeqcEstimate e = heqc_pipeline(p.a, p.b, 0, 1, HeqcVariant::Exact);
    EXPECT_NEAR(e.m_est, m, 1e-9);
  }
}

TEST(RunHeqcSquared, Examples) {
  const Sequence none_a({0, 1, 2, 3}, 3);
  const Sequence none_b({4, 5, 6, 7}, 3);
  EXPECT_EQ(run_heqc_squared(none_a, none_b, 500, 1), 1.0);

  const PlantedInstance half = plant_matches(2, 2, 4, 8, 3);
  EXPECT_LT(run_heqc_squared(half.a, half.b, 4000, 2), 0.01);

  const PlantedInstance p = plant_matches(3, 3, 4, 8, 4);
  const std::uint64_t shots = 2000;
  const double p0 = run_heqc_squared(p.a, p.b, shots, 5);
  const double expect = 0.5625;
  EXPECT_LT(std::abs(p0 - expect), 5 * std::sqrt(expect * (1 - expect) / shots));
}

TEST(RunHeqcHadamard, Examples) {
  const std::uint64_t shots = 2000;
  const PlantedInstance q = plant_matches(2, 2, 4, 12, 6);
  const double c = run_heqc_hadamard(q.a, q.b, shots, 7);
  // <X> has variance 1 - c^2 per shot.
  EXPECT_LT(std::abs(c + 0.5), 5 * std::sqrt((1 - 0.25) / shots));

  const PlantedInstance half = plant_matches(2, 2, 4, 8, 8);
  EXPECT_LT(std::abs(run_heqc_hadamard(half.a, half.b, shots, 9)), 5 * std::sqrt(1.0 / shots));
}

TEST(RunHeqc, VariantsAgreeWhenMAtMostHalf) {
  const std::uint64_t shots = 2000;
  const PlantedInstance p = plant_matches(3, 3, 4, 10, 10);
  const double c_exact = exact_overlap(p.a, p.b);
  const double p0 = run_heqc_squared(p.a, p.b, shots, 11);
  const double c = run_heqc_hadamard(p.a, p.b, shots, 12);
  // Delta method for sqrt(p0) plus the Hadamard-test spread.
  const double sig_sq = std::sqrt(c_exact * c_exact * (1 - c_exact * c_exact) / shots) / (2 * c_exact);
  const double sig_had = std::sqrt((1 - c_exact * c_exact) / shots);
  EXPECT_LT(std::abs(std::sqrt(p0) - std::abs(c)), 5 * std::hypot(sig_sq, sig_had));
}

TEST(ControlledOracle, McZOnlyEqualsFullyControlled) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 120; ++trial) {
    const int na = static_cast<int>(rng() % 3);
    const int nb = 1 + static_cast<int>(rng() % 2);
    const int d = 1 + static_cast<int>(rng() % 3);
    const Sequence a = random_sequence(na, d, rng);
    const Sequence b = random_sequence(nb, d, rng);
    const Circuit lean = build_heqc_hadamard(a, b, false);
    const Circuit full = build_heqc_hadamard(a, b, true);
    ASSERT_LT(max_diff(run(lean), run(full)), 1e-9);
    ASSERT_LT(full.count(GateKind::CPUCR), full.ops().size());
    ASSERT_EQ(lean.count(GateKind::CPUCR), 0U);
  }
}

TEST(Pipeline, ShotVariantsNearExact) {
  const PlantedInstance p = plant_matches(3, 3, 4, 6, 14);
  const HeqcEstimate exact = heqc_pipeline(p.a, p.b, 0, 1, HeqcVariant::Exact);
  const double c = exact.overlap;
  const std::uint64_t shots = 2000;
  const HeqcEstimate had = heqc_pipeline(p.a, p.b, shots, 15, HeqcVariant::Hadamard);
  EXPECT_LT(std::abs(had.overlap - c), 5 * std::sqrt((1 - c * c) / shots));
  const HeqcEstimate sq = heqc_pipeline(p.a, p.b, shots, 16, HeqcVariant::Squared);
  EXPECT_LT(std::abs(sq.measured - c * c), 5 * std::sqrt(c * c * (1 - c * c) / shots));
  EXPECT_EQ(sq.search_space, 64U);
  EXPECT_EQ(had.shots, shots);
  EXPECT_EQ(exact.shots, 0U);
}

TEST(Pipeline, FrozenHadamardEstimate) {
  const PlantedInstance p = plant_matches(2, 2, 4, 3, 17);
  const HeqcEstimate e = heqc_pipeline(p.a, p.b, 2000, 18, HeqcVariant::Hadamard);
  EXPECT_EQ(e.measured, 0.635);
  EXPECT_EQ(e.k, std::optional<int>(1));
}

TEST(Pipeline, NoMatchesGivesNoIterations) {
  const HeqcEstimate e = heqc_pipeline(Sequence({0, 1}, 2), Sequence({2, 3}, 2), 0, 1, HeqcVariant::Exact);
  EXPECT_EQ(e.theta, 0.0);
  EXPECT_EQ(e.m_est, 0.0);
  EXPECT_FALSE(e.k.has_value());
}

TEST(Json, DocumentedKeys) {
  HeqcEstimate e;
  e.variant = HeqcVariant::Squared;
  e.measured = 0.25;
  e.theta = std::acos(0.5);
  e.k = 1;
  const nlohmann::ordered_json j = heqc_to_json(e);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"variant", "shots", "seed", "p0", "theta", "m_est", "k"}));
  e.variant = HeqcVariant::Hadamard;
  EXPECT_TRUE(heqc_to_json(e).contains("x_expect"));
}

TEST(Variant, Names) {
  for (HeqcVariant v : {HeqcVariant::Squared, HeqcVariant::Hadamard, HeqcVariant::Exact}) {
    EXPECT_EQ(heqc_variant_from_string(to_string(v)), v);
  }
  EXPECT_THROW((void)heqc_variant_from_string("qpe"), std::invalid_argument);
}

}  // namespace
}  // namespace qcamsim
