#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qcamsim/qcam.hpp"
#include "test_util.hpp"

namespace qcamsim {
namespace {

using testing::random_sequence;

constexpr double kPi = std::numbers::pi;

double success_probability(std::size_t m, double n, int k) {
  const double theta = 2.0 * std::asin(std::sqrt(static_cast<double>(m) / n));
  return std::pow(std::sin((2 * k + 1) * theta / 2.0), 2);
}

int eq16(std::size_t m, double n) {
  const double theta = 2.0 * std::asin(std::sqrt(static_cast<double>(m) / n));
  return static_cast<int>(std::round((kPi - theta) / (2.0 * theta)));
}

TEST(PadSequences, PowersOfTwoUnchanged) {
  const Sequence a({1, 2, 3, 0}, 2);
  const Sequence b({1, 2, 3, 0, 1, 1, 1, 1}, 2);
  const auto [pa, pb] = pad_sequences(a, b);
  EXPECT_EQ(pa, a);
  EXPECT_EQ(pb, b);
}

TEST(PadSequences, LengthThreeDepthTwo) {
  const auto [pa, pb] = pad_sequences(Sequence({1, 2, 3}, 2), Sequence({3, 0}, 2));
  EXPECT_EQ(pa.depth(), 3);
  EXPECT_EQ(pa.values(), (std::vector<std::uint64_t>{1, 2, 3, 0b100}));
  EXPECT_EQ(pb.values(), (std::vector<std::uint64_t>{3, 0}));
  const auto [qa, qb] = pad_sequences(Sequence({1, 2}, 2), Sequence({3, 0, 1}, 2));
  EXPECT_EQ(qb.values(), (std::vector<std::uint64_t>{3, 0, 1, 0b111}));
}

TEST(PadSequences, Errors) {
  EXPECT_THROW((void)pad_sequences(Sequence({1, 2}, 2), Sequence({1}, 3)), std::invalid_argument);
  EXPECT_THROW((void)pad_sequences(Sequence({0, 0, 0}, 0), Sequence({0}, 0)), std::invalid_argument);
}

TEST(PadSequences, NoSpuriousMatches) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    auto make = [&](std::size_t len) {
      std::vector<std::uint64_t> v(len);
      for (auto& x : v) x = rng() % (std::uint64_t{1} << d);
      return Sequence(v, d);
    };
    const Sequence a = make(1 + rng() % 7);
    const Sequence b = make(1 + rng() % 7);
    const auto [pa, pb] = pad_sequences(a, b);
    ASSERT_TRUE(pa.is_power_of_two_length());
    ASSERT_TRUE(pb.is_power_of_two_length());
    ASSERT_EQ(brute_force_matches(pa, pb), brute_force_matches(a, b));
  }
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_matches(Sequence({5}, 3), Sequence({5}, 3)), (MatchSet{{0, 0}}));
  // ATGA, TGAT, GATG, ATGA
  const Sequence k({0b00011000, 0b01100001, 0b10000110, 0b00011000}, 8);
  EXPECT_EQ(brute_force_matches(k, k), (MatchSet{{0, 0}, {0, 3}, {1, 1}, {2, 2}, {3, 0}, {3, 3}}));
  EXPECT_TRUE(brute_force_matches(Sequence({0, 1}, 2), Sequence({2, 3}, 2)).empty());
  EXPECT_THROW((void)brute_force_matches(Sequence({0}, 1), Sequence({0}, 2)), std::invalid_argument);
}

TEST(PlantMatches, ExactCountAcrossSizes) {
  for (int n = 1; n <= 4; ++n) {
    const std::size_t big_n = std::size_t{1} << (2 * n);
    for (std::size_t m : {std::size_t{0}, std::size_t{1}, big_n / 8, big_n / 4, big_n / 2, 3 * big_n / 4}) {
      // Three pairs cannot be planted in a 2x2 grid: matches form disjoint blocks.
      if (n == 1 && m == 3) {
        EXPECT_THROW((void)plant_matches(n, n, 4, m, 0), std::invalid_argument);
        continue;
      }
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const PlantedInstance p = plant_matches(n, n, 4, m, seed);
        ASSERT_EQ(p.matches.size(), m) << "n=" << n << " m=" << m;
        ASSERT_EQ(brute_force_matches(p.a, p.b), p.matches);
      }
    }
  }
  const PlantedInstance big = plant_matches(5, 5, 8, 32, 1);
  EXPECT_EQ(big.matches.size(), 32U);
  EXPECT_THROW((void)plant_matches(1, 1, 4, 5, 0), std::invalid_argument);
}

TEST(PlantMatches, Deterministic) {
  const PlantedInstance a = plant_matches(3, 2, 4, 5, 77);
  const PlantedInstance b = plant_matches(3, 2, 4, 5, 77);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.b, b.b);
}

TEST(RunQcam, NoMatchesRejectsEveryShot) {
  const QcamResult r = run_qcam(Sequence({0, 1}, 2), Sequence({2, 3}, 2), 0, 300, 1);
  EXPECT_EQ(r.rejected, 300U);
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(collect_matches(r).empty());
}

TEST(RunQcam, VerifiedRecordsAreRealMatches) {
  const PlantedInstance p = plant_matches(2, 2, 4, 3, 4);
  const QcamResult r = run_qcam(p.a, p.b, 1, 1000, 9);
  std::uint64_t total = r.rejected;
  for (const MatchRecord& rec : r.records) {
    EXPECT_EQ(p.a[rec.addr_a], p.b[rec.addr_b]);
    EXPECT_EQ(rec.data_a.value(), p.a[rec.addr_a]);
    EXPECT_EQ(rec.data_b.value(), p.b[rec.addr_b]);
    total += rec.count;
  }
  EXPECT_EQ(total, r.shots);
  EXPECT_EQ(r.verified_shots() + r.rejected, 1000U);
}

TEST(RunQcam, QuarterPlantedVerifiedFraction) {
  const PlantedInstance p = plant_matches(2, 2, 4, 4, 12);
  const std::uint64_t shots = 2000;
  const QcamResult r = run_qcam(p.a, p.b, 1, shots, 3);
  const double expected = success_probability(4, 16.0, 1);
  const double sigma = std::sqrt(expected * (1 - expected) / shots);
  const double frac = static_cast<double>(r.verified_shots()) / shots;
  EXPECT_GE(frac, expected - 5 * sigma - 1e-12);
  EXPECT_NEAR(expected, 1.0, 1e-12);
}

TEST(RunQcam, FrozenResult) {
  const PlantedInstance p = plant_matches(2, 2, 3, 2, 6);
  const QcamResult r = run_qcam(p.a, p.b, 2, 500, 11);
  EXPECT_EQ(r.verified_shots(), 474U);
  EXPECT_EQ(r.rejected, 26U);
}

TEST(CollectMatches, Deduplicates) {
  QcamResult r;
  r.records.push_back({1, 2, BitString(3, 2), BitString(3, 2), 5});
  r.records.push_back({1, 2, BitString(3, 2), BitString(3, 2), 2});
  EXPECT_EQ(collect_matches(r), (MatchSet{{1, 2}}));
  EXPECT_TRUE(collect_matches(QcamResult{}).empty());
}

TEST(ShotBudget, Formula) {
  EXPECT_EQ(default_shot_budget(0.0), 300U);
  EXPECT_EQ(default_shot_budget(1.0), 300U);
  EXPECT_EQ(default_shot_budget(10.0), static_cast<std::uint64_t>(std::ceil(500 * std::log(11.0))));
  EXPECT_EQ(default_shot_budget(32.0), static_cast<std::uint64_t>(std::ceil(1600 * std::log(33.0))));
}

TEST(Json, DocumentedKeys) {
  const QcamResult r = run_qcam(Sequence({1, 2}, 2), Sequence({2, 1}, 2), 1, 50, 1);
  const nlohmann::ordered_json j = qcam_result_to_json(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"k", "shots", "seed", "matches", "rejected"}));
  for (const auto& m : j["matches"]) {
    EXPECT_TRUE(m.contains("i"));
    EXPECT_TRUE(m.contains("j"));
    EXPECT_TRUE(m.contains("value"));
  }
}

TEST(Properties, SoundUnderAnySeedAndIterationCount) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 150; ++trial) {
    const int na = static_cast<int>(rng() % 3);
    const int nb = 1 + static_cast<int>(rng() % 2);
    const int d = 1 + static_cast<int>(rng() % 3);
    const Sequence a = random_sequence(na, d, rng);
    const Sequence b = random_sequence(nb, d, rng);
    const int k = static_cast<int>(rng() % 5);
    const QcamResult r = run_qcam(a, b, k, 200, rng());
    const MatchSet truth = brute_force_matches(a, b);
    for (const auto& pair : collect_matches(r)) ASSERT_TRUE(truth.count(pair));
  }
}

TEST(Properties, CompleteAtDeskScale) {
  std::mt19937_64 rng(4321);
  int complete = 0;
  int trials = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const std::size_t big_n = std::size_t{1} << (2 * n);
    const std::size_t m = 1 + rng() % (big_n / 2);
    const PlantedInstance p = plant_matches(n, n, 4, m, rng());
    const auto shots = static_cast<std::uint64_t>(std::ceil(50.0 * m * std::log(m + 1.0))) + 300;
    const QcamResult r = run_qcam(p.a, p.b, eq16(m, static_cast<double>(big_n)), shots, rng());
    complete += collect_matches(r) == p.matches ? 1 : 0;
    ++trials;
  }
  EXPECT_GE(complete, 95) << complete << "/" << trials;
}

TEST(Properties, VerifiedFractionMatchesAnalytic) {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const double big_n = std::ldexp(1.0, 2 * n);
    const std::size_t m = 1 + rng() % static_cast<std::size_t>(big_n / 2);
    const int k = static_cast<int>(rng() % 4);
    const PlantedInstance p = plant_matches(n, n, 4, m, rng());
    const std::uint64_t shots = 2000;
    const QcamResult r = run_qcam(p.a, p.b, k, shots, rng());
    const double expected = success_probability(m, big_n, k);
    const double sigma = std::sqrt(expected * (1 - expected) / shots);
    const double frac = static_cast<double>(r.verified_shots()) / shots;
    EXPECT_LE(std::abs(frac - expected), 5 * sigma + 1e-12) << "m=" << m << " k=" << k;
  }
}

}  // namespace
}  // namespace qcamsim
