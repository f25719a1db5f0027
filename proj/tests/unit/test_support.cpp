/*
 * Copyright 2026 The flosurf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "flosurf/errors.hpp"
#include "flosurf/experiment.hpp"
#include "flosurf/rng.hpp"
#include "flosurf/stats.hpp"

namespace flosurf {
namespace {

constexpr double kPi = std::numbers::pi;

using Block = std::array<std::uint32_t, 4>;

// Reference vectors for Philox4x32-10.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
  PhiloxStream a(5, 0), b(5, 0), c(5, 1), e(6, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    seen.insert(x);
    seen.insert(c.next_u64());
    seen.insert(e.next_u64());
  }
  EXPECT_EQ(seen.size(), 300u);
}

TEST(Philox, UniformMoments) {
  PhiloxStream r(7, 3);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sq / n, 1.0 / 3, 0.005);
}

TEST(ParseAngle, Forms) {
  EXPECT_DOUBLE_EQ(parse_angle("0.25"), 0.25);
  EXPECT_NEAR(parse_angle("0.08pi"), 0.08 * kPi, 1e-15);
  EXPECT_NEAR(parse_angle("pi/4"), kPi / 4, 1e-15);
  EXPECT_NEAR(parse_angle("-pi"), -kPi, 1e-15);
  EXPECT_THROW(parse_angle(""), InvalidConfig);
  EXPECT_THROW(parse_angle("abc"), InvalidConfig);
  EXPECT_THROW(parse_angle("0.1pix"), InvalidConfig);
}

TEST(ParseAngle, Grids) {
  const auto list = parse_angle_grid("0.1,0.2pi");
  ASSERT_EQ(list.size(), 2u);
  EXPECT_NEAR(list[1], 0.2 * kPi, 1e-15);
  const auto range = parse_angle_grid("0.06pi:0.12pi:0.01pi");
  ASSERT_EQ(range.size(), 7u);
  EXPECT_NEAR(range.front(), 0.06 * kPi, 1e-12);
  EXPECT_NEAR(range.back(), 0.12 * kPi, 1e-12);
  EXPECT_THROW(parse_angle_grid("0.1:0.2:0"), InvalidConfig);
  EXPECT_EQ(parse_distances("5,9,13"), (std::vector<int>{5, 9, 13}));
  EXPECT_THROW(parse_distances("4"), InvalidConfig);
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.distance = 5;
  EXPECT_NO_THROW(validate(c));
  c.distance = 4;
  EXPECT_THROW(validate(c), InvalidConfig);
  c.distance = 1;
  EXPECT_THROW(validate(c), InvalidConfig);
  c.distance = 3;
  c.trials = 0;
  EXPECT_THROW(validate(c), InvalidConfig);
  c.trials = 1;
  c.threads = 0;
  EXPECT_THROW(validate(c), InvalidConfig);
}

TEST(Config, AnglesFile) {
  const std::string path = testing::TempDir() + "/flosurf_angles.txt";
  {
    std::ofstream f(path);
    f << "# header\n0.1 0.2\n0.3  # trailing\n";
  }
  const auto a = read_angles_file(path, 3);
  EXPECT_EQ(a, (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_THROW(read_angles_file(path, 4), InvalidConfig);
  EXPECT_ANY_THROW(read_angles_file(path + ".missing", 3));
}

TEST(Stats, MeanAndProportion) {
  const std::vector<double> v{1, 2, 3, 4};
  const MeanEstimate m = mean_se(v);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.se, std::sqrt(5.0 / 3.0) / 2.0, 1e-12);
  EXPECT_THROW(mean_se(std::span<const double>{}), EmptySample);
  const MeanEstimate p = proportion(25, 100);
  EXPECT_DOUBLE_EQ(p.mean, 0.25);
  EXPECT_NEAR(p.se, std::sqrt(0.25 * 0.75 / 100), 1e-15);
}

TEST(Stats, StandardErrorShrinksAsRootN) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> normal;
  std::vector<double> v(160000);
  for (double& x : v) x = normal(gen);
  const double small = mean_se(std::span<const double>(v).first(10000)).se;
  const double large = mean_se(v).se;
  EXPECT_NEAR(small / large, 4.0, 0.1);
}

TEST(Stats, FindCrossing) {
  const std::vector<double> grid{0, 1, 2, 3};
  const std::vector<double> small{1, 2, 3, 4};
  const std::vector<double> large{0, 1, 3.5, 6};
  double x = 0.0;
  ASSERT_TRUE(find_crossing(grid, small, large, x));
  EXPECT_NEAR(x, 1.0 + 1.0 / 1.5, 1e-12);
  const std::vector<double> below{0, 0, 0, 0};
  EXPECT_FALSE(find_crossing(grid, small, below, x));
}

TEST(Stats, ThresholdScan) {
  const std::vector<double> grid{0.1, 0.2, 0.3, 0.4};
  std::vector<Curve> curves{
      {9, {0.01, 0.04, 0.2, 0.6}, {0.001, 0.001, 0.001, 0.001}},
      {5, {0.05, 0.1, 0.2, 0.3}, {0.001, 0.001, 0.001, 0.001}},
  };
  const ThresholdReport r = threshold_scan(grid, curves, 500, 3);
  ASSERT_EQ(r.crossings.size(), 1u);
  const Crossing c = r.largest_pair();
  EXPECT_EQ(c.d_small, 5);
  EXPECT_EQ(c.d_large, 9);
  ASSERT_TRUE(c.found);
  EXPECT_NEAR(c.x, 0.3, 1e-9);
  EXPECT_TRUE(c.ci_found);
  EXPECT_LE(c.ci_lo, c.x);
  EXPECT_GE(c.ci_hi, c.x);
  EXPECT_GT(c.bootstrap_hit_rate, 0.9);
  EXPECT_THROW(threshold_scan(grid, {curves[0]}), NotEnoughCurves);
}

TEST(Stats, PowerLawSlope) {
  const std::vector<double> x{9, 19, 29, 39, 49};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
  EXPECT_NEAR(fit_power_law(x, y), 1.7, 1e-12);
}

TEST(Stats, SyndromeHash) {
  const std::vector<int> a{1, -1, 1}, b{1, 1, -1};
  EXPECT_EQ(syndrome_hash(a).size(), 16u);
  EXPECT_NE(syndrome_hash(a), syndrome_hash(b));
  EXPECT_EQ(syndrome_hash(a), syndrome_hash(std::vector<int>{1, -1, 1}));
}

TEST(RunParallel, IndependentOfThreadCount) {
  auto body = [](std::size_t i) {
    PhiloxStream r(11, i);
    return r.uniform();
  };
  const auto one = run_parallel<double>(1000, 1, body);
  const auto eight = run_parallel<double>(1000, 8, body);
  EXPECT_EQ(one, eight);
  EXPECT_TRUE(run_parallel<int>(0, 4, [](std::size_t) { return 1; }).empty());
}

TEST(RunParallel, PropagatesExceptions) {
  auto body = [](std::size_t i) -> int {
    if (i == 37) throw std::runtime_error("boom");
    return static_cast<int>(i);
  };
  EXPECT_THROW(run_parallel<int>(100, 1, body), std::runtime_error);
  EXPECT_THROW(run_parallel<int>(100, 4, body), std::runtime_error);
}

TEST(Experiment, StorageCsvIsThreadIndependent) {
  const CodeLayout l = CodeLayout::build(5);
  const StorageNoise noise = StorageNoise::uniform(l, 0.08 * kPi);
  std::ostringstream a, b;
  write_storage_csv(a, run_storage(l, noise, 200, 4, 1));
  write_storage_csv(b, run_storage(l, noise, 200, 4, 8));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "trial,syndrome_hash,theta_s,sin_theta_s,weight_logs");
}

TEST(Experiment, PrepCsvIsThreadIndependent) {
  const CodeLayout l = CodeLayout::build(5);
  const PrepNoise noise = PrepNoise::from_angles(l, 0.1 * kPi, 0.05 * kPi);
  std::ostringstream a, b;
  write_prep_csv(a, run_prep(l, noise, 200, 4, 1));
  write_prep_csv(b, run_prep(l, noise, 200, 4, 8));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "trial,syndrome_hash,bx,by,bz");
}

TEST(Experiment, TwirlExtremes) {
  const CodeLayout l = CodeLayout::build(5);
  EXPECT_EQ(run_twirl(l, 0.0, 100, 1, 2), 0u);
  EXPECT_EQ(run_twirl(l, 1.0, 100, 1, 2), 100u);
}

TEST(Experiment, ScanCurvesShape) {
  const std::vector<double> grid{0.0, 0.5 * kPi};
  const auto curves = scan_curves(ScanKind::Storage, {3, 5}, grid, 20, 1, 2);
  ASSERT_EQ(curves.size(), 2u);
  for (const Curve& c : curves) {
    ASSERT_EQ(c.mean.size(), 2u);
    EXPECT_NEAR(c.mean[0], 0.0, 1e-12);
    EXPECT_NEAR(c.mean[1], 2.0, 1e-9);
  }
}

TEST(Experiment, SweepUsesCanonicalPoint) {
  const CodeLayout l = CodeLayout::build(3);
  const auto pts = prep_sweep(l, {0.3 * kPi}, {0.0}, 50, 1, 1);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_NEAR(pts[0].theta_canonical, 0.2 * kPi, 1e-12);
  EXPECT_EQ(pts[0].estimate.samples, 50u);
}

TEST(Experiment, SummaryJson) {
  const CodeLayout l = CodeLayout::build(3);
  ExperimentConfig c;
  c.trials = 10;
  const auto recs = run_storage(l, StorageNoise::uniform(l, 0.0), 10, 1, 1);
  const nlohmann::json j = storage_summary(c, recs);
  EXPECT_EQ(j.at("config").at("mode"), "storage");
  EXPECT_EQ(j.at("P_L").at("value"), 0.0);
  EXPECT_EQ(j.at("conditional_coherence_ratio").at("value"), 1.0);
}

}  // namespace
}  // namespace flosurf
