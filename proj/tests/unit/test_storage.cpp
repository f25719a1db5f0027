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
#include <map>
#include <numbers>
#include <random>

#include "flosurf/code_layout.hpp"
#include "flosurf/decoder.hpp"
#include "flosurf/errors.hpp"
#include "flosurf/oracle.hpp"
#include "flosurf/storage.hpp"
#include "flosurf/validation.hpp"

namespace flosurf {
namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t key_of(std::span<const int> s) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0) k |= std::uint64_t{1} << i;
  }
  return k;
}

std::vector<double> random_angles(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uni(-kPi / 2, kPi / 2);
  std::vector<double> eta(n);
  for (double& e : eta) e = uni(gen);
  return eta;
}

TEST(Storage, NoNoiseGivesTrivialSyndromeAndAngle) {
  for (int d : {3, 5, 9}) {
    const CodeLayout l = CodeLayout::build(d);
    const Decoder dec(l);
    const StorageSimulator sim(l);
    const StorageNoise noise = StorageNoise::uniform(l, 0.0);
    for (std::uint64_t t = 0; t < 20; ++t) {
      PhiloxStream rng(1, t);
      const StorageTrial tr = sim.run_trial(dec, noise, rng);
      for (int s : tr.s) EXPECT_EQ(s, 1);
      EXPECT_EQ(tr.theta_s, 0.0);
    }
  }
}

TEST(Storage, HalfPiActsAsLogicalZ) {
  for (int d : {3, 5, 7}) {
    const CodeLayout l = CodeLayout::build(d);
    const Decoder dec(l);
    const StorageSimulator sim(l);
    const StorageNoise noise = StorageNoise::uniform(l, kPi / 2);
    for (std::uint64_t t = 0; t < 10; ++t) {
      PhiloxStream rng(2, t);
      const StorageTrial tr = sim.run_trial(dec, noise, rng);
      for (int s : tr.s) EXPECT_EQ(s, 1);
      EXPECT_NEAR(tr.theta_s, kPi / 2, 1e-9);
    }
  }
}

TEST(Storage, ConditionalProbabilitiesNormalised) {
  const CodeLayout l = CodeLayout::build(7);
  const StorageSimulator sim(l);
  StorageNoise noise{random_angles(l.num_qubits(), 4)};
  for (InitialBasis basis : {InitialBasis::X, InitialBasis::Y}) {
    for (std::uint64_t t = 0; t < 20; ++t) {
      PhiloxStream rng(3, t);
      const OutcomeSample o = sim.sample_outcomes(noise, rng, basis);
      EXPECT_LT(o.normalization_defect, 1e-9);
      EXPECT_EQ(o.m.size(), 49u);
      EXPECT_LE(o.peak_modes, 8 * 7);
    }
  }
}

TEST(Storage, WeightOfAllPlusWithoutNoise) {
  const CodeLayout l = CodeLayout::build(5);
  const StorageSimulator sim(l);
  const std::vector<double> zero(25, 0.0);
  const double w = weight_of_all_plus(sim, zero, InitialBasis::X);
  EXPECT_GT(w, 0.0);
  EXPECT_TRUE(std::isfinite(sim.log_weight_of_all_plus(zero, InitialBasis::X)));
}

// Ratios of all-plus weights against |<+^n| U |+_L>|^2 on the dense space.
TEST(Storage, WeightRatiosMatchDenseAmplitudes) {
  const CodeLayout l = CodeLayout::build(3);
  const StorageSimulator sim(l);
  DenseState zero(9);
  for (const Face& f : l.faces()) zero.project(f.type, vertex_mask(f.vertices), 1);
  zero.scale(1.0 / std::sqrt(zero.norm2()));
  const std::uint64_t xl = vertex_mask(l.logical_x_support());
  DenseState plus_l = zero;
  for (std::size_t b = 0; b < plus_l.dim(); ++b) {
    plus_l.amplitudes()[b] = (zero.amplitudes()[b] + zero.amplitudes()[b ^ xl]) / std::sqrt(2.0);
  }
  auto dense_weight = [&](const std::vector<double>& eta) {
    DenseState v = plus_l;
    for (int u = 0; u < 9; ++u) v.apply_z_rotation(u, eta[u]);
    cplx a = 0.0;
    for (const cplx& x : v.amplitudes()) a += x;
    return std::norm(a) / 512.0;
  };
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> eta = random_angles(9, 100 + trial);
    std::vector<double> plus = eta, minus = eta;
    for (int u = 0; u < 9; ++u) {
      const bool h = gen() & 1;
      plus[u] += h ? kPi / 2 : 0.0;
    }
    minus = plus;
    for (int u : l.logical_z_support()) minus[u] += kPi / 2;
    const double flo = std::exp(sim.log_weight_of_all_plus(minus, InitialBasis::X) -
                                sim.log_weight_of_all_plus(plus, InitialBasis::X));
    EXPECT_NEAR(flo, dense_weight(minus) / dense_weight(plus), 1e-8 * std::max(1.0, flo));
  }
}

TEST(Storage, AnglesMatchDenseOraclePerSyndrome) {
  const CodeLayout l = CodeLayout::build(3);
  const Decoder dec(l);
  const StorageSimulator sim(l);
  const QubitAmplitudes plus{cplx(1 / std::sqrt(2.0)), cplx(1 / std::sqrt(2.0))};
  for (int v = 0; v < 5; ++v) {
    StorageNoise noise{random_angles(9, 200 + v)};
    const StorageReference ref = dense_storage_reference(l, dec, noise.eta, plus, 3, v);
    EXPECT_LT(ref.input_probability_defect, 1e-10);
    EXPECT_LT(ref.input_angle_defect, 1e-7);
    EXPECT_LT(ref.z_face_probability, 1e-10);
    double total = 0.0;
    for (const auto& row : ref.rows) {
      total += row.probability;
      if (row.probability < 1e-10) continue;
      const LogicalAngle la = sim.logical_angle(noise, row.correction.z_support);
      double diff = std::fmod(std::abs(la.theta - row.theta), kPi);
      diff = std::min(diff, kPi - diff);
      EXPECT_LT(diff, 1e-7) << "syndrome " << row.key;
      EXPECT_GE(la.theta, 0.0);
      EXPECT_LT(la.theta, kPi);
      EXPECT_NEAR(la.cos2 * la.cos2 + la.sin2 * la.sin2, 1.0, 1e-6);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

// Each syndrome frequency within 4.5 binomial standard deviations of p(s).
TEST(Storage, SyndromeFrequenciesMatchDenseOracle) {
  const CodeLayout l = CodeLayout::build(3);
  const Decoder dec(l);
  const StorageSimulator sim(l);
  const QubitAmplitudes plus{cplx(1 / std::sqrt(2.0)), cplx(1 / std::sqrt(2.0))};
  StorageNoise noise{random_angles(9, 300)};
  const StorageReference ref = dense_storage_reference(l, dec, noise.eta, plus, 0, 1);
  const int n = 50000;
  std::map<std::uint64_t, int> counts;
  for (int t = 0; t < n; ++t) {
    PhiloxStream rng(9, static_cast<std::uint64_t>(t));
    const OutcomeSample o = sim.sample_outcomes(noise, rng);
    ++counts[key_of(x_face_syndromes_from_vertex_outcomes(l, o.m))];
  }
  for (const auto& row : ref.rows) {
    const double freq = static_cast<double>(counts[row.key]) / n;
    const double sigma = std::sqrt(row.probability * (1 - row.probability) / n);
    EXPECT_LE(std::abs(freq - row.probability), 4.5 * sigma + 1e-12) << "syndrome " << row.key;
  }
}

TEST(Storage, LogicalErrorRateMatchesDenseOracle) {
  const CodeLayout l = CodeLayout::build(3);
  const Decoder dec(l);
  const StorageSimulator sim(l);
  const StorageNoise noise = StorageNoise::uniform(l, 0.08 * kPi);
  const QubitAmplitudes plus{cplx(1 / std::sqrt(2.0)), cplx(1 / std::sqrt(2.0))};
  const StorageReference ref = dense_storage_reference(l, dec, noise.eta, plus, 0, 1);
  std::vector<double> th;
  for (std::uint64_t t = 0; t < 20000; ++t) {
    PhiloxStream rng(10, t);
    th.push_back(sim.run_trial(dec, noise, rng).theta_s);
  }
  const StorageMetrics m = estimate_storage_metrics(th);
  EXPECT_LE(std::abs(m.p_l - ref.p_l), 3 * m.p_l_se) << m.p_l << " vs " << ref.p_l;
}

TEST(Storage, SignSymmetryOfTheta) {
  const CodeLayout l = CodeLayout::build(5);
  const Decoder dec(l);
  const StorageSimulator sim(l);
  std::vector<double> a, b;
  for (std::uint64_t t = 0; t < 4000; ++t) {
    PhiloxStream r1(11, t), r2(12, t);
    a.push_back(sim.run_trial(dec, StorageNoise::uniform(l, 0.08 * kPi), r1).theta_s);
    b.push_back(sim.run_trial(dec, StorageNoise::uniform(l, -0.08 * kPi), r2).theta_s);
  }
  const StorageMetrics ma = estimate_storage_metrics(a), mb = estimate_storage_metrics(b);
  EXPECT_LE(std::abs(ma.p_l - mb.p_l), 3 * std::hypot(ma.p_l_se, mb.p_l_se));
}

TEST(Storage, DecaysWithDistanceBelowThreshold) {
  std::vector<StorageMetrics> m;
  for (int d : {5, 9, 13}) {
    const CodeLayout l = CodeLayout::build(d);
    const Decoder dec(l);
    const StorageSimulator sim(l);
    const StorageNoise noise = StorageNoise::uniform(l, 0.06 * kPi);
    std::vector<double> th;
    for (std::uint64_t t = 0; t < 2000; ++t) {
      PhiloxStream rng(13, t);
      th.push_back(sim.run_trial(dec, noise, rng).theta_s);
    }
    m.push_back(estimate_storage_metrics(th));
  }
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    EXPECT_GT(m[i].p_l - m[i + 1].p_l, 3 * std::hypot(m[i].p_l_se, m[i + 1].p_l_se));
  }
}

TEST(StorageMetrics, Examples) {
  const std::vector<double> zeros(10, 0.0);
  StorageMetrics m = estimate_storage_metrics(zeros);
  EXPECT_EQ(m.p_l, 0.0);
  EXPECT_EQ(m.conditional_ratio, 1.0);
  EXPECT_EQ(m.average_channel_ratio, 1.0);
  EXPECT_TRUE(m.ratio_limit);

  const std::vector<double> half(10, kPi / 2);
  m = estimate_storage_metrics(half);
  EXPECT_NEAR(m.p_l, 2.0, 1e-12);
  EXPECT_NEAR(m.p_l_twirl, 2.0, 1e-12);
  EXPECT_NEAR(m.conditional_ratio, 1.0, 1e-12);
  EXPECT_NEAR(m.average_channel_ratio, 1.0, 1e-12);
  EXPECT_FALSE(m.ratio_limit);

  const std::vector<double> quarter(10, kPi / 4);
  m = estimate_storage_metrics(quarter);
  EXPECT_NEAR(m.p_l, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(m.p_l_twirl, 1.0, 1e-12);
  EXPECT_NEAR(m.conditional_ratio, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(m.epsilon, 0.5, 1e-12);
  EXPECT_NEAR(m.delta, 0.5, 1e-12);
  EXPECT_NEAR(m.average_channel_ratio, std::sqrt(2.0), 1e-12);

  int total = 0;
  for (auto c : m.histogram) total += static_cast<int>(c);
  EXPECT_EQ(total, 10);
  EXPECT_THROW(estimate_storage_metrics(std::span<const double>{}), EmptySample);
}

TEST(StorageMetrics, StandardErrorShrinksAsRootN) {
  std::mt19937_64 gen(14);
  std::uniform_real_distribution<double> uni(0, kPi);
  std::vector<double> th(40000);
  for (double& t : th) t = uni(gen);
  const StorageMetrics small = estimate_storage_metrics(std::span<const double>(th).first(10000));
  const StorageMetrics large = estimate_storage_metrics(th);
  EXPECT_NEAR(small.p_l_se / large.p_l_se, 2.0, 0.1);
}

TEST(Twirl, Extremes) {
  for (int d : {3, 5}) {
    const CodeLayout l = CodeLayout::build(d);
    const Decoder dec(l);
    for (std::uint64_t t = 0; t < 50; ++t) {
      PhiloxStream r0(15, t), r1(16, t);
      EXPECT_FALSE(twirl_trial(dec, 0.0, r0));
      EXPECT_TRUE(twirl_trial(dec, 1.0, r1));
    }
  }
}

TEST(OracleSuites, StorageCheckPasses) {
  const StorageCheck c = run_storage_check(CodeLayout::build(3), 3, 100000, 21, 1);
  EXPECT_TRUE(c.pass()) << to_json(c).dump();
}

TEST(OracleSuites, EngineCheckPasses) {
  const EngineCheck c = run_engine_check(200, 22);
  EXPECT_TRUE(c.pass()) << to_json(c).dump();
  EXPECT_GT(c.measurements, 0);
}

}  // namespace
}  // namespace flosurf
