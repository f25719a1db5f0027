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
#include <numbers>
#include <random>

#include "flosurf/code_layout.hpp"
#include "flosurf/decoder.hpp"
#include "flosurf/errors.hpp"
#include "flosurf/oracle.hpp"

namespace flosurf {
namespace {

constexpr double kPi = std::numbers::pi;

DenseState logical_plus(const CodeLayout& l) {
  DenseState zero(l.num_qubits());
  for (const Face& f : l.faces()) zero.project(f.type, vertex_mask(f.vertices), 1);
  zero.scale(1.0 / std::sqrt(zero.norm2()));
  DenseState plus = zero;
  const std::uint64_t xl = vertex_mask(l.logical_x_support());
  for (std::size_t b = 0; b < plus.dim(); ++b) {
    plus.amplitudes()[b] = (zero.amplitudes()[b] + zero.amplitudes()[b ^ xl]) / std::sqrt(2.0);
  }
  return plus;
}

TEST(DenseOracle, LogicalPlusHasTrivialSyndrome) {
  const CodeLayout l = CodeLayout::build(3);
  const DenseState plus = logical_plus(l);
  EXPECT_NEAR(plus.norm2(), 1.0, 1e-12);
  const auto dist = dense_syndrome_distribution(l, plus);
  ASSERT_TRUE(dist.contains(0));
  EXPECT_NEAR(dist.at(0), 1.0, 1e-12);
  const std::uint64_t xl = vertex_mask(l.logical_x_support());
  EXPECT_NEAR(plus.expectation(xl, 0).real(), 1.0, 1e-12);
}

TEST(DenseOracle, SyndromeDistributionSumsToOne) {
  const CodeLayout l = CodeLayout::build(3);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> uni(-kPi, kPi);
  for (int t = 0; t < 5; ++t) {
    std::vector<QubitAmplitudes> q;
    for (int u = 0; u < 9; ++u) q.push_back(qubit_from_angles(uni(gen), uni(gen)));
    const auto dist = dense_syndrome_distribution(l, DenseState::product(q));
    double total = 0.0;
    for (const auto& [k, p] : dist) {
      EXPECT_GE(p, 0.0);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(DenseOracle, QubitFromAnglesIsNormalised) {
  const QubitAmplitudes q = qubit_from_angles(0.3, -1.1);
  EXPECT_NEAR(std::norm(q[0]) + std::norm(q[1]), 1.0, 1e-12);
  const Bloch b = bloch_of(qubit_from_angles(0.0, 0.0));
  EXPECT_NEAR(b.x, 1.0, 1e-12);
}

TEST(DenseOracle, StorageReferenceExtremes) {
  const CodeLayout l = CodeLayout::build(3);
  const Decoder dec(l);
  const QubitAmplitudes plus{cplx(1 / std::sqrt(2.0)), cplx(1 / std::sqrt(2.0))};
  const std::vector<double> zero(9, 0.0);
  const StorageReference r0 = dense_storage_reference(l, dec, zero, plus, 2, 1);
  for (const auto& row : r0.rows) {
    if (row.key == 0) {
      EXPECT_NEAR(row.probability, 1.0, 1e-12);
      EXPECT_NEAR(row.theta, 0.0, 1e-12);
    } else {
      EXPECT_NEAR(row.probability, 0.0, 1e-12);
    }
  }
  EXPECT_NEAR(r0.p_l, 0.0, 1e-12);

  const std::vector<double> half(9, kPi / 2);
  const StorageReference r1 = dense_storage_reference(l, dec, half, plus, 2, 1);
  for (const auto& row : r1.rows) {
    if (row.key == 0) {
      EXPECT_NEAR(row.theta, kPi / 2, 1e-9);
    }
  }
  EXPECT_NEAR(r1.p_l, 2.0, 1e-9);
  EXPECT_LT(r1.codespace_defect, 1e-9);
}

TEST(DenseOracle, StorageReferenceIsDeterministic) {
  const CodeLayout l = CodeLayout::build(3);
  const Decoder dec(l);
  const QubitAmplitudes plus{cplx(1 / std::sqrt(2.0)), cplx(1 / std::sqrt(2.0))};
  const std::vector<double> eta{0.1, -0.2, 0.3, 0.05, 0.4, -0.5, 0.2, 0.0, -0.1};
  const StorageReference a = dense_storage_reference(l, dec, eta, plus, 3, 7);
  const StorageReference b = dense_storage_reference(l, dec, eta, plus, 3, 7);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].key, b.rows[i].key);
    EXPECT_EQ(a.rows[i].probability, b.rows[i].probability);
    EXPECT_EQ(a.rows[i].theta, b.rows[i].theta);
  }
  EXPECT_EQ(a.p_l, b.p_l);
  EXPECT_LT(a.input_probability_defect, 1e-10);
}

TEST(DenseOracle, PrepReferenceNoiseless) {
  const CodeLayout l = CodeLayout::build(3);
  const Decoder dec(l);
  const std::vector<QubitAmplitudes> q(9, qubit_from_angles(0.0, 0.0));
  const auto rows = dense_prep_reference(l, dec, q);
  double total = 0.0;
  for (const auto& r : rows) {
    total += r.probability;
    EXPECT_NEAR(r.bloch.x, 1.0, 1e-9);
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_NEAR(dense_prep_pl(rows), 0.0, 1e-6);
}

TEST(DenseOracle, MajoranaPairExpectations) {
  const std::vector<ModePair> pairs{{0, 1}, {2, 3}, {4, 5}};
  DenseMajorana m = DenseMajorana::from_pairing(6, pairs, 3);
  EXPECT_NEAR(m.norm(), 1.0, 1e-12);
  EXPECT_NEAR(m.expectation_pair(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(m.expectation_pair(0, 2), 0.0, 1e-12);
  EXPECT_THROW(m.measure_pair(0, 1, -1), ImpossibleOutcome);
}

}  // namespace
}  // namespace flosurf
