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


#ifndef FLOSURF_ORACLE_HPP
#define FLOSURF_ORACLE_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "flosurf/code_layout.hpp"
#include "flosurf/decoder.hpp"
#include "flosurf/gaussian_state.hpp"
#include "flosurf/prep.hpp"

namespace flosurf {

using cplx = std::complex<double>;
using QubitAmplitudes = std::array<cplx, 2>;

/// Dense Jordan-Wigner representation of Majorana modes 0..num_modes-1:
/// mode 2j is Z..Z Y_j and mode 2j+1 is Z..Z X_j on qubit j.
class DenseMajorana {
 public:
  explicit DenseMajorana(int num_modes);

  /// Unique state with sign i c_p c_q = +1 on every pair, obtained by
  /// projecting a seeded random vector.
  static DenseMajorana from_pairing(int num_modes, std::span<const ModePair> pairs,
                                    std::uint64_t seed);

  /// Pure state with covariance m (mode r is row r), found as the top
  /// eigenvector of sum_{p<q} m_pq i c_p c_q by power iteration.
  static DenseMajorana from_covariance(const DenseMatrix& m, std::uint64_t seed);

  int num_modes() const { return modes_; }
  std::size_t dim() const { return psi_.size(); }

  std::vector<cplx> apply(int p, std::span<const cplx> v) const;
  void rotate(int p, int q, double gamma);
  double measure_pair(int p, int q, int outcome);
  double expectation_pair(int p, int q) const;
  /// i^{k/2} <c_{m1} ... c_{mk}>.
  double wick(std::span<const int> modes) const;
  /// Largest deviation of {c_p, c_q} from 2 delta_pq.
  double anticommutator_defect() const;

  const std::vector<cplx>& state() const { return psi_; }
  void set_state(std::vector<cplx> psi) { psi_ = std::move(psi); }
  double norm() const;

 private:
  int modes_;
  std::vector<cplx> psi_;
};

/// Qubit state vector; qubit u is bit u of the basis index.
class DenseState {
 public:
  explicit DenseState(int num_qubits);
  static DenseState product(std::span<const QubitAmplitudes> qubits);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  std::vector<cplx>& amplitudes() { return amp_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  /// Applies X^x Z^z (Z first).
  void apply_pauli(std::uint64_t xmask, std::uint64_t zmask);
  void apply_z_rotation(int u, double eta);
  /// Applies (I + sign P)/2 with P = X(mask) or Z(mask).
  void project(PauliType type, std::uint64_t mask, int sign);
  /// <psi| X^x Z^z |psi>.
  cplx expectation(std::uint64_t xmask, std::uint64_t zmask) const;
  cplx inner(const DenseState& other) const;
  double norm2() const;
  void scale(double factor);

 private:
  int n_;
  std::vector<cplx> amp_;
};

QubitAmplitudes qubit_from_angles(double theta, double phi);
Bloch bloch_of(const QubitAmplitudes& q);
std::uint64_t vertex_mask(std::span<const int> vertices);
std::uint64_t support_mask(std::span<const std::uint8_t> support);

/// Exact p(s) over all faces; key bit f is set when s_f = -1.
std::map<std::uint64_t, double> dense_syndrome_distribution(const CodeLayout& layout,
                                                            const DenseState& psi);

struct StorageReferenceRow {
  std::uint64_t key = 0;  // bit i set when X-face i (faces_of_type order) is -1
  double probability = 0.0;
  double theta = 0.0;
  Correction correction;
};

struct StorageReference {
  std::vector<StorageReferenceRow> rows;
  /// Largest p(s) across random logical inputs minus the reference p(s).
  double input_probability_defect = 0.0;
  /// Largest deviation of theta_s (mod pi) across random logical inputs.
  double input_angle_defect = 0.0;
  /// Largest | |<0_L|phi>|^2 + |<1_L|phi>|^2 - 1 | after correction.
  double codespace_defect = 0.0;
  /// Total probability of a nontrivial Z-face syndrome.
  double z_face_probability = 0.0;
  /// Exact sum_s p(s) 2|sin theta_s|.
  double p_l = 0.0;
};

/// Exact per-syndrome storage outcome for U = prod exp(i eta_u Z_u) on
/// psi_L, corrected by the decoder's matching. Checks input independence on
/// logical_inputs random logical states.
StorageReference dense_storage_reference(const CodeLayout& layout, const Decoder& decoder,
                                         std::span<const double> eta, const QubitAmplitudes& psi_l,
                                         int logical_inputs, std::uint64_t seed);

struct PrepReferenceRow {
  std::uint64_t key = 0;  // bit f set when face f is -1
  double probability = 0.0;
  Bloch bloch;
  bool flipped = false;
  Correction correction;
};

/// Exact per-syndrome Bloch vectors after the preparation decoder and the
/// Z_L sign fix, for syndromes of probability above 1e-14.
std::vector<PrepReferenceRow> dense_prep_reference(const CodeLayout& layout, const Decoder& decoder,
                                                   std::span<const QubitAmplitudes> qubits);

/// Exact sum_s p(s) sqrt(2) sqrt(1 - bx_s).
double dense_prep_pl(std::span<const PrepReferenceRow> rows);

}  // namespace flosurf

#endif  // FLOSURF_ORACLE_HPP
