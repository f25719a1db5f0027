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


#ifndef FLOSURF_GAUSSIAN_STATE_HPP
#define FLOSURF_GAUSSIAN_STATE_HPP

#include <array>
#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

namespace flosurf {

/// Operator sign * i * c_p * c_q.
struct ModePair {
  int p = 0;
  int q = 0;
  int sign = 1;
};

/// Dense row-major square matrix used for covariance snapshots.
struct DenseMatrix {
  int rows = 0;
  std::vector<double> data;

  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * rows + c]; }
  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * rows + c]; }
};

/// Work done on the covariance since construction.
struct OpCounts {
  std::uint64_t rotations = 0;
  std::uint64_t measurements = 0;
  /// Covariance entries written by rotate and measure_pair.
  std::uint64_t entry_updates = 0;
};

/// Pure fermionic Gaussian state over a window of labelled Majorana modes.
///
/// Entry (p, q) of the covariance is Tr(i c_p c_q rho). Labels are
/// non-negative integers chosen by the caller; rows are reordered freely
/// on detach, so callers address modes by label only.
class GaussianState {
 public:
  static constexpr double kImpossible = 1e-12;
  static constexpr double kTolerance = 1e-9;

  GaussianState() = default;

  static GaussianState from_pairing(std::span<const ModePair> pairs);
  /// As above, also requiring the pairs to cover exactly the given modes.
  static GaussianState from_pairing(std::span<const ModePair> pairs, std::span<const int> modes);

  /// Four-mode encoding of a single-qubit state with Bloch vector b.
  static GaussianState from_bloch_c4(double bx, double by, double bz);
  static GaussianState from_bloch_c4(const std::array<int, 4>& labels, double bx, double by,
                                     double bz);

  static GaussianState tensor(const GaussianState& a, const GaussianState& b);

  /// Applies exp(gamma c_p c_q). O(num_modes).
  void rotate(int p, int q, double gamma);

  /// Projects onto sign i c_p c_q = outcome and returns its probability.
  /// Throws ImpossibleOutcome, leaving the state untouched, if the
  /// probability is at most kImpossible. O(num_modes^2).
  double measure_pair(int p, int q, int outcome);

  /// Probability of outcome without collapsing.
  double outcome_probability(int p, int q, int outcome) const;

  double expectation_pair(int p, int q) const;

  /// Pfaffian of the covariance restricted to modes, in the given order.
  double wick_expectation(std::span<const int> modes) const;

  /// Tensor with a fresh pairing on unused labels.
  void attach_pairs(std::span<const ModePair> pairs);
  void attach_pair(int p, int q, int sign = 1);
  void attach(const GaussianState& other);
  /// Same as attach(from_bloch_c4(labels, bx, by, bz)) without a temporary.
  void attach_c4(const std::array<int, 4>& labels, double bx, double by, double bz);

  /// Removes two modes that are paired only with each other.
  void detach_pair(int p, int q);

  int num_modes() const { return k_; }
  bool contains(int label) const {
    return label >= 0 && static_cast<std::size_t>(label) < index_.size() && index_[label] >= 0;
  }
  const std::vector<int>& labels() const { return labels_; }
  int peak_modes() const { return peak_; }
  const OpCounts& op_counts() const { return ops_; }
  void reset_peak() { peak_ = k_; }

  /// Preallocates room for this many modes.
  void reserve(int capacity);

  /// Covariance ordered as labels().
  DenseMatrix covariance() const;

  /// Largest violation of antisymmetry and of |entry| <= 1.
  double antisymmetry_defect() const;
  /// Largest entry of |M M^T - I|.
  double purity_defect() const;

 private:
  double* row(int i) { return m_.data() + static_cast<std::size_t>(i) * cap_; }
  const double* row(int i) const { return m_.data() + static_cast<std::size_t>(i) * cap_; }
  double& at(int i, int j) { return m_[static_cast<std::size_t>(i) * cap_ + j]; }
  double at(int i, int j) const { return m_[static_cast<std::size_t>(i) * cap_ + j]; }

  int index_of(int label) const;
  int add_mode(int label);
  void remove_index(int i);
  void grow(int capacity);

  int k_ = 0;
  int cap_ = 0;
  int peak_ = 0;
  OpCounts ops_;
  std::vector<double> m_;
  std::vector<int> labels_;
  std::vector<int> index_;
  std::vector<double> scratch_;
};

/// Pfaffian of a dense antisymmetric matrix (Parlett-Reid with pivoting).
double pfaffian(DenseMatrix a);

}  // namespace flosurf

#endif  // FLOSURF_GAUSSIAN_STATE_HPP
