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


#ifndef FLOSURF_STORAGE_HPP
#define FLOSURF_STORAGE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "flosurf/code_layout.hpp"
#include "flosurf/decoder.hpp"
#include "flosurf/gaussian_state.hpp"
#include "flosurf/rng.hpp"

namespace flosurf {

enum class InitialBasis : std::uint8_t { X, Y };

/// Per-qubit rotation angles: the noise is prod_u exp(i eta_u Z_u).
struct StorageNoise {
  std::vector<double> eta;

  static StorageNoise uniform(const CodeLayout& layout, double theta);
};

struct OutcomeSample {
  std::vector<int> m;  // +-1 per vertex
  double log_weight = 0.0;
  /// Largest |kappa (w+ + w-) - 1| over the sweep before renormalising.
  double normalization_defect = 0.0;
  int peak_modes = 0;
  std::uint64_t entry_updates = 0;
};

struct StorageTrial {
  std::vector<int> m;
  std::vector<int> s;  // +-1 per X-face
  Correction correction;
  double theta_s = 0.0;
  double log_p_plus = 0.0;
  double log_p_minus = 0.0;
  double log_q_plus = 0.0;
  double log_q_minus = 0.0;
  /// |cos^2 + sin^2 - 1| of the two weight ratios.
  double trig_defect = 0.0;
  double normalization_defect = 0.0;
  int peak_modes = 0;
  /// Covariance entries written over all five circuit runs.
  std::uint64_t entry_updates = 0;
};

struct LogicalAngle {
  double theta = 0.0;
  double cos2 = 1.0;
  double sin2 = 0.0;
  double log_p_plus = 0.0;
  double log_p_minus = 0.0;
  double log_q_plus = 0.0;
  double log_q_minus = 0.0;
  std::uint64_t entry_updates = 0;
};

/// Storage of |+_L> under Z rotations, simulated qubit by qubit on the
/// windowed link state. Holds a pointer to the layout, which must outlive it.
class StorageSimulator {
 public:
  explicit StorageSimulator(const CodeLayout& layout);

  const CodeLayout& layout() const { return *layout_; }

  OutcomeSample sample_outcomes(const StorageNoise& noise, PhiloxStream& rng,
                                InitialBasis basis = InitialBasis::X) const;

  /// log of the product of all measurement probabilities with every
  /// outcome forced to +1; -infinity if some branch is impossible.
  double log_weight_of_all_plus(std::span<const double> angles, InitialBasis basis) const;

  /// Residual logical rotation after applying Z(h) as the correction.
  LogicalAngle logical_angle(const StorageNoise& noise, std::span<const std::uint8_t> h) const;

  StorageTrial run_trial(const Decoder& decoder, const StorageNoise& noise, PhiloxStream& rng,
                         DecoderKind kind = DecoderKind::Mwpm) const;

 private:
  struct CircuitStats {
    int peak_modes = 0;
    std::uint64_t entry_updates = 0;
  };

  template <class Choose>
  double run_circuit(std::span<const double> angles, InitialBasis basis, Choose&& choose,
                     CircuitStats* stats) const;
  double log_weight(std::span<const double> angles, InitialBasis basis, CircuitStats* stats) const;

  const CodeLayout* layout_;
  // Initial pair containing each mode, per basis.
  std::vector<ModePair> pair_x_;
  std::vector<ModePair> pair_y_;
  int capacity_ = 0;
};

/// Unnormalised weight, exp(log_weight_of_all_plus).
double weight_of_all_plus(const StorageSimulator& sim, std::span<const double> angles,
                          InitialBasis basis);

struct StorageMetrics {
  std::size_t samples = 0;
  double p_l = 0.0;
  double p_l_se = 0.0;
  double p_l_twirl = 0.0;
  double p_l_twirl_se = 0.0;
  double conditional_ratio = 1.0;
  double conditional_ratio_se = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double average_channel_ratio = 1.0;
  double average_channel_ratio_se = 0.0;
  /// Set when a ratio had a zero denominator and was reported as 1.
  bool ratio_limit = false;
  /// Counts of theta_s over [0, pi) in equal bins.
  std::vector<std::size_t> histogram;
};

StorageMetrics estimate_storage_metrics(std::span<const double> theta_s, int histogram_bins = 50);

/// One Monte Carlo shot of iid Z errors with probability epsilon.
/// Returns true when error times correction anticommutes with X_L.
bool twirl_trial(const Decoder& decoder, double epsilon, PhiloxStream& rng,
                 DecoderKind kind = DecoderKind::Mwpm);

}  // namespace flosurf

#endif  // FLOSURF_STORAGE_HPP
