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


#ifndef FLOSURF_PREP_HPP
#define FLOSURF_PREP_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "flosurf/code_layout.hpp"
#include "flosurf/decoder.hpp"
#include "flosurf/gaussian_state.hpp"
#include "flosurf/rng.hpp"

namespace flosurf {

struct Bloch {
  double x = 1.0;
  double y = 0.0;
  double z = 0.0;
  double norm() const;
};

/// Bloch vector of exp(i phi X) exp(i theta Z) |+>.
Bloch bloch_from_angles(double theta, double phi);

struct PrepNoise {
  std::vector<Bloch> qubits;

  static PrepNoise from_angles(const CodeLayout& layout, double theta, double phi);
};

struct PrepTrial {
  std::vector<int> m;  // +-1 per edge
  std::vector<int> s;  // +-1 per face
  Correction correction;
  Bloch bloch;
  /// Bloch vector before the Z_L sign fix.
  Bloch raw;
  bool flipped = false;
  int peak_modes = 0;
  std::uint64_t entry_updates = 0;
};

/// Preparation of |+_L> from a product state by measuring every link in
/// column order. Holds a pointer to the layout, which must outlive it.
class PrepSimulator {
 public:
  explicit PrepSimulator(const CodeLayout& layout);

  const CodeLayout& layout() const { return *layout_; }

  PrepTrial run_trial(const Decoder& decoder, const PrepNoise& noise, PhiloxStream& rng,
                      DecoderKind kind = DecoderKind::Peel) const;

  /// Bloch vector from link outcomes, a correction and the corner covariance.
  Bloch read_bloch(std::span<const int> m, const Correction& correction, double m12, double m13,
                   double m23) const;

 private:
  const CodeLayout* layout_;
  std::vector<ScheduleStep> schedule_;
  int capacity_ = 0;
};

struct PrepEstimate {
  std::size_t samples = 0;
  double p_l = 0.0;
  double p_l_se = 0.0;
};

/// Mean and standard error of sqrt(2) sqrt(1 - bx).
PrepEstimate estimate_prep_PL(std::span<const double> bx);

/// Same estimator from full pure-state Bloch vectors, evaluated without
/// cancellation near bx = 1.
PrepEstimate estimate_prep_PL(std::span<const Bloch> bloch);

/// Maps (theta, phi) into [0, pi/4]^2 using theta -> theta + pi/2,
/// phi -> phi + pi/2, theta -> -theta and phi -> -phi.
std::pair<double, double> prep_symmetry_check(double theta, double phi);

}  // namespace flosurf

#endif  // FLOSURF_PREP_HPP
