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


#include "flosurf/prep.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "flosurf/errors.hpp"
#include "flosurf/stats.hpp"

namespace flosurf {

double Bloch::norm() const { return std::sqrt(x * x + y * y + z * z); }

Bloch bloch_from_angles(double theta, double phi) {
  using cplx = std::complex<double>;
  const double r = 1.0 / std::numbers::sqrt2;
  // exp(i theta Z)|+>
  const cplx a0 = std::polar(r, theta);
  const cplx b0 = std::polar(r, -theta);
  // exp(i phi X) = cos(phi) I + i sin(phi) X
  const cplx c(std::cos(phi), 0.0);
  const cplx s(0.0, std::sin(phi));
  const cplx a = c * a0 + s * b0;
  const cplx b = s * a0 + c * b0;
  const cplx ab = std::conj(a) * b;
  return Bloch{2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

PrepNoise PrepNoise::from_angles(const CodeLayout& layout, double theta, double phi) {
  return PrepNoise{std::vector<Bloch>(layout.num_qubits(), bloch_from_angles(theta, phi))};
}

PrepSimulator::PrepSimulator(const CodeLayout& layout)
    : layout_(&layout), schedule_(measurement_schedule(layout, ScheduleFlavor::LinksByColumn)) {
  capacity_ = schedule_peak_modes(layout, ScheduleFlavor::LinksByColumn) + 8;
}

Bloch PrepSimulator::read_bloch(std::span<const int> m, const Correction& correction, double m12,
                                double m13, double m23) const {
  int left = 1;
  int top = 1;
  for (int e : layout_->left_edges()) left *= m[e];
  for (int e : layout_->top_edges()) top *= m[e];
  return Bloch{correction.lambda_x * left * m12, correction.lambda_y * left * top * (-m13),
               correction.lambda_z * top * m23};
}

PrepTrial PrepSimulator::run_trial(const Decoder& decoder, const PrepNoise& noise, PhiloxStream& rng,
                                   DecoderKind kind) const {
  const CodeLayout& layout = *layout_;
  if (static_cast<int>(noise.qubits.size()) != layout.num_qubits()) {
    throw std::invalid_argument("need one Bloch vector per qubit");
  }
  PrepTrial trial;
  trial.m.assign(layout.edges().size(), 1);
  GaussianState st;
  st.reserve(capacity_);
  for (const ScheduleStep& step : schedule_) {
    for (int v : step.attach) {
      const Bloch& b = noise.qubits[v];
      st.attach_c4(layout.cluster(v), b.x, b.y, b.z);
    }
    const Edge& e = layout.edges()[step.target];
    const double p_plus = st.outcome_probability(e.tail, e.head, 1);
    int m = rng.uniform() < p_plus ? 1 : -1;
    if (m == 1 && p_plus <= GaussianState::kImpossible) m = -1;
    if (m == -1 && 1.0 - p_plus <= GaussianState::kImpossible) m = 1;
    st.measure_pair(e.tail, e.head, m);
    st.detach_pair(e.tail, e.head);
    trial.m[step.target] = m;
  }
  trial.peak_modes = st.peak_modes();
  trial.entry_updates = st.op_counts().entry_updates;
  trial.s = face_syndromes(layout, trial.m);
  Correction correction = decoder.prep_correction(trial.s, kind);
  const double m12 = st.expectation_pair(1, 2);
  const double m13 = st.expectation_pair(1, 3);
  const double m23 = st.expectation_pair(2, 3);
  trial.raw = read_bloch(trial.m, correction, m12, m13, m23);
  trial.flipped = trial.raw.x < 0.0;
  trial.correction = fix_sign(layout, std::move(correction), trial.raw.x);
  trial.bloch = read_bloch(trial.m, trial.correction, m12, m13, m23);
  return trial;
}

namespace {

PrepEstimate mean_of_distances(std::span<const double> dist) {
  PrepEstimate out;
  out.samples = dist.size();
  const MeanEstimate m = mean_se(dist);
  out.p_l = m.mean;
  out.p_l_se = m.se;
  return out;
}

}  // namespace

PrepEstimate estimate_prep_PL(std::span<const double> bx) {
  if (bx.empty()) throw EmptySample("no preparation trials");
  std::vector<double> dist(bx.size());
  for (std::size_t i = 0; i < bx.size(); ++i) {
    dist[i] = std::numbers::sqrt2 * std::sqrt(std::max(0.0, 1.0 - bx[i]));
  }
  return mean_of_distances(dist);
}

PrepEstimate estimate_prep_PL(std::span<const Bloch> bloch) {
  if (bloch.empty()) throw EmptySample("no preparation trials");
  std::vector<double> dist(bloch.size());
  for (std::size_t i = 0; i < bloch.size(); ++i) {
    const Bloch& b = bloch[i];
    // 1 - bx = (by^2 + bz^2) / (1 + bx) on the unit sphere; no cancellation near bx = 1.
    const double gap = b.x > 0.0 ? (b.y * b.y + b.z * b.z) / (1.0 + b.x) : 1.0 - b.x;
    dist[i] = std::numbers::sqrt2 * std::sqrt(std::max(0.0, gap));
  }
  return mean_of_distances(dist);
}

std::pair<double, double> prep_symmetry_check(double theta, double phi) {
  auto canonical = [](double a) {
    constexpr double half_pi = std::numbers::pi / 2;
    a = std::fmod(a, half_pi);
    if (a < 0.0) a += half_pi;
    // a in [0, pi/2); reflect the upper half through a -> a - pi/2 -> pi/2 - a.
    if (a > half_pi / 2) a = half_pi - a;
    return a;
  };
  return {canonical(theta), canonical(phi)};
}

}  // namespace flosurf
