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


#include "flosurf/storage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "flosurf/errors.hpp"

namespace flosurf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Probability weight of outcome m for the pair (g0 g1) and then (g2 g3),
// without collapsing the state.
double joint_probability(const GaussianState& st, const std::array<int, 4>& g, int m) {
  const double m01 = st.expectation_pair(g[0], g[1]);
  const double l1 = 0.5 * (1.0 + m * m01);
  if (l1 <= GaussianState::kImpossible) return 0.0;
  const int p = m == 1 ? g[0] : g[1];
  const int q = m == 1 ? g[1] : g[0];
  const double m23 = st.expectation_pair(g[2], g[3]);
  const double m2p = st.expectation_pair(g[2], p);
  const double m2q = st.expectation_pair(g[2], q);
  const double m3p = st.expectation_pair(g[3], p);
  const double m3q = st.expectation_pair(g[3], q);
  const double updated = m23 + (m2q * m3p - m2p * m3q) / (2.0 * l1);
  const double l2 = std::max(0.0, 0.5 * (1.0 + m * updated));
  return l1 * l2;
}

}  // namespace

StorageNoise StorageNoise::uniform(const CodeLayout& layout, double theta) {
  return StorageNoise{std::vector<double>(layout.num_qubits(), theta)};
}

StorageSimulator::StorageSimulator(const CodeLayout& layout) : layout_(&layout) {
  const int modes = layout.num_modes();
  pair_x_.assign(modes + 1, ModePair{});
  for (const Edge& e : layout.edges()) {
    pair_x_[e.mode_u] = pair_x_[e.mode_v] = ModePair{e.tail, e.head, 1};
  }
  pair_y_ = pair_x_;
  pair_x_[1] = pair_x_[2] = ModePair{1, 2, 1};
  pair_x_[3] = pair_x_[4] = ModePair{3, 4, 1};
  pair_y_[1] = pair_y_[3] = ModePair{1, 3, -1};
  pair_y_[2] = pair_y_[4] = ModePair{2, 4, 1};
  capacity_ = schedule_peak_modes(layout, ScheduleFlavor::VerticesByColumn) + 8;
}

template <class Choose>
double StorageSimulator::run_circuit(std::span<const double> angles, InitialBasis basis,
                                     Choose&& choose, CircuitStats* stats) const {
  const CodeLayout& layout = *layout_;
  const int n = layout.num_qubits();
  if (static_cast<int>(angles.size()) != n) throw std::invalid_argument("need one angle per qubit");
  const std::vector<ModePair>& pairs = basis == InitialBasis::X ? pair_x_ : pair_y_;
  GaussianState st;
  st.reserve(capacity_);
  double log_weight = 0.0;
  // Qubits are visited in vertex-id order, which is column by column.
  for (int u = 0; u < n; ++u) {
    const std::array<int, 4>& g = layout.cluster(u);
    for (int mode : g) {
      if (!st.contains(mode)) {
        const ModePair& pr = pairs[mode];
        st.attach_pair(pr.p, pr.q, pr.sign);
      }
    }
    // exp(i eta Zbar) with Zbar = i c2 c3 is exp(-eta c2 c3).
    st.rotate(g[1], g[2], -angles[u]);
    const int m = choose(u, st, g);
    const double l1 = st.measure_pair(g[0], g[1], m);
    const double l2 = st.measure_pair(g[2], g[3], m);
    log_weight += std::log(l1) + std::log(l2);
    st.detach_pair(g[0], g[1]);
    st.detach_pair(g[2], g[3]);
  }
  if (stats) {
    stats->peak_modes = st.peak_modes();
    stats->entry_updates = st.op_counts().entry_updates;
  }
  return log_weight;
}

OutcomeSample StorageSimulator::sample_outcomes(const StorageNoise& noise, PhiloxStream& rng,
                                                InitialBasis basis) const {
  const int n = layout_->num_qubits();
  OutcomeSample out;
  out.m.assign(n, 1);
  auto choose = [&](int u, const GaussianState& st, const std::array<int, 4>& g) {
    const double kappa = u + 1 < n ? 2.0 : 1.0;
    const double wp = kappa * joint_probability(st, g, 1);
    const double wm = kappa * joint_probability(st, g, -1);
    out.normalization_defect = std::max(out.normalization_defect, std::abs(wp + wm - 1.0));
    const double p_plus = wp / (wp + wm);
    const double r = rng.uniform();
    int m = r < p_plus ? 1 : -1;
    if (m == 1 && wp <= 0.0) m = -1;
    if (m == -1 && wm <= 0.0) m = 1;
    out.m[u] = m;
    return m;
  };
  CircuitStats stats;
  out.log_weight = run_circuit(noise.eta, basis, choose, &stats);
  out.peak_modes = stats.peak_modes;
  out.entry_updates = stats.entry_updates;
  return out;
}

double StorageSimulator::log_weight(std::span<const double> angles, InitialBasis basis,
                                    CircuitStats* stats) const {
  try {
    return run_circuit(angles, basis, [](int, const GaussianState&, const std::array<int, 4>&) { return 1; },
                       stats);
  } catch (const ImpossibleOutcome&) {
    return kNegInf;
  }
}

double StorageSimulator::log_weight_of_all_plus(std::span<const double> angles,
                                                InitialBasis basis) const {
  return log_weight(angles, basis, nullptr);
}

double weight_of_all_plus(const StorageSimulator& sim, std::span<const double> angles,
                          InitialBasis basis) {
  return std::exp(sim.log_weight_of_all_plus(angles, basis));
}

LogicalAngle StorageSimulator::logical_angle(const StorageNoise& noise,
                                             std::span<const std::uint8_t> h) const {
  const int n = layout_->num_qubits();
  if (static_cast<int>(noise.eta.size()) != n || static_cast<int>(h.size()) != n) {
    throw std::invalid_argument("angles and correction must cover every qubit");
  }
  std::vector<std::uint8_t> l(n, 0);
  for (int u : layout_->logical_z_support()) l[u] = 1;
  std::vector<double> plus(n);
  std::vector<double> minus(n);
  constexpr double half_pi = std::numbers::pi / 2;
  for (int u = 0; u < n; ++u) {
    plus[u] = noise.eta[u] + half_pi * (h[u] & 1);
    minus[u] = noise.eta[u] + half_pi * ((h[u] ^ l[u]) & 1);
  }
  LogicalAngle out;
  CircuitStats stats[4];
  out.log_p_plus = log_weight(plus, InitialBasis::X, &stats[0]);
  out.log_p_minus = log_weight(minus, InitialBasis::X, &stats[1]);
  out.log_q_plus = log_weight(plus, InitialBasis::Y, &stats[2]);
  out.log_q_minus = log_weight(minus, InitialBasis::Y, &stats[3]);
  for (const CircuitStats& s : stats) out.entry_updates += s.entry_updates;
  auto ratio = [](double a, double b) {
    if (a == kNegInf && b == kNegInf) throw DegenerateWeights("both branch weights vanish");
    if (a == kNegInf) return -1.0;
    if (b == kNegInf) return 1.0;
    return std::tanh(0.5 * (a - b));
  };
  out.cos2 = ratio(out.log_p_plus, out.log_p_minus);
  out.sin2 = ratio(out.log_q_plus, out.log_q_minus);
  double theta = 0.5 * std::atan2(out.sin2, out.cos2);
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  out.theta = theta;
  return out;
}

StorageTrial StorageSimulator::run_trial(const Decoder& decoder, const StorageNoise& noise,
                                         PhiloxStream& rng, DecoderKind kind) const {
  StorageTrial trial;
  OutcomeSample sample = sample_outcomes(noise, rng, InitialBasis::X);
  trial.m = std::move(sample.m);
  trial.normalization_defect = sample.normalization_defect;
  trial.peak_modes = sample.peak_modes;
  trial.entry_updates = sample.entry_updates;
  trial.s = x_face_syndromes_from_vertex_outcomes(*layout_, trial.m);
  trial.correction = decoder.decode_x_syndrome(trial.s, kind);
  const LogicalAngle angle = logical_angle(noise, trial.correction.z_support);
  trial.theta_s = angle.theta;
  trial.log_p_plus = angle.log_p_plus;
  trial.log_p_minus = angle.log_p_minus;
  trial.log_q_plus = angle.log_q_plus;
  trial.log_q_minus = angle.log_q_minus;
  trial.entry_updates += angle.entry_updates;
  trial.trig_defect = std::abs(angle.cos2 * angle.cos2 + angle.sin2 * angle.sin2 - 1.0);
  return trial;
}

StorageMetrics estimate_storage_metrics(std::span<const double> theta_s, int histogram_bins) {
  const std::size_t n = theta_s.size();
  if (n == 0) throw EmptySample("no storage trials");
  StorageMetrics out;
  out.samples = n;
  const double inv_n = 1.0 / static_cast<double>(n);
  // Per-trial terms: a = 2|sin|, b = 2 sin^2, e = sin^2, g = sin(2 theta) / 2.
  double sa = 0, sb = 0, se = 0, sg = 0;
  for (double t : theta_s) {
    const double s = std::sin(t);
    sa += 2.0 * std::abs(s);
    sb += 2.0 * s * s;
    se += s * s;
    sg += 0.5 * std::sin(2.0 * t);
  }
  const double ma = sa * inv_n, mb = sb * inv_n, me = se * inv_n, mg = sg * inv_n;
  double vaa = 0, vbb = 0, vab = 0, vee = 0, vgg = 0, veg = 0;
  for (double t : theta_s) {
    const double s = std::sin(t);
    const double a = 2.0 * std::abs(s) - ma;
    const double b = 2.0 * s * s - mb;
    const double e = s * s - me;
    const double g = 0.5 * std::sin(2.0 * t) - mg;
    vaa += a * a;
    vbb += b * b;
    vab += a * b;
    vee += e * e;
    vgg += g * g;
    veg += e * g;
  }
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  vaa /= denom;
  vbb /= denom;
  vab /= denom;
  vee /= denom;
  vgg /= denom;
  veg /= denom;

  out.p_l = ma;
  out.p_l_se = std::sqrt(vaa * inv_n);
  out.p_l_twirl = mb;
  out.p_l_twirl_se = std::sqrt(vbb * inv_n);
  out.epsilon = me;
  out.delta = mg;
  if (mb > 0.0) {
    const double r = ma / mb;
    out.conditional_ratio = r;
    const double var = (vaa - 2.0 * r * vab + r * r * vbb) / (mb * mb);
    out.conditional_ratio_se = std::sqrt(std::max(0.0, var) * inv_n);
  } else {
    out.conditional_ratio = 1.0;
    out.ratio_limit = true;
  }
  if (me > 0.0) {
    const double norm = std::hypot(me, mg);
    out.average_channel_ratio = norm / me;
    const double de = 1.0 / norm - norm / (me * me);
    const double dg = mg / (norm * me);
    const double var = de * de * vee + 2.0 * de * dg * veg + dg * dg * vgg;
    out.average_channel_ratio_se = std::sqrt(std::max(0.0, var) * inv_n);
  } else {
    out.average_channel_ratio = 1.0;
    out.ratio_limit = true;
  }
  if (histogram_bins > 0) {
    out.histogram.assign(histogram_bins, 0);
    for (double t : theta_s) {
      int bin = static_cast<int>(t / std::numbers::pi * histogram_bins);
      bin = std::clamp(bin, 0, histogram_bins - 1);
      ++out.histogram[bin];
    }
  }
  return out;
}

bool twirl_trial(const Decoder& decoder, double epsilon, PhiloxStream& rng, DecoderKind kind) {
  const CodeLayout& layout = decoder.layout();
  const int n = layout.num_qubits();
  std::vector<int> error(n, 0);
  std::vector<int> flips(n, 1);
  for (int u = 0; u < n; ++u) {
    if (rng.uniform() < epsilon) {
      error[u] = 1;
      flips[u] = -1;
    }
  }
  const std::vector<int> s = x_face_syndromes_from_vertex_outcomes(layout, flips);
  const Correction c = decoder.decode_x_syndrome(s, kind);
  int parity = 0;
  for (int u : layout.logical_x_support()) parity ^= error[u] ^ c.z_support[u];
  return parity == 1;
}

}  // namespace flosurf
