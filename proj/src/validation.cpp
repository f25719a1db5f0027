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


#include "flosurf/validation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "flosurf/decoder.hpp"
#include "flosurf/errors.hpp"
#include "flosurf/experiment.hpp"
#include "flosurf/gaussian_state.hpp"
#include "flosurf/oracle.hpp"
#include "flosurf/prep.hpp"
#include "flosurf/rng.hpp"
#include "flosurf/storage.hpp"

namespace flosurf {

namespace {

double angle_error_mod_pi(double a, double b) {
  double d = std::fmod(std::abs(a - b), std::numbers::pi);
  return std::min(d, std::numbers::pi - d);
}

// Engine labels are dense modes shifted by one.
double covariance_error(const GaussianState& g, const DenseMajorana& dense) {
  double worst = 0.0;
  for (int p = 0; p < dense.num_modes(); ++p) {
    for (int q = p + 1; q < dense.num_modes(); ++q) {
      worst = std::max(worst, std::abs(g.expectation_pair(p + 1, q + 1) - dense.expectation_pair(p, q)));
    }
  }
  return worst;
}

std::array<double, 3> random_unit_vector(PhiloxStream& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    std::array<double, 3> v{normal(rng), normal(rng), normal(rng)};
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n > 1e-6) return {v[0] / n, v[1] / n, v[2] / n};
  }
}

// |psi> with the given Bloch vector.
QubitAmplitudes amplitudes_of(const Bloch& b) {
  const double t = std::acos(std::clamp(b.z, -1.0, 1.0));
  const double ph = std::atan2(b.y, b.x);
  return {cplx(std::cos(t / 2)), std::polar(std::sin(t / 2), ph)};
}

}  // namespace

bool EngineCheck::pass(double tol) const {
  return sequences > 0 && max_probability_error <= tol && max_covariance_error <= tol && max_wick_error <= tol &&
         max_purity_defect <= tol;
}

EngineCheck run_engine_check(int sequences, std::uint64_t seed) {
  EngineCheck out;
  out.sequences = sequences;
  for (int s = 0; s < sequences; ++s) {
    PhiloxStream rng(seed, static_cast<std::uint64_t>(s));
    const int fermions = 1 + static_cast<int>(rng.uniform() * 4);
    const int modes = 2 * fermions;
    GaussianState g;
    if (fermions % 2 == 0 && rng.uniform() < 0.5) {
      // One or two C4-encoded qubits.
      for (int block = 0; block < modes / 4; ++block) {
        const auto b = random_unit_vector(rng);
        g.attach_c4({4 * block + 1, 4 * block + 2, 4 * block + 3, 4 * block + 4}, b[0], b[1], b[2]);
      }
    } else {
      std::vector<int> perm(modes);
      for (int i = 0; i < modes; ++i) perm[i] = i + 1;
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<ModePair> pairs;
      for (int i = 0; i < modes; i += 2) pairs.push_back({perm[i], perm[i + 1], rng.uniform() < 0.5 ? 1 : -1});
      g = GaussianState::from_pairing(pairs);
    }
    DenseMatrix cov;
    cov.rows = modes;
    cov.data.assign(static_cast<std::size_t>(modes) * modes, 0.0);
    for (int p = 0; p < modes; ++p) {
      for (int q = 0; q < modes; ++q) {
        if (p != q) cov(p, q) = g.expectation_pair(p + 1, q + 1);
      }
    }
    DenseMajorana dense = DenseMajorana::from_covariance(cov, seed ^ (0x9e3779b97f4a7c15ull * (s + 1)));
    out.max_covariance_error = std::max(out.max_covariance_error, covariance_error(g, dense));

    const int ops = 1 + static_cast<int>(rng.uniform() * 12);
    for (int k = 0; k < ops; ++k) {
      const int p = static_cast<int>(rng.uniform() * modes);
      int q = static_cast<int>(rng.uniform() * (modes - 1));
      if (q >= p) ++q;
      if (rng.uniform() < 0.5) {
        const double gamma = (2.0 * rng.uniform() - 1.0) * std::numbers::pi;
        g.rotate(p + 1, q + 1, gamma);
        dense.rotate(p, q, gamma);
      } else {
        const double plus = 0.5 * (1.0 + dense.expectation_pair(p, q));
        int outcome = rng.uniform() < 0.5 ? 1 : -1;
        if ((outcome == 1 ? plus : 1.0 - plus) < 1e-6) outcome = -outcome;
        const double lg = g.measure_pair(p + 1, q + 1, outcome);
        const double ld = dense.measure_pair(p, q, outcome);
        out.max_probability_error = std::max(out.max_probability_error, std::abs(lg - ld));
        ++out.measurements;
      }
      ++out.operations;
      out.max_covariance_error = std::max(out.max_covariance_error, covariance_error(g, dense));
      out.max_purity_defect = std::max(out.max_purity_defect, g.purity_defect());
    }
    if (modes >= 4) {
      std::vector<int> pick(modes);
      for (int i = 0; i < modes; ++i) pick[i] = i;
      std::shuffle(pick.begin(), pick.end(), rng);
      const int k = modes >= 6 && rng.uniform() < 0.5 ? 6 : 4;
      std::vector<int> labels(k), dense_modes(pick.begin(), pick.begin() + k);
      for (int i = 0; i < k; ++i) labels[i] = dense_modes[i] + 1;
      out.max_wick_error =
          std::max(out.max_wick_error, std::abs(g.wick_expectation(labels) - dense.wick(dense_modes)));
    }
  }
  return out;
}

bool StorageCheck::pass(double tv_tol, double angle_tol) const {
  return angle_vectors > 0 && max_tv < tv_tol && max_angle_error <= angle_tol && max_trig_defect <= 1e-6 &&
         input_probability_defect <= 1e-10 && input_angle_defect <= angle_tol && max_codespace_defect <= 1e-9 &&
         max_z_face_probability <= 1e-10 && max_oracle_consistency <= 1e-10;
}

StorageCheck run_storage_check(const CodeLayout& layout, int angle_vectors, std::size_t samples,
                               std::uint64_t seed, int threads) {
  StorageCheck out;
  out.angle_vectors = angle_vectors;
  out.samples_per_vector = samples;
  const Decoder decoder(layout);
  const StorageSimulator sim(layout);
  const QubitAmplitudes plus{cplx(1.0 / std::numbers::sqrt2), cplx(1.0 / std::numbers::sqrt2)};
  const std::vector<int>& xfaces = layout.faces_of_type(PauliType::X);
  for (int v = 0; v < angle_vectors; ++v) {
    PhiloxStream rng(seed, 1000000ull + v);
    StorageNoise noise;
    for (int u = 0; u < layout.num_qubits(); ++u) noise.eta.push_back((rng.uniform() - 0.5) * std::numbers::pi);
    const StorageReference ref = dense_storage_reference(layout, decoder, noise.eta, plus, 4, seed + v);
    out.input_probability_defect = std::max(out.input_probability_defect, ref.input_probability_defect);
    out.input_angle_defect = std::max(out.input_angle_defect, ref.input_angle_defect);
    out.max_codespace_defect = std::max(out.max_codespace_defect, ref.codespace_defect);
    out.max_z_face_probability = std::max(out.max_z_face_probability, ref.z_face_probability);

    // Same corrupted state through the generic syndrome table: X-face
    // marginals must agree with the reference rows.
    {
      DenseState psi(layout.num_qubits());
      for (const Face& f : layout.faces()) psi.project(f.type, vertex_mask(f.vertices), 1);
      const std::uint64_t xl = vertex_mask(layout.logical_x_support());
      DenseState enc = psi;
      for (std::size_t b = 0; b < enc.dim(); ++b) {
        enc.amplitudes()[b] = (psi.amplitudes()[b] + psi.amplitudes()[b ^ xl]);
      }
      enc.scale(1.0 / std::sqrt(enc.norm2()));
      for (int u = 0; u < layout.num_qubits(); ++u) enc.apply_z_rotation(u, noise.eta[u]);
      const auto table = dense_syndrome_distribution(layout, enc);
      std::map<std::uint64_t, double> marginal;
      for (const auto& [key, p] : table) {
        std::uint64_t xkey = 0;
        for (std::size_t i = 0; i < xfaces.size(); ++i) {
          if ((key >> xfaces[i]) & 1) xkey |= std::uint64_t{1} << i;
        }
        marginal[xkey] += p;
      }
      for (const auto& row : ref.rows) {
        out.max_oracle_consistency = std::max(out.max_oracle_consistency, std::abs(marginal[row.key] - row.probability));
      }
    }

    for (const auto& row : ref.rows) {
      if (row.probability < 1e-10) continue;
      const LogicalAngle la = sim.logical_angle(noise, row.correction.z_support);
      out.max_angle_error = std::max(out.max_angle_error, angle_error_mod_pi(la.theta, row.theta));
      const double trig = std::abs(la.cos2 * la.cos2 + la.sin2 * la.sin2 - 1.0);
      out.max_trig_defect = std::max(out.max_trig_defect, trig);
    }

    const auto keys = run_parallel<std::uint64_t>(samples, threads, [&](std::size_t i) {
      PhiloxStream r(seed + 7919ull * (v + 1), i);
      const OutcomeSample o = sim.sample_outcomes(noise, r);
      const std::vector<int> sx = x_face_syndromes_from_vertex_outcomes(layout, o.m);
      std::uint64_t key = 0;
      for (std::size_t f = 0; f < sx.size(); ++f) {
        if (sx[f] < 0) key |= std::uint64_t{1} << f;
      }
      return key;
    });
    std::map<std::uint64_t, double> freq;
    for (auto k : keys) freq[k] += 1.0 / static_cast<double>(samples);
    double tv = 0.0;
    for (const auto& row : ref.rows) {
      const auto it = freq.find(row.key);
      tv += std::abs((it == freq.end() ? 0.0 : it->second) - row.probability);
      if (it != freq.end()) freq.erase(it);
    }
    for (const auto& [k, f] : freq) tv += f;
    out.max_tv = std::max(out.max_tv, 0.5 * tv);
  }
  return out;
}

bool PrepCheck::pass(double tv_tol, double bloch_tol, double norm_tol) const {
  return inputs > 0 && max_tv < tv_tol && max_bloch_error <= bloch_tol && max_norm_defect <= norm_tol &&
         unmatched_syndromes == 0;
}

PrepCheck run_prep_check(const CodeLayout& layout, int inputs, std::size_t samples, std::uint64_t seed,
                         int threads) {
  PrepCheck out;
  out.inputs = inputs;
  out.samples_per_input = samples;
  const Decoder decoder(layout);
  const PrepSimulator sim(layout);
  for (int in = 0; in < inputs; ++in) {
    PhiloxStream rng(seed, 2000000ull + in);
    PrepNoise noise;
    std::vector<QubitAmplitudes> amps;
    for (int u = 0; u < layout.num_qubits(); ++u) {
      const auto b = random_unit_vector(rng);
      noise.qubits.push_back(Bloch{b[0], b[1], b[2]});
      amps.push_back(amplitudes_of(noise.qubits.back()));
    }
    const auto rows = dense_prep_reference(layout, decoder, amps);
    std::map<std::uint64_t, const PrepReferenceRow*> by_key;
    for (const auto& r : rows) by_key[r.key] = &r;

    struct Sample {
      std::uint64_t key = 0;
      Bloch bloch;
    };
    const auto trials = run_parallel<Sample>(samples, threads, [&](std::size_t i) {
      PhiloxStream r(seed + 104729ull * (in + 1), i);
      const PrepTrial t = sim.run_trial(decoder, noise, r);
      Sample smp;
      for (std::size_t f = 0; f < t.s.size(); ++f) {
        if (t.s[f] < 0) smp.key |= std::uint64_t{1} << f;
      }
      smp.bloch = t.bloch;
      return smp;
    });
    std::map<std::uint64_t, double> freq;
    for (const Sample& smp : trials) {
      freq[smp.key] += 1.0 / static_cast<double>(samples);
      out.max_norm_defect = std::max(out.max_norm_defect, std::abs(smp.bloch.norm() - 1.0));
      const auto it = by_key.find(smp.key);
      if (it == by_key.end()) {
        ++out.unmatched_syndromes;
        continue;
      }
      const Bloch& b = it->second->bloch;
      out.max_bloch_error = std::max(
          {out.max_bloch_error, std::abs(b.x - smp.bloch.x), std::abs(b.y - smp.bloch.y), std::abs(b.z - smp.bloch.z)});
    }
    double tv = 0.0;
    for (const auto& r : rows) {
      const auto it = freq.find(r.key);
      tv += std::abs((it == freq.end() ? 0.0 : it->second) - r.probability);
      if (it != freq.end()) freq.erase(it);
    }
    for (const auto& [k, f] : freq) tv += f;
    out.max_tv = std::max(out.max_tv, 0.5 * tv);
  }
  return out;
}

nlohmann::json to_json(const EngineCheck& c) {
  return {{"suite", "engine"},
          {"pass", c.pass()},
          {"sequences", c.sequences},
          {"operations", c.operations},
          {"measurements", c.measurements},
          {"max_probability_error", c.max_probability_error},
          {"max_covariance_error", c.max_covariance_error},
          {"max_wick_error", c.max_wick_error},
          {"max_purity_defect", c.max_purity_defect}};
}

nlohmann::json to_json(const StorageCheck& c) {
  return {{"suite", "storage"},
          {"pass", c.pass()},
          {"angle_vectors", c.angle_vectors},
          {"samples_per_vector", c.samples_per_vector},
          {"max_tv", c.max_tv},
          {"max_angle_error", c.max_angle_error},
          {"max_trig_defect", c.max_trig_defect},
          {"input_probability_defect", c.input_probability_defect},
          {"input_angle_defect", c.input_angle_defect},
          {"max_codespace_defect", c.max_codespace_defect},
          {"max_z_face_probability", c.max_z_face_probability},
          {"max_oracle_consistency", c.max_oracle_consistency}};
}

nlohmann::json to_json(const PrepCheck& c) {
  return {{"suite", "prep"},
          {"pass", c.pass()},
          {"inputs", c.inputs},
          {"samples_per_input", c.samples_per_input},
          {"max_tv", c.max_tv},
          {"max_bloch_error", c.max_bloch_error},
          {"max_norm_defect", c.max_norm_defect},
          {"unmatched_syndromes", c.unmatched_syndromes}};
}

}  // namespace flosurf
