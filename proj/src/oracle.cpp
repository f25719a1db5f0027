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


#include "flosurf/oracle.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "flosurf/errors.hpp"

namespace flosurf {

namespace {

constexpr cplx kI(0.0, 1.0);
constexpr double kNegligible = 1e-14;

double fold_pi(double a) {
  a = std::fmod(a, std::numbers::pi);
  if (a < 0.0) a += std::numbers::pi;
  return a;
}

double circular_distance_pi(double a, double b) {
  const double d = fold_pi(a - b);
  return std::min(d, std::numbers::pi - d);
}

std::uint64_t face_mask(const Face& f) { return vertex_mask(f.vertices); }

}  // namespace

// ---------------------------------------------------------------------------
// DenseMajorana

DenseMajorana::DenseMajorana(int num_modes) : modes_(num_modes) {
  if (num_modes <= 0 || num_modes % 2 != 0 || num_modes > 24) {
    throw std::invalid_argument("dense Majorana oracle needs an even mode count up to 24");
  }
  psi_.assign(std::size_t{1} << (num_modes / 2), cplx(0.0));
  psi_[0] = 1.0;
}

DenseMajorana DenseMajorana::from_pairing(int num_modes, std::span<const ModePair> pairs,
                                          std::uint64_t seed) {
  DenseMajorana out(num_modes);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < 16; ++attempt) {
    for (cplx& a : out.psi_) a = cplx(normal(gen), normal(gen));
    for (const ModePair& pr : pairs) {
      std::vector<cplx> w = out.apply(pr.q, out.psi_);
      w = out.apply(pr.p, w);
      for (std::size_t b = 0; b < w.size(); ++b) {
        out.psi_[b] = 0.5 * (out.psi_[b] + static_cast<double>(pr.sign) * kI * w[b]);
      }
    }
    const double nrm = out.norm();
    if (nrm > 1e-6) {
      for (cplx& a : out.psi_) a /= nrm;
      return out;
    }
  }
  throw UnmatchedMode("pairing does not fix a state");
}

DenseMajorana DenseMajorana::from_covariance(const DenseMatrix& m, std::uint64_t seed) {
  DenseMajorana out(m.rows);
  const std::size_t dim = out.psi_.size();
  // Columns of the operator sum_{p<q} m_pq i c_p c_q, shifted by the
  // fermion count so the target eigenvalue is the largest in modulus.
  const double shift = m.rows / 2;
  std::vector<std::vector<cplx>> op(dim, std::vector<cplx>(dim, 0.0));
  for (std::size_t b = 0; b < dim; ++b) {
    std::vector<cplx> e(dim, 0.0);
    e[b] = 1.0;
    std::vector<cplx>& col = op[b];
    col[b] += shift;
    for (int p = 0; p < m.rows; ++p) {
      for (int q = p + 1; q < m.rows; ++q) {
        if (m(p, q) == 0.0) continue;
        const std::vector<cplx> w = out.apply(p, out.apply(q, e));
        for (std::size_t r = 0; r < dim; ++r) col[r] += m(p, q) * kI * w[r];
      }
    }
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<cplx> v(dim), next(dim);
  for (cplx& a : v) a = cplx(normal(gen), normal(gen));
  for (int iter = 0; iter < 2000; ++iter) {
    std::fill(next.begin(), next.end(), cplx(0.0));
    for (std::size_t b = 0; b < dim; ++b) {
      for (std::size_t r = 0; r < dim; ++r) next[r] += op[b][r] * v[b];
    }
    double nrm = 0.0;
    for (const cplx& a : next) nrm += std::norm(a);
    nrm = std::sqrt(nrm);
    double change = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
      next[r] /= nrm;
      change = std::max(change, std::abs(next[r] - v[r]));
    }
    v.swap(next);
    if (change < 1e-14) break;
  }
  out.psi_ = std::move(v);
  return out;
}

std::vector<cplx> DenseMajorana::apply(int p, std::span<const cplx> v) const {
  if (p < 0 || p >= modes_) throw UnknownMode("dense mode " + std::to_string(p));
  const std::size_t bit = std::size_t{1} << (p / 2);
  const std::size_t low = bit - 1;
  const bool is_y = p % 2 == 0;
  std::vector<cplx> out(v.size());
  for (std::size_t b = 0; b < v.size(); ++b) {
    const double phase = (std::popcount(b & low) & 1) ? -1.0 : 1.0;
    cplx coef = phase;
    if (is_y) coef *= (b & bit) ? -kI : kI;
    out[b ^ bit] += coef * v[b];
  }
  return out;
}

void DenseMajorana::rotate(int p, int q, double gamma) {
  std::vector<cplx> w = apply(q, psi_);
  w = apply(p, w);
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  for (std::size_t b = 0; b < psi_.size(); ++b) psi_[b] = c * psi_[b] + s * w[b];
}

double DenseMajorana::measure_pair(int p, int q, int outcome) {
  std::vector<cplx> w = apply(q, psi_);
  w = apply(p, w);
  std::vector<cplx> next(psi_.size());
  double prob = 0.0;
  for (std::size_t b = 0; b < psi_.size(); ++b) {
    next[b] = 0.5 * (psi_[b] + static_cast<double>(outcome) * kI * w[b]);
    prob += std::norm(next[b]);
  }
  if (prob <= GaussianState::kImpossible) throw ImpossibleOutcome("dense projector has zero weight");
  const double inv = 1.0 / std::sqrt(prob);
  for (std::size_t b = 0; b < psi_.size(); ++b) psi_[b] = next[b] * inv;
  return prob;
}

double DenseMajorana::expectation_pair(int p, int q) const {
  std::vector<cplx> w = apply(q, psi_);
  w = apply(p, w);
  cplx acc = 0.0;
  for (std::size_t b = 0; b < psi_.size(); ++b) acc += std::conj(psi_[b]) * kI * w[b];
  return acc.real();
}

double DenseMajorana::wick(std::span<const int> modes) const {
  std::vector<cplx> w = psi_;
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) w = apply(*it, w);
  cplx acc = 0.0;
  for (std::size_t b = 0; b < psi_.size(); ++b) acc += std::conj(psi_[b]) * w[b];
  cplx phase = 1.0;
  for (std::size_t k = 0; k < modes.size() / 2; ++k) phase *= kI;
  return (phase * acc).real();
}

double DenseMajorana::anticommutator_defect() const {
  double worst = 0.0;
  const std::size_t dim = psi_.size();
  for (int p = 0; p < modes_; ++p) {
    for (int q = 0; q < modes_; ++q) {
      for (std::size_t b = 0; b < dim; ++b) {
        std::vector<cplx> e(dim, 0.0);
        e[b] = 1.0;
        const std::vector<cplx> pq = apply(p, apply(q, e));
        const std::vector<cplx> qp = apply(q, apply(p, e));
        for (std::size_t r = 0; r < dim; ++r) {
          const cplx expect = (p == q && r == b) ? 2.0 : 0.0;
          worst = std::max(worst, std::abs(pq[r] + qp[r] - expect));
        }
      }
    }
  }
  return worst;
}

double DenseMajorana::norm() const {
  double s = 0.0;
  for (const cplx& a : psi_) s += std::norm(a);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// DenseState

DenseState::DenseState(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 26) throw std::invalid_argument("dense state supports 1..26 qubits");
  amp_.assign(std::size_t{1} << num_qubits, cplx(0.0));
  amp_[0] = 1.0;
}

DenseState DenseState::product(std::span<const QubitAmplitudes> qubits) {
  DenseState out(static_cast<int>(qubits.size()));
  for (std::size_t b = 0; b < out.amp_.size(); ++b) {
    cplx a = 1.0;
    for (int u = 0; u < out.n_; ++u) a *= qubits[u][(b >> u) & 1];
    out.amp_[b] = a;
  }
  return out;
}

void DenseState::apply_pauli(std::uint64_t xmask, std::uint64_t zmask) {
  std::vector<cplx> out(amp_.size());
  for (std::size_t b = 0; b < amp_.size(); ++b) {
    const double sign = (std::popcount(b & zmask) & 1) ? -1.0 : 1.0;
    out[b ^ xmask] = sign * amp_[b];
  }
  amp_.swap(out);
}

void DenseState::apply_z_rotation(int u, double eta) {
  const cplx up = std::polar(1.0, eta);
  const cplx down = std::polar(1.0, -eta);
  for (std::size_t b = 0; b < amp_.size(); ++b) amp_[b] *= ((b >> u) & 1) ? down : up;
}

void DenseState::project(PauliType type, std::uint64_t mask, int sign) {
  if (type == PauliType::Z) {
    for (std::size_t b = 0; b < amp_.size(); ++b) {
      const int eig = (std::popcount(b & mask) & 1) ? -1 : 1;
      if (eig != sign) amp_[b] = 0.0;
    }
    return;
  }
  std::vector<cplx> out(amp_.size());
  for (std::size_t b = 0; b < amp_.size(); ++b) {
    out[b] = 0.5 * (amp_[b] + static_cast<double>(sign) * amp_[b ^ mask]);
  }
  amp_.swap(out);
}

cplx DenseState::expectation(std::uint64_t xmask, std::uint64_t zmask) const {
  DenseState w = *this;
  w.apply_pauli(xmask, zmask);
  return inner(w);
}

cplx DenseState::inner(const DenseState& other) const {
  cplx acc = 0.0;
  for (std::size_t b = 0; b < amp_.size(); ++b) acc += std::conj(amp_[b]) * other.amp_[b];
  return acc;
}

double DenseState::norm2() const {
  double s = 0.0;
  for (const cplx& a : amp_) s += std::norm(a);
  return s;
}

void DenseState::scale(double factor) {
  for (cplx& a : amp_) a *= factor;
}

// ---------------------------------------------------------------------------
// Helpers

QubitAmplitudes qubit_from_angles(double theta, double phi) {
  const double r = 1.0 / std::numbers::sqrt2;
  const cplx a0 = std::polar(r, theta);
  const cplx b0 = std::polar(r, -theta);
  const cplx c(std::cos(phi), 0.0);
  const cplx s(0.0, std::sin(phi));
  return {c * a0 + s * b0, s * a0 + c * b0};
}

Bloch bloch_of(const QubitAmplitudes& q) {
  const double nrm = std::norm(q[0]) + std::norm(q[1]);
  const cplx ab = std::conj(q[0]) * q[1];
  return Bloch{2.0 * ab.real() / nrm, 2.0 * ab.imag() / nrm, (std::norm(q[0]) - std::norm(q[1])) / nrm};
}

std::uint64_t vertex_mask(std::span<const int> vertices) {
  std::uint64_t m = 0;
  for (int u : vertices) m |= std::uint64_t{1} << u;
  return m;
}

std::uint64_t support_mask(std::span<const std::uint8_t> support) {
  std::uint64_t m = 0;
  for (std::size_t u = 0; u < support.size(); ++u) {
    if (support[u]) m |= std::uint64_t{1} << u;
  }
  return m;
}

std::map<std::uint64_t, double> dense_syndrome_distribution(const CodeLayout& layout,
                                                            const DenseState& psi) {
  const auto& faces = layout.faces();
  const int nf = static_cast<int>(faces.size());
  if (nf > 24) throw std::invalid_argument("dense syndrome table limited to 24 faces");
  std::map<std::uint64_t, double> out;
  for (std::uint64_t key = 0; key < (std::uint64_t{1} << nf); ++key) {
    DenseState w = psi;
    for (int f = 0; f < nf; ++f) w.project(faces[f].type, face_mask(faces[f]), ((key >> f) & 1) ? -1 : 1);
    out[key] = w.norm2();
  }
  return out;
}

namespace {

struct LogicalBasis {
  DenseState zero;
  DenseState one;
};

LogicalBasis logical_basis(const CodeLayout& layout) {
  DenseState zero(layout.num_qubits());
  for (const Face& f : layout.faces()) zero.project(f.type, face_mask(f), 1);
  zero.scale(1.0 / std::sqrt(zero.norm2()));
  DenseState one = zero;
  one.apply_pauli(vertex_mask(layout.logical_x_support()), 0);
  return {zero, one};
}

DenseState encode(const LogicalBasis& basis, const QubitAmplitudes& psi_l) {
  DenseState out = basis.zero;
  for (std::size_t b = 0; b < out.dim(); ++b) {
    out.amplitudes()[b] = psi_l[0] * basis.zero.amplitudes()[b] + psi_l[1] * basis.one.amplitudes()[b];
  }
  return out;
}

struct StorageSyndromeResult {
  double probability = 0.0;
  double theta = 0.0;
  double codespace_defect = 0.0;
  Correction correction;
};

StorageSyndromeResult storage_syndrome(const CodeLayout& layout, const Decoder& decoder,
                                       const LogicalBasis& basis, const DenseState& corrupted,
                                       const QubitAmplitudes& psi_l, std::uint64_t key) {
  const std::vector<int>& xf = layout.faces_of_type(PauliType::X);
  DenseState w = corrupted;
  std::vector<int> s(xf.size(), 1);
  for (std::size_t i = 0; i < xf.size(); ++i) {
    s[i] = ((key >> i) & 1) ? -1 : 1;
    w.project(PauliType::X, face_mask(layout.faces()[xf[i]]), s[i]);
  }
  for (int f : layout.faces_of_type(PauliType::Z)) w.project(PauliType::Z, face_mask(layout.faces()[f]), 1);
  StorageSyndromeResult out;
  out.probability = w.norm2();
  out.correction = decoder.decode_x_syndrome(s, DecoderKind::Mwpm);
  if (out.probability < kNegligible) return out;
  w.apply_pauli(0, support_mask(out.correction.z_support));
  w.scale(1.0 / std::sqrt(out.probability));
  const cplx a = basis.zero.inner(w);
  const cplx b = basis.one.inner(w);
  out.codespace_defect = std::abs(std::norm(a) + std::norm(b) - 1.0);
  // phi_s = exp(i theta Z_L) psi_L gives (a / a0) / (b / b0) = exp(2 i theta).
  out.theta = fold_pi(0.5 * std::arg((a / psi_l[0]) / (b / psi_l[1])));
  return out;
}

DenseState corrupt(const DenseState& encoded, std::span<const double> eta) {
  DenseState w = encoded;
  for (int u = 0; u < w.num_qubits(); ++u) w.apply_z_rotation(u, eta[u]);
  return w;
}

}  // namespace

StorageReference dense_storage_reference(const CodeLayout& layout, const Decoder& decoder,
                                         std::span<const double> eta, const QubitAmplitudes& psi_l,
                                         int logical_inputs, std::uint64_t seed) {
  if (layout.num_qubits() > 25) throw std::invalid_argument("dense storage reference needs d <= 5");
  if (static_cast<int>(eta.size()) != layout.num_qubits()) throw std::invalid_argument("need one angle per qubit");
  const LogicalBasis basis = logical_basis(layout);
  const int nx = static_cast<int>(layout.faces_of_type(PauliType::X).size());
  const DenseState corrupted = corrupt(encode(basis, psi_l), eta);

  StorageReference ref;
  double total = 0.0;
  for (std::uint64_t key = 0; key < (std::uint64_t{1} << nx); ++key) {
    StorageSyndromeResult r = storage_syndrome(layout, decoder, basis, corrupted, psi_l, key);
    ref.codespace_defect = std::max(ref.codespace_defect, r.codespace_defect);
    total += r.probability;
    ref.p_l += r.probability * 2.0 * std::abs(std::sin(r.theta));
    ref.rows.push_back({key, r.probability, r.theta, std::move(r.correction)});
  }
  ref.z_face_probability = std::max(0.0, 1.0 - total);

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < logical_inputs; ++trial) {
    QubitAmplitudes q{cplx(normal(gen), normal(gen)), cplx(normal(gen), normal(gen))};
    const double nrm = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
    q[0] /= nrm;
    q[1] /= nrm;
    const DenseState other = corrupt(encode(basis, q), eta);
    for (const StorageReferenceRow& row : ref.rows) {
      const StorageSyndromeResult r = storage_syndrome(layout, decoder, basis, other, q, row.key);
      ref.input_probability_defect =
          std::max(ref.input_probability_defect, std::abs(r.probability - row.probability));
      if (row.probability >= 1e-10) {
        ref.input_angle_defect = std::max(ref.input_angle_defect, circular_distance_pi(r.theta, row.theta));
      }
    }
  }
  return ref;
}

std::vector<PrepReferenceRow> dense_prep_reference(const CodeLayout& layout, const Decoder& decoder,
                                                   std::span<const QubitAmplitudes> qubits) {
  if (layout.num_qubits() > 25) throw std::invalid_argument("dense prep reference needs d <= 5");
  const DenseState psi = DenseState::product(qubits);
  const auto& faces = layout.faces();
  const int nf = static_cast<int>(faces.size());
  const std::uint64_t xl = vertex_mask(layout.logical_x_support());
  const std::uint64_t zl = vertex_mask(layout.logical_z_support());
  std::vector<PrepReferenceRow> rows;
  for (std::uint64_t key = 0; key < (std::uint64_t{1} << nf); ++key) {
    DenseState w = psi;
    std::vector<int> s(nf, 1);
    for (int f = 0; f < nf; ++f) {
      s[f] = ((key >> f) & 1) ? -1 : 1;
      w.project(faces[f].type, face_mask(faces[f]), s[f]);
    }
    const double p = w.norm2();
    if (p < kNegligible) continue;
    w.scale(1.0 / std::sqrt(p));
    auto bloch_after = [&](const Correction& c) {
      DenseState v = w;
      v.apply_pauli(support_mask(c.x_support), support_mask(c.z_support));
      // Y_L = i X_L Z_L.
      const cplx y = kI * v.expectation(xl, zl);
      return Bloch{v.expectation(xl, 0).real(), y.real(), v.expectation(0, zl).real()};
    };
    PrepReferenceRow row;
    row.key = key;
    row.probability = p;
    row.correction = decoder.prep_correction(s);
    row.bloch = bloch_after(row.correction);
    if (row.bloch.x < 0.0) {
      row.flipped = true;
      row.correction = fix_sign(layout, row.correction, row.bloch.x);
      row.bloch = bloch_after(row.correction);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double dense_prep_pl(std::span<const PrepReferenceRow> rows) {
  double acc = 0.0;
  for (const PrepReferenceRow& r : rows) {
    acc += r.probability * std::numbers::sqrt2 * std::sqrt(std::max(0.0, 1.0 - r.bloch.x));
  }
  return acc;
}

}  // namespace flosurf
