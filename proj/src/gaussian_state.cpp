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


#include "flosurf/gaussian_state.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <utility>

#include "flosurf/errors.hpp"

namespace flosurf {

namespace {

std::string pair_name(int p, int q) {
  return "(" + std::to_string(p) + ", " + std::to_string(q) + ")";
}

}  // namespace

GaussianState GaussianState::from_pairing(std::span<const ModePair> pairs) {
  GaussianState state;
  state.reserve(static_cast<int>(2 * pairs.size()));
  state.attach_pairs(pairs);
  return state;
}

GaussianState GaussianState::from_pairing(std::span<const ModePair> pairs,
                                          std::span<const int> modes) {
  GaussianState state = from_pairing(pairs);
  for (int mode : modes) {
    if (!state.contains(mode)) throw UnmatchedMode("mode " + std::to_string(mode) + " has no partner");
  }
  if (static_cast<std::size_t>(state.num_modes()) != modes.size()) {
    throw UnmatchedMode("pairing covers modes outside the declared set");
  }
  return state;
}

GaussianState GaussianState::from_bloch_c4(double bx, double by, double bz) {
  return from_bloch_c4({1, 2, 3, 4}, bx, by, bz);
}

GaussianState GaussianState::from_bloch_c4(const std::array<int, 4>& labels, double bx, double by,
                                           double bz) {
  GaussianState state;
  state.attach_c4(labels, bx, by, bz);
  return state;
}

void GaussianState::attach_c4(const std::array<int, 4>& labels, double bx, double by, double bz) {
  const double norm = std::sqrt(bx * bx + by * by + bz * bz);
  if (!(std::abs(norm - 1.0) <= kTolerance)) {
    throw NotNormalized("Bloch vector norm " + std::to_string(norm));
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      if (labels[i] == labels[j]) throw DuplicateMode("cluster label " + std::to_string(labels[i]));
    }
    if (contains(labels[i])) throw LabelCollision("mode " + std::to_string(labels[i]) + " already active");
  }
  reserve(k_ + 4);
  int idx[4];
  for (int i = 0; i < 4; ++i) idx[i] = add_mode(labels[i]);
  const double m[4][4] = {{0.0, bx, -by, bz},
                          {-bx, 0.0, bz, by},
                          {by, -bz, 0.0, bx},
                          {-bz, -by, -bx, 0.0}};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) at(idx[r], idx[c]) = m[r][c];
  }
}

GaussianState GaussianState::tensor(const GaussianState& a, const GaussianState& b) {
  GaussianState out = a;
  out.attach(b);
  return out;
}

void GaussianState::reserve(int capacity) {
  if (capacity > cap_) grow(capacity);
}

void GaussianState::grow(int capacity) {
  const int new_cap = std::max({capacity, 2 * cap_, 16});
  std::vector<double> fresh(static_cast<std::size_t>(new_cap) * new_cap, 0.0);
  for (int r = 0; r < k_; ++r) {
    std::copy_n(row(r), k_, fresh.data() + static_cast<std::size_t>(r) * new_cap);
  }
  m_.swap(fresh);
  cap_ = new_cap;
  scratch_.resize(2 * static_cast<std::size_t>(cap_));
}

int GaussianState::index_of(int label) const {
  if (!contains(label)) throw UnknownMode("mode " + std::to_string(label) + " is not active");
  return index_[label];
}

int GaussianState::add_mode(int label) {
  if (label < 0) throw UnknownMode("negative mode label " + std::to_string(label));
  if (contains(label)) throw LabelCollision("mode " + std::to_string(label) + " already active");
  if (static_cast<std::size_t>(label) >= index_.size()) {
    index_.resize(std::max<std::size_t>(label + 1, 2 * index_.size()), -1);
  }
  if (k_ == cap_) grow(k_ + 1);
  const int i = k_++;
  for (int j = 0; j < k_; ++j) {
    at(i, j) = 0.0;
    at(j, i) = 0.0;
  }
  labels_.push_back(label);
  index_[label] = i;
  peak_ = std::max(peak_, k_);
  return i;
}

void GaussianState::attach_pair(int p, int q, int sign) {
  const ModePair pair{p, q, sign};
  attach_pairs(std::span<const ModePair>(&pair, 1));
}

void GaussianState::attach_pairs(std::span<const ModePair> pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const ModePair& a = pairs[i];
    if (a.p == a.q) throw DuplicateMode("pair " + pair_name(a.p, a.q));
    if (a.sign != 1 && a.sign != -1) throw DuplicateMode("pair sign must be +1 or -1");
    for (std::size_t j = 0; j < i; ++j) {
      const ModePair& b = pairs[j];
      if (a.p == b.p || a.p == b.q || a.q == b.p || a.q == b.q) {
        throw DuplicateMode("pairs " + pair_name(a.p, a.q) + " and " + pair_name(b.p, b.q));
      }
    }
    if (contains(a.p) || contains(a.q)) {
      throw LabelCollision("pair " + pair_name(a.p, a.q) + " overlaps active modes");
    }
  }
  reserve(k_ + static_cast<int>(2 * pairs.size()));
  for (const ModePair& pair : pairs) {
    const int ip = add_mode(pair.p);
    const int iq = add_mode(pair.q);
    at(ip, iq) = pair.sign;
    at(iq, ip) = -pair.sign;
  }
}

void GaussianState::attach(const GaussianState& other) {
  for (int label : other.labels_) {
    if (contains(label)) throw LabelCollision("mode " + std::to_string(label) + " already active");
  }
  const int base = k_;
  reserve(k_ + other.k_);
  for (int label : other.labels_) add_mode(label);
  for (int r = 0; r < other.k_; ++r) {
    std::copy_n(other.row(r), other.k_, row(base + r) + base);
  }
}

void GaussianState::rotate(int p, int q, double gamma) {
  if (p == q) throw DuplicateMode("rotation needs two distinct modes");
  const int ip = index_of(p);
  const int iq = index_of(q);
  const double c = std::cos(2.0 * gamma);
  const double s = std::sin(2.0 * gamma);
  double* rp = row(ip);
  double* rq = row(iq);
  for (int r = 0; r < k_; ++r) {
    if (r == ip || r == iq) continue;
    const double a = rp[r];
    const double b = rq[r];
    const double na = c * a + s * b;
    const double nb = c * b - s * a;
    rp[r] = na;
    rq[r] = nb;
    at(r, ip) = -na;
    at(r, iq) = -nb;
  }
  ++ops_.rotations;
  ops_.entry_updates += 4 * static_cast<std::uint64_t>(std::max(0, k_ - 2));
}

double GaussianState::outcome_probability(int p, int q, int outcome) const {
  return 0.5 * (1.0 + outcome * expectation_pair(p, q));
}

double GaussianState::measure_pair(int p, int q, int outcome) {
  if (p == q) throw DuplicateMode("measurement needs two distinct modes");
  if (outcome != 1 && outcome != -1) throw ImpossibleOutcome("outcome must be +1 or -1");
  int ip = index_of(p);
  int iq = index_of(q);
  if (outcome == -1) std::swap(ip, iq);
  const double lambda = 0.5 * (1.0 + at(ip, iq));
  if (lambda <= kImpossible) {
    throw ImpossibleOutcome("pair " + pair_name(p, q) + " outcome " + std::to_string(outcome));
  }

  // M' = M + (L K^T - K L^T) / (2 lambda), K and L the columns of ip and iq.
  double* kcol = scratch_.data();
  double* lcol = scratch_.data() + cap_;
  for (int r = 0; r < k_; ++r) {
    kcol[r] = at(r, ip);
    lcol[r] = at(r, iq);
  }
  const double inv = 1.0 / (2.0 * lambda);
  const int k = k_;
  std::uint64_t rows_updated = 0;
  for (int a = 0; a < k; ++a) {
    const double la = lcol[a] * inv;
    const double ka = kcol[a] * inv;
    if (la == 0.0 && ka == 0.0) continue;
    ++rows_updated;
    double* ra = row(a);
    for (int b = 0; b < k; ++b) {
      const double v = ra[b] + la * kcol[b] - ka * lcol[b];
      ra[b] = std::min(1.0, std::max(-1.0, v));
    }
  }
  double* rp = row(ip);
  double* rq = row(iq);
  for (int r = 0; r < k; ++r) {
    rp[r] = 0.0;
    rq[r] = 0.0;
    at(r, ip) = 0.0;
    at(r, iq) = 0.0;
  }
  at(ip, iq) = 1.0;
  at(iq, ip) = -1.0;
  ++ops_.measurements;
  ops_.entry_updates += (rows_updated + 4) * static_cast<std::uint64_t>(k);
  assert(antisymmetry_defect() < kTolerance);
  return lambda;
}

double GaussianState::expectation_pair(int p, int q) const {
  if (p == q) throw DuplicateMode("expectation of c_p c_p is not a pair expectation");
  return at(index_of(p), index_of(q));
}

double GaussianState::wick_expectation(std::span<const int> modes) const {
  if (modes.size() % 2 != 0) throw OddSubset(std::to_string(modes.size()) + " modes");
  const int n = static_cast<int>(modes.size());
  DenseMatrix sub{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = index_of(modes[i]);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sub(i, j) = i == j ? 0.0 : at(idx[i], idx[j]);
  }
  return pfaffian(std::move(sub));
}

void GaussianState::detach_pair(int p, int q) {
  if (p == q) throw DuplicateMode("detach needs two distinct modes");
  const int ip = index_of(p);
  const int iq = index_of(q);
  for (int i : {ip, iq}) {
    const int partner = i == ip ? iq : ip;
    for (int j = 0; j < k_; ++j) {
      const double v = at(i, j);
      const bool ok = j == partner ? std::abs(std::abs(v) - 1.0) <= kTolerance
                                   : std::abs(v) <= kTolerance;
      if (!ok) throw NotDecoupled("pair " + pair_name(p, q) + " is still correlated");
    }
  }
  remove_index(std::max(ip, iq));
  remove_index(std::min(ip, iq));
}

void GaussianState::remove_index(int i) {
  const int last = k_ - 1;
  index_[labels_[i]] = -1;
  if (i != last) {
    for (int j = 0; j < k_; ++j) at(i, j) = at(last, j);
    for (int j = 0; j < k_; ++j) at(j, i) = at(j, last);
    at(i, i) = 0.0;
    labels_[i] = labels_[last];
    index_[labels_[i]] = i;
  }
  labels_.pop_back();
  --k_;
}

DenseMatrix GaussianState::covariance() const {
  DenseMatrix out{k_, std::vector<double>(static_cast<std::size_t>(k_) * k_)};
  for (int r = 0; r < k_; ++r) {
    for (int c = 0; c < k_; ++c) out(r, c) = at(r, c);
  }
  return out;
}

double GaussianState::antisymmetry_defect() const {
  double worst = 0.0;
  for (int r = 0; r < k_; ++r) {
    worst = std::max(worst, std::abs(at(r, r)));
    for (int c = 0; c < k_; ++c) {
      worst = std::max(worst, std::abs(at(r, c) + at(c, r)));
      worst = std::max(worst, std::abs(at(r, c)) - 1.0);
    }
  }
  return worst;
}

double GaussianState::purity_defect() const {
  double worst = 0.0;
  for (int r = 0; r < k_; ++r) {
    for (int c = 0; c < k_; ++c) {
      double sum = 0.0;
      for (int j = 0; j < k_; ++j) sum += at(r, j) * at(c, j);
      worst = std::max(worst, std::abs(sum - (r == c ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double pfaffian(DenseMatrix a) {
  const int n = a.rows;
  if (n % 2 != 0) return 0.0;
  double result = 1.0;
  for (int k = 0; k + 1 < n; k += 2) {
    int pivot = k + 1;
    for (int i = k + 2; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (pivot != k + 1) {
      for (int j = 0; j < n; ++j) std::swap(a(k + 1, j), a(pivot, j));
      for (int j = 0; j < n; ++j) std::swap(a(j, k + 1), a(j, pivot));
      result = -result;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    result *= a(k, k + 1);
    if (k + 2 < n) {
      std::vector<double> tau(n, 0.0);
      for (int j = k + 2; j < n; ++j) tau[j] = a(k, j) / a(k, k + 1);
      for (int i = k + 2; i < n; ++i) {
        for (int j = k + 2; j < n; ++j) {
          a(i, j) += tau[i] * a(j, k + 1) - a(i, k + 1) * tau[j];
        }
      }
    }
  }
  return result;
}

}  // namespace flosurf
