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


#ifndef FLOSURF_STATS_HPP
#define FLOSURF_STATS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace flosurf {

struct MeanEstimate {
  std::size_t samples = 0;
  double mean = 0.0;
  double se = 0.0;  // sample stdev / sqrt(N)
};

/// Throws EmptySample on an empty input.
MeanEstimate mean_se(std::span<const double> values);

/// Binomial proportion k / n with se sqrt(p (1 - p) / n).
MeanEstimate proportion(std::size_t successes, std::size_t trials);

/// One P^L curve sampled on a shared grid.
struct Curve {
  int distance = 0;
  std::vector<double> mean;
  std::vector<double> se;
};

struct Crossing {
  int d_small = 0;
  int d_large = 0;
  bool found = false;
  double x = 0.0;
  /// Percentile interval of bootstrap crossings; valid when ci_found.
  bool ci_found = false;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  /// Fraction of bootstrap replicas that crossed inside the grid.
  double bootstrap_hit_rate = 0.0;
};

/// First grid interval where the larger-distance curve stops lying below
/// the smaller one; linear interpolation inside it.
bool find_crossing(std::span<const double> grid, std::span<const double> small,
                   std::span<const double> large, double& x);

struct ThresholdReport {
  std::vector<double> grid;
  std::vector<Crossing> crossings;  // adjacent distance pairs, ascending
  /// Crossing of the two largest distances.
  Crossing largest_pair() const;
};

/// Crossings of adjacent curves (sorted by distance) with a parametric
/// bootstrap that redraws every point from N(mean, se). Throws
/// NotEnoughCurves for fewer than two curves.
ThresholdReport threshold_scan(std::span<const double> grid, std::vector<Curve> curves,
                               int bootstrap_samples = 1000, std::uint64_t seed = 1,
                               double confidence = 0.95);

/// Least-squares slope of log y against log x.
double fit_power_law(std::span<const double> x, std::span<const double> y);

/// 64-bit FNV-1a of a +-1 vector, bit per entry; rendered as 16 hex digits.
std::string syndrome_hash(std::span<const int> s);

}  // namespace flosurf

#endif  // FLOSURF_STATS_HPP
