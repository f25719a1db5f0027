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


#include "flosurf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "flosurf/errors.hpp"
#include "flosurf/rng.hpp"

namespace flosurf {

MeanEstimate mean_se(std::span<const double> values) {
  if (values.empty()) throw EmptySample("no values");
  MeanEstimate out;
  out.samples = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return out;
}

MeanEstimate proportion(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw EmptySample("no trials");
  MeanEstimate out;
  out.samples = trials;
  out.mean = static_cast<double>(successes) / static_cast<double>(trials);
  out.se = std::sqrt(out.mean * (1.0 - out.mean) / static_cast<double>(trials));
  return out;
}

bool find_crossing(std::span<const double> grid, std::span<const double> small,
                   std::span<const double> large, double& x) {
  const std::size_t n = std::min({grid.size(), small.size(), large.size()});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = large[i] - small[i];
    const double b = large[i + 1] - small[i + 1];
    if (a < 0.0 && b >= 0.0) {
      x = grid[i] + (grid[i + 1] - grid[i]) * (-a) / (b - a);
      return true;
    }
  }
  return false;
}

Crossing ThresholdReport::largest_pair() const {
  if (crossings.empty()) throw NotEnoughCurves("report holds no crossings");
  return crossings.back();
}

ThresholdReport threshold_scan(std::span<const double> grid, std::vector<Curve> curves,
                               int bootstrap_samples, std::uint64_t seed, double confidence) {
  if (curves.size() < 2) throw NotEnoughCurves("need at least two distances");
  for (const Curve& c : curves) {
    if (c.mean.size() != grid.size() || c.se.size() != grid.size()) {
      throw NotEnoughCurves("curve does not cover the grid");
    }
  }
  std::sort(curves.begin(), curves.end(), [](const Curve& a, const Curve& b) { return a.distance < b.distance; });
  ThresholdReport report;
  report.grid.assign(grid.begin(), grid.end());
  PhiloxStream rng(seed, 0);
  std::normal_distribution<double> normal;
  std::vector<double> ys(grid.size()), yl(grid.size());
  for (std::size_t k = 0; k + 1 < curves.size(); ++k) {
    const Curve& s = curves[k];
    const Curve& l = curves[k + 1];
    Crossing c;
    c.d_small = s.distance;
    c.d_large = l.distance;
    c.found = find_crossing(grid, s.mean, l.mean, c.x);
    std::vector<double> hits;
    for (int b = 0; b < bootstrap_samples; ++b) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        ys[i] = s.mean[i] + s.se[i] * normal(rng);
        yl[i] = l.mean[i] + l.se[i] * normal(rng);
      }
      double x = 0.0;
      if (find_crossing(grid, ys, yl, x)) hits.push_back(x);
    }
    if (bootstrap_samples > 0) {
      c.bootstrap_hit_rate = static_cast<double>(hits.size()) / bootstrap_samples;
    }
    if (!hits.empty()) {
      std::sort(hits.begin(), hits.end());
      const double tail = 0.5 * (1.0 - confidence);
      const auto at = [&](double q) {
        const auto idx = static_cast<std::size_t>(std::clamp(q * static_cast<double>(hits.size() - 1), 0.0,
                                                              static_cast<double>(hits.size() - 1)));
        return hits[idx];
      };
      c.ci_found = true;
      c.ci_lo = at(tail);
      c.ci_hi = at(1.0 - tail);
    }
    report.crossings.push_back(c);
  }
  return report;
}

double fit_power_law(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) throw EmptySample("power-law fit needs two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

std::string syndrome_hash(std::span<const int> s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  std::uint8_t byte = 0;
  int nbits = 0;
  auto push = [&h](std::uint8_t b) {
    h ^= b;
    h *= 0x100000001b3ull;
  };
  for (int v : s) {
    byte |= static_cast<std::uint8_t>((v < 0 ? 1 : 0) << nbits);
    if (++nbits == 8) {
      push(byte);
      byte = 0;
      nbits = 0;
    }
  }
  if (nbits > 0) push(byte);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace flosurf
