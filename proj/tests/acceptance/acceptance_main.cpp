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


// Acceptance suite: one PASS/FAIL line per criterion, exit 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "flosurf/code_layout.hpp"
#include "flosurf/decoder.hpp"
#include "flosurf/experiment.hpp"
#include "flosurf/prep.hpp"
#include "flosurf/stats.hpp"
#include "flosurf/storage.hpp"
#include "flosurf/validation.hpp"

namespace {

using namespace flosurf;

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kScanTrials = 50000;
constexpr double kSigmas = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Separation of a - b in combined standard errors.
double z_score(double a, double a_se, double b, double b_se) {
  const double se = std::hypot(a_se, b_se);
  if (se == 0.0) return a > b ? INFINITY : (a < b ? -INFINITY : 0.0);
  return (a - b) / se;
}

std::string describe_crossings(const ThresholdReport& r, double unit, const char* suffix) {
  std::string out;
  for (const Crossing& c : r.crossings) {
    out += format(" d%d/%d:", c.d_small, c.d_large);
    if (c.found) {
      out += format("%.4f%s", c.x / unit, suffix);
      if (c.ci_found) out += format("[%.4f,%.4f]", c.ci_lo / unit, c.ci_hi / unit);
    } else {
      out += "none";
    }
  }
  return out;
}

class Acceptance {
 public:
  Acceptance(int threads, std::uint64_t seed) : threads_(threads), seed_(seed) {}

  Outcome engine() {
    const auto t0 = std::chrono::steady_clock::now();
    const EngineCheck c = run_engine_check(1000, seed_);
    const double secs = seconds_since(t0);
    return {c.pass(1e-9) && secs < 60.0,
            format("sequences=%d measurements=%d max_prob_err=%.2e max_cov_err=%.2e max_wick_err=%.2e time=%.1fs",
                   c.sequences, c.measurements, c.max_probability_error, c.max_covariance_error, c.max_wick_error,
                   secs)};
  }

  Outcome storage_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const StorageCheck c = run_storage_check(CodeLayout::build(3), 20, 100000, seed_ + 1, threads_);
    const double secs = seconds_since(t0);
    return {c.pass(0.01, 1e-7) && secs < 600.0,
            format("vectors=20 samples=1e5 max_tv=%.4f max_angle_err=%.2e input_prob_defect=%.2e "
                   "input_angle_defect=%.2e time=%.1fs",
                   c.max_tv, c.max_angle_error, c.input_probability_defect, c.input_angle_defect, secs)};
  }

  Outcome prep_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const PrepCheck c = run_prep_check(CodeLayout::build(3), 5, 1000000, seed_ + 2, threads_);
    double worst_norm = c.max_norm_defect;
    std::size_t trials = 0;
    for (int d : {3, 9, 19}) {
      const CodeLayout l = CodeLayout::build(d);
      for (std::uint64_t input = 0; input < 5; ++input) {
        PhiloxStream rng(seed_ + 3, 1000 * static_cast<std::uint64_t>(d) + input);
        PrepNoise noise;
        for (int u = 0; u < l.num_qubits(); ++u) {
          noise.qubits.push_back(bloch_from_angles(kPi * (2 * rng.uniform() - 1), kPi * (2 * rng.uniform() - 1)));
        }
        for (const PrepRecord& r : run_prep(l, noise, 400, seed_ + 4 + input, threads_)) {
          worst_norm = std::max(worst_norm, r.norm_defect);
          ++trials;
        }
      }
    }
    const double secs = seconds_since(t0);
    return {c.pass(0.01, 1e-7, 1e-6) && worst_norm <= 1e-6 && secs < 600.0,
            format("inputs=5 samples=1e6 max_tv=%.4f max_bloch_err=%.2e unmatched=%zu; norm check d=3,9,19 "
                   "trials=%zu max_norm_defect=%.2e time=%.1fs",
                   c.max_tv, c.max_bloch_error, c.unmatched_syndromes, trials, worst_norm, secs)};
  }

  Outcome trivial_cases() {
    constexpr double tol = 1e-9;
    bool ok = true;
    double worst = 0.0;
    for (int d : {3, 5, 9, 13}) {
      const CodeLayout l = CodeLayout::build(d);
      const Decoder dec(l);
      const StorageSimulator sim(l);
      for (double theta : {0.0, kPi / 2}) {
        const StorageNoise noise = StorageNoise::uniform(l, theta);
        std::vector<double> th;
        for (std::uint64_t t = 0; t < 200; ++t) {
          PhiloxStream rng(seed_ + 5, t);
          const StorageTrial tr = sim.run_trial(dec, noise, rng);
          ok &= std::all_of(tr.s.begin(), tr.s.end(), [](int s) { return s == 1; });
          worst = std::max(worst, std::abs(tr.theta_s - theta));
          th.push_back(tr.theta_s);
        }
        const double expected = theta == 0.0 ? 0.0 : 2.0;
        worst = std::max(worst, std::abs(estimate_storage_metrics(th).p_l - expected));
      }
      const PrepSimulator prep(l);
      for (double phi : {0.0, 0.1 * kPi, 0.25 * kPi, 0.4 * kPi, -0.3 * kPi}) {
        const PrepNoise noise = PrepNoise::from_angles(l, 0.0, phi);
        std::vector<Bloch> b;
        for (std::uint64_t t = 0; t < 200; ++t) {
          PhiloxStream rng(seed_ + 6, t);
          const PrepTrial tr = prep.run_trial(dec, noise, rng);
          worst = std::max({worst, std::abs(tr.bloch.x - 1.0), std::abs(tr.bloch.y), std::abs(tr.bloch.z)});
          b.push_back(tr.bloch);
        }
        worst = std::max(worst, estimate_prep_PL(b).p_l);
      }
    }
    ok &= worst <= tol;
    return {ok, format("d=3,5,9,13; storage theta=0,pi/2; prep theta=0 at 5 phi; all syndromes trivial=%s "
                       "max_deviation=%.2e",
                       ok ? "yes" : "no", worst)};
  }

  Outcome storage_threshold() {
    const std::vector<int> ds{5, 9, 13, 17};
    std::vector<Curve> curves;
    for (int d : ds) {
      Curve c{d, {}, {}};
      for (std::size_t k = 0; k < storage_grid_.size(); ++k) {
        const StorageMetrics& m = storage_point(d, k);
        c.mean.push_back(m.p_l);
        c.se.push_back(m.p_l_se);
      }
      curves.push_back(c);
    }
    const ThresholdReport r = threshold_scan(storage_grid_, curves, 1000, seed_ + 7);
    const Crossing top = r.largest_pair();
    const bool cross_ok = top.found && top.x >= 0.07 * kPi && top.x <= 0.11 * kPi;
    bool mono = true;
    std::string low = " P_L(0.06pi):";
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const StorageMetrics& m = storage_point(ds[i], 0);
      low += format(" d%d=%.4f+-%.4f", ds[i], m.p_l, m.p_l_se);
      if (i + 1 < ds.size()) {
        const StorageMetrics& n = storage_point(ds[i + 1], 0);
        mono &= z_score(m.p_l, m.p_l_se, n.p_l, n.p_l_se) > kSigmas;
      }
    }
    return {cross_ok && mono,
            format("trials=%zu threshold(d%d/%d)=", kScanTrials, top.d_small, top.d_large) +
                (top.found ? format("%.4fpi", top.x / kPi) : std::string("none")) + " in [0.07pi,0.11pi]" +
                (cross_ok ? "" : " NOT MET") + "; crossings:" + describe_crossings(r, kPi, "pi") + ";" + low +
                (mono ? " monotone(3sigma)" : " NOT monotone(3sigma)")};
  }

  Outcome twirl_baseline() {
    const std::vector<int> ds{5, 9, 13, 17};
    const std::vector<double> grid{0.07, 0.08, 0.09, 0.10, 0.11, 0.12, 0.13};
    std::vector<Curve> curves;
    for (int d : ds) {
      const CodeLayout l = CodeLayout::build(d);
      Curve c{d, {}, {}};
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const MeanEstimate m = twirl_point(l, grid[k], seed_ + 8 + 1000 * d + k);
        c.mean.push_back(2 * m.mean);
        c.se.push_back(2 * m.se);
      }
      curves.push_back(c);
    }
    const ThresholdReport r = threshold_scan(grid, curves, 1000, seed_ + 9);
    const Crossing top = r.largest_pair();
    const bool cross_ok = top.found && top.x >= 0.09 && top.x <= 0.13;

    const double eps = std::pow(std::sin(0.06 * kPi), 2);
    const MeanEstimate tw = twirl_point(CodeLayout::build(13), eps, seed_ + 10);
    const StorageMetrics& coh = storage_point(13, 0);
    const double z = z_score(coh.p_l, coh.p_l_se, 2 * tw.mean, 2 * tw.se);
    const bool under = z > kSigmas;
    return {cross_ok && under,
            format("trials=%zu threshold(d%d/%d)=", kScanTrials, top.d_small, top.d_large) +
                (top.found ? format("%.4f", top.x) : std::string("none")) + " in [0.09,0.13]" +
                (cross_ok ? "" : " NOT MET") + "; crossings:" + describe_crossings(r, 1.0, "") +
                format("; d=13 theta=0.06pi: coherent P_L=%.5f+-%.5f twirl(eps=%.5f) P_L=%.5f+-%.5f z=%.1f", coh.p_l,
                       coh.p_l_se, eps, 2 * tw.mean, 2 * tw.se, z)};
  }

  Outcome coherence_ratio() {
    const std::size_t k = index_of_grid(0.08);
    const StorageMetrics& a = storage_point(5, k);
    const StorageMetrics& b = storage_point(17, k);
    const double z = z_score(a.average_channel_ratio, a.average_channel_ratio_se, b.average_channel_ratio,
                             b.average_channel_ratio_se);
    std::string all;
    for (int d : {5, 9, 13, 17}) {
      const StorageMetrics& m = storage_point(d, k);
      all += format(" d%d=%.4f+-%.4f", d, m.average_channel_ratio, m.average_channel_ratio_se);
    }
    return {z > kSigmas, format("theta=0.08pi average-channel ratio:%s; d5-d17 z=%.1f", all.c_str(), z)};
  }

  Outcome prep_threshold() {
    const std::vector<int> ds{9, 15, 21};
    std::vector<double> grid;
    for (int i = 10; i <= 16; ++i) grid.push_back(i * 0.01 * kPi);
    std::vector<Curve> curves;
    for (int d : ds) {
      const CodeLayout l = CodeLayout::build(d);
      Curve c{d, {}, {}};
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const PrepNoise noise = PrepNoise::from_angles(l, grid[k], 0.0);
        const PrepEstimate e =
            prep_estimate(run_prep(l, noise, kScanTrials, seed_ + 11 + 1000 * d + k, threads_, DecoderKind::Peel));
        c.mean.push_back(e.p_l);
        c.se.push_back(e.p_l_se);
      }
      curves.push_back(c);
    }
    const ThresholdReport r = threshold_scan(grid, curves, 1000, seed_ + 12);
    const Crossing top = r.largest_pair();
    const bool cross_ok = top.found && top.x >= 0.11 * kPi && top.x <= 0.15 * kPi;
    bool decay = true;
    std::string low = " P_L(0.10pi):";
    for (std::size_t i = 0; i < curves.size(); ++i) {
      low += format(" d%d=%.4f+-%.4f", curves[i].distance, curves[i].mean[0], curves[i].se[0]);
      if (i + 1 < curves.size()) {
        decay &= z_score(curves[i].mean[0], curves[i].se[0], curves[i + 1].mean[0], curves[i + 1].se[0]) > kSigmas;
      }
    }
    return {cross_ok && decay,
            format("trials=%zu phi=0 threshold(d%d/%d)=", kScanTrials, top.d_small, top.d_large) +
                (top.found ? format("%.4fpi", top.x / kPi) : std::string("none")) + " in [0.11pi,0.15pi]" +
                (cross_ok ? "" : " NOT MET") + "; crossings:" + describe_crossings(r, kPi, "pi") + ";" + low +
                (decay ? " decaying(3sigma)" : " NOT decaying(3sigma)")};
  }

  Outcome performance() {
    const std::vector<int> ds{9, 19, 29, 39, 49};
    const BenchReport s = bench("storage", ds, 5, seed_ + 13);
    const BenchReport p = bench("prep", ds, 5, seed_ + 14);
    bool peak_ok = true;
    for (const BenchReport* r : {&s, &p}) {
      for (const BenchPoint& b : r->points) peak_ok &= b.peak_modes <= 8 * b.distance;
    }
    const double ts = s.points.back().seconds_per_trial;
    const double tp = p.points.back().seconds_per_trial;
    const bool time_ok = ts <= 17.0 && tp <= 4.0;
    const bool exp_ok = s.scaling_exponent >= 1.5 && s.scaling_exponent <= 2.5 && p.scaling_exponent >= 1.5 &&
                        p.scaling_exponent <= 2.5;
    return {peak_ok && time_ok && exp_ok,
            format("d=49 storage=%.4fs/trial (<=17) prep=%.4fs/trial (<=4); exponent storage=%.3f prep=%.3f in "
                   "[1.5,2.5]; entry-update exponent storage=%.3f prep=%.3f (informational); peak modes at d=49 "
                   "storage=%d prep=%d (<=392)%s",
                   ts, tp, s.scaling_exponent, p.scaling_exponent, s.work_exponent, p.work_exponent,
                   s.points.back().peak_modes,
                   p.points.back().peak_modes, peak_ok ? "" : " peak bound NOT MET")};
  }

  Outcome determinism() {
    const CodeLayout l = CodeLayout::build(9);
    std::ostringstream s1, s8, p1, p8;
    const StorageNoise sn = StorageNoise::uniform(l, 0.08 * kPi);
    write_storage_csv(s1, run_storage(l, sn, 2000, seed_ + 15, 1));
    write_storage_csv(s8, run_storage(l, sn, 2000, seed_ + 15, 8));
    const PrepNoise pn = PrepNoise::from_angles(l, 0.1 * kPi, 0.05 * kPi);
    write_prep_csv(p1, run_prep(l, pn, 2000, seed_ + 16, 1));
    write_prep_csv(p8, run_prep(l, pn, 2000, seed_ + 16, 8));
    const bool ok = s1.str() == s8.str() && p1.str() == p8.str();
    return {ok, format("d=9, 2000 trials; storage CSV %zu bytes %s; prep CSV %zu bytes %s", s1.str().size(),
                       s1.str() == s8.str() ? "identical" : "DIFFERENT", p1.str().size(),
                       p1.str() == p8.str() ? "identical" : "DIFFERENT")};
  }

 private:
  std::size_t index_of_grid(double over_pi) const {
    for (std::size_t k = 0; k < storage_grid_.size(); ++k) {
      if (std::abs(storage_grid_[k] - over_pi * kPi) < 1e-12) return k;
    }
    throw std::logic_error("angle not on the storage grid");
  }

  const StorageMetrics& storage_point(int d, std::size_t k) {
    const auto key = std::make_pair(d, k);
    auto it = storage_cache_.find(key);
    if (it != storage_cache_.end()) return it->second;
    const CodeLayout l = CodeLayout::build(d);
    const StorageNoise noise = StorageNoise::uniform(l, storage_grid_[k]);
    const auto records = run_storage(l, noise, kScanTrials, seed_ + 17 + 1000 * d + k, threads_);
    return storage_cache_.emplace(key, storage_metrics(records)).first->second;
  }

  MeanEstimate twirl_point(const CodeLayout& l, double eps, std::uint64_t seed) const {
    return proportion(run_twirl(l, eps, kScanTrials, seed, threads_), kScanTrials);
  }

  int threads_;
  std::uint64_t seed_;
  std::vector<double> storage_grid_{0.06 * kPi, 0.07 * kPi, 0.08 * kPi, 0.09 * kPi,
                                    0.10 * kPi, 0.11 * kPi, 0.12 * kPi};
  std::map<std::pair<int, std::size_t>, StorageMetrics> storage_cache_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flosurf acceptance suite"};
  std::vector<int> only;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 20261016;
  std::string report_path;
  app.add_option("--only", only, "run only these criteria (1-10)")->delimiter(',')->check(CLI::Range(1, 10));
  app.add_option("--threads,-j", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "base seed")->capture_default_str();
  app.add_option("--report", report_path, "also write the criterion lines to this file");
  CLI11_PARSE(app, argc, argv);

  Acceptance acc(threads, seed);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"engine oracle", [&] { return acc.engine(); }},
      {"storage oracle d=3", [&] { return acc.storage_oracle(); }},
      {"prep oracle d=3", [&] { return acc.prep_oracle(); }},
      {"exact trivial cases", [&] { return acc.trivial_cases(); }},
      {"storage threshold", [&] { return acc.storage_threshold(); }},
      {"twirl baseline", [&] { return acc.twirl_baseline(); }},
      {"coherence ratio trend", [&] { return acc.coherence_ratio(); }},
      {"prep threshold", [&] { return acc.prep_threshold(); }},
      {"performance", [&] { return acc.performance(); }},
      {"determinism", [&] { return acc.determinism(); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  std::FILE* report = report_path.empty() ? nullptr : std::fopen(report_path.c_str(), "w");
  if (!report_path.empty() && !report) {
    std::fprintf(stderr, "cannot write %s\n", report_path.c_str());
    return 2;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.contains(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    const std::string line = format("criterion %2d %s  %s: ", id, o.pass ? "PASS" : "FAIL", criteria[i].first) +
                             o.detail + format(" (%.0fs)\n", seconds_since(t0));
    for (std::FILE* f : {stdout, report}) {
      if (!f) continue;
      std::fputs(line.c_str(), f);
      std::fflush(f);
    }
  }
  if (report) std::fclose(report);
  return failures == 0 ? 0 : 1;
}
