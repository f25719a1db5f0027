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


#ifndef FLOSURF_EXPERIMENT_HPP
#define FLOSURF_EXPERIMENT_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "flosurf/code_layout.hpp"
#include "flosurf/decoder.hpp"
#include "flosurf/prep.hpp"
#include "flosurf/stats.hpp"
#include "flosurf/storage.hpp"

namespace flosurf {

enum class Mode : std::uint8_t { Storage, Prep, PrepSweep, Twirl, Threshold, OracleCheck, Bench };

std::string to_string(Mode mode);

struct ExperimentConfig {
  Mode mode = Mode::Storage;
  int distance = 3;
  double theta = 0.0;
  double phi = 0.0;
  std::optional<std::string> angles_file;
  std::size_t trials = 50000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output;
  DecoderKind decoder = DecoderKind::Mwpm;
};

/// Accepts radians ("0.25") or multiples of pi ("0.08pi", "-pi", "pi/4").
double parse_angle(const std::string& text);

/// Comma-separated angles, or "start:stop:step" with pi suffixes allowed.
std::vector<double> parse_angle_grid(const std::string& text);

/// Comma-separated odd distances.
std::vector<int> parse_distances(const std::string& text);

/// Throws InvalidConfig on a bad distance, zero trials or zero threads.
void validate(const ExperimentConfig& config);

/// One angle per qubit, whitespace or newline separated, '#' comments.
std::vector<double> read_angles_file(const std::string& path, std::size_t expected);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results are
/// stored by index, so output never depends on scheduling. The first
/// exception thrown by any task is rethrown after all workers join.
template <class Result, class Body>
std::vector<Result> run_parallel(std::size_t count, int threads, Body&& body) {
  std::vector<Result> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(count, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct StorageRecord {
  std::string syndrome_hash;
  double theta_s = 0.0;
  double log_p_plus = 0.0;
  double log_p_minus = 0.0;
  double log_q_plus = 0.0;
  double log_q_minus = 0.0;
  double trig_defect = 0.0;
  int peak_modes = 0;
};

struct PrepRecord {
  std::string syndrome_hash;
  Bloch bloch;
  bool flipped = false;
  double norm_defect = 0.0;
  int peak_modes = 0;
};

/// Trial i draws from PhiloxStream(seed, i).
std::vector<StorageRecord> run_storage(const CodeLayout& layout, const StorageNoise& noise,
                                       std::size_t trials, std::uint64_t seed, int threads,
                                       DecoderKind kind = DecoderKind::Mwpm);
std::vector<PrepRecord> run_prep(const CodeLayout& layout, const PrepNoise& noise, std::size_t trials,
                                 std::uint64_t seed, int threads, DecoderKind kind = DecoderKind::Peel);
/// Failure count of twirled Z noise.
std::size_t run_twirl(const CodeLayout& layout, double epsilon, std::size_t trials, std::uint64_t seed,
                      int threads, DecoderKind kind = DecoderKind::Mwpm);

StorageMetrics storage_metrics(const std::vector<StorageRecord>& records);
PrepEstimate prep_estimate(const std::vector<PrepRecord>& records);

/// Columns: trial,syndrome_hash,theta_s,sin_theta_s,weight_logs.
/// weight_logs holds log p+;log p-;log q+;log q-.
void write_storage_csv(std::ostream& os, const std::vector<StorageRecord>& records);
/// Columns: trial,syndrome_hash,bx,by,bz.
void write_prep_csv(std::ostream& os, const std::vector<PrepRecord>& records);

nlohmann::json config_to_json(const ExperimentConfig& config);
nlohmann::json storage_summary(const ExperimentConfig& config, const std::vector<StorageRecord>& records);
nlohmann::json prep_summary(const ExperimentConfig& config, const std::vector<PrepRecord>& records);
nlohmann::json threshold_to_json(const ThresholdReport& report, double unit = 1.0);

struct SweepPoint {
  double theta = 0.0;
  double phi = 0.0;
  double theta_canonical = 0.0;
  double phi_canonical = 0.0;
  PrepEstimate estimate;
};

/// Theta x phi grid; each point simulates its canonical representative.
std::vector<SweepPoint> prep_sweep(const CodeLayout& layout, const std::vector<double>& thetas,
                                   const std::vector<double>& phis, std::size_t trials, std::uint64_t seed,
                                   int threads, DecoderKind kind = DecoderKind::Peel);
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);

enum class ScanKind : std::uint8_t { Storage, Prep, Twirl };

/// P^L(x, d) grid: x is theta for storage and prep, epsilon for twirl.
/// The twirl curve reports 2 x failure rate. Point (d, k) uses seed
/// seed + 1000 d + k.
std::vector<Curve> scan_curves(ScanKind kind, const std::vector<int>& distances, const std::vector<double>& grid,
                               std::size_t trials, std::uint64_t seed, int threads, double phi = 0.0,
                               DecoderKind decoder = DecoderKind::Mwpm);
void write_curves_csv(std::ostream& os, const std::vector<double>& grid, const std::vector<Curve>& curves);

struct BenchPoint {
  int distance = 0;
  int qubits = 0;
  double seconds_per_trial = 0.0;
  int peak_modes = 0;
  /// Mean covariance entries written per trial; machine independent.
  double entry_updates_per_trial = 0.0;
};

struct BenchReport {
  std::string protocol;
  std::vector<BenchPoint> points;
  double scaling_exponent = 0.0;  // per-trial time ~ n^exponent
  double work_exponent = 0.0;     // entry updates per trial ~ n^exponent
};

/// Single-threaded wall time per trial at theta = 0.08 pi (storage) or
/// theta = 0.1 pi, phi = 0 (prep). Distances are timed in 5 interleaved
/// rounds of at least trials / 5 trials and 0.1 s; each point reports its
/// fastest round.
BenchReport bench(const std::string& protocol, const std::vector<int>& distances, std::size_t trials,
                  std::uint64_t seed);
nlohmann::json bench_to_json(const BenchReport& report);

}  // namespace flosurf

#endif  // FLOSURF_EXPERIMENT_HPP
