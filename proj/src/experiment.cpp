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


#include "flosurf/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "flosurf/errors.hpp"
#include "flosurf/rng.hpp"

namespace flosurf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidConfig("cannot parse " + context + " '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw InvalidConfig("cannot parse " + context + " '" + text + "'");
  return v;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (v == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Storage: return "storage";
    case Mode::Prep: return "prep";
    case Mode::PrepSweep: return "prep-sweep";
    case Mode::Twirl: return "twirl";
    case Mode::Threshold: return "threshold";
    case Mode::OracleCheck: return "oracle-check";
    case Mode::Bench: return "bench";
  }
  return "unknown";
}

double parse_angle(const std::string& raw) {
  std::string text = trim(raw);
  if (text.empty()) throw InvalidConfig("empty angle");
  double denom = 1.0;
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    denom = parse_number(trim(text.substr(slash + 1)), "angle denominator");
    if (denom == 0.0) throw InvalidConfig("zero angle denominator");
    text = trim(text.substr(0, slash));
  }
  double scale = 1.0;
  if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    text = trim(text.substr(0, text.size() - 2));
    if (!text.empty() && text.back() == '*') text = trim(text.substr(0, text.size() - 1));
    if (text.empty() || text == "+") text = "1";
    if (text == "-") text = "-1";
  } else if (denom != 1.0) {
    throw InvalidConfig("fractions are only accepted with a pi suffix: '" + raw + "'");
  }
  return parse_number(text, "angle") * scale / denom;
}

std::vector<double> parse_angle_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InvalidConfig("grid must be start:stop:step");
    const double start = parse_angle(parts[0]);
    const double stop = parse_angle(parts[1]);
    const double step = parse_angle(parts[2]);
    if (step <= 0.0) throw InvalidConfig("grid step must be positive");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) {
      if (!trim(p).empty()) out.push_back(parse_angle(p));
    }
  }
  if (out.empty()) throw InvalidConfig("empty grid '" + text + "'");
  return out;
}

std::vector<int> parse_distances(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    p = trim(p);
    if (p.empty()) continue;
    const double v = parse_number(p, "distance");
    if (v != std::floor(v) || v < 3 || static_cast<long>(v) % 2 == 0) {
      throw InvalidConfig("distance must be odd and at least 3: '" + p + "'");
    }
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw InvalidConfig("no distances given");
  return out;
}

void validate(const ExperimentConfig& config) {
  if (config.distance < 3 || config.distance % 2 == 0) {
    throw InvalidConfig("distance must be odd and at least 3");
  }
  if (config.trials < 1) throw InvalidConfig("trials must be at least 1");
  if (config.threads < 1) throw InvalidConfig("threads must be at least 1");
  if (!std::isfinite(config.theta) || !std::isfinite(config.phi)) throw InvalidConfig("angles must be finite");
}

std::vector<double> read_angles_file(const std::string& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open angle file " + path);
  std::vector<double> out;
  for (std::string line; std::getline(in, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::stringstream ss(line);
    for (std::string tok; ss >> tok;) out.push_back(parse_angle(tok));
  }
  if (out.size() != expected) {
    throw InvalidConfig("angle file has " + std::to_string(out.size()) + " entries, expected " +
                        std::to_string(expected));
  }
  return out;
}

std::vector<StorageRecord> run_storage(const CodeLayout& layout, const StorageNoise& noise,
                                       std::size_t trials, std::uint64_t seed, int threads,
                                       DecoderKind kind) {
  const Decoder decoder(layout);
  const StorageSimulator sim(layout);
  return run_parallel<StorageRecord>(trials, threads, [&](std::size_t i) {
    PhiloxStream rng(seed, i);
    const StorageTrial t = sim.run_trial(decoder, noise, rng, kind);
    StorageRecord r;
    r.syndrome_hash = syndrome_hash(t.s);
    r.theta_s = t.theta_s;
    r.log_p_plus = t.log_p_plus;
    r.log_p_minus = t.log_p_minus;
    r.log_q_plus = t.log_q_plus;
    r.log_q_minus = t.log_q_minus;
    r.trig_defect = t.trig_defect;
    r.peak_modes = t.peak_modes;
    return r;
  });
}

std::vector<PrepRecord> run_prep(const CodeLayout& layout, const PrepNoise& noise, std::size_t trials,
                                 std::uint64_t seed, int threads, DecoderKind kind) {
  const Decoder decoder(layout);
  const PrepSimulator sim(layout);
  return run_parallel<PrepRecord>(trials, threads, [&](std::size_t i) {
    PhiloxStream rng(seed, i);
    const PrepTrial t = sim.run_trial(decoder, noise, rng, kind);
    PrepRecord r;
    r.syndrome_hash = syndrome_hash(t.s);
    r.bloch = t.bloch;
    r.flipped = t.flipped;
    r.norm_defect = std::abs(t.bloch.norm() - 1.0);
    r.peak_modes = t.peak_modes;
    return r;
  });
}

std::size_t run_twirl(const CodeLayout& layout, double epsilon, std::size_t trials, std::uint64_t seed,
                      int threads, DecoderKind kind) {
  const Decoder decoder(layout);
  const auto fails = run_parallel<std::uint8_t>(trials, threads, [&](std::size_t i) {
    PhiloxStream rng(seed, i);
    return static_cast<std::uint8_t>(twirl_trial(decoder, epsilon, rng, kind));
  });
  std::size_t total = 0;
  for (auto f : fails) total += f;
  return total;
}

StorageMetrics storage_metrics(const std::vector<StorageRecord>& records) {
  std::vector<double> th;
  th.reserve(records.size());
  for (const auto& r : records) th.push_back(r.theta_s);
  return estimate_storage_metrics(th);
}

PrepEstimate prep_estimate(const std::vector<PrepRecord>& records) {
  std::vector<Bloch> bloch;
  bloch.reserve(records.size());
  for (const auto& r : records) bloch.push_back(r.bloch);
  return estimate_prep_PL(bloch);
}

void write_storage_csv(std::ostream& os, const std::vector<StorageRecord>& records) {
  os << "trial,syndrome_hash,theta_s,sin_theta_s,weight_logs\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << i << ',' << r.syndrome_hash << ',' << fmt(r.theta_s) << ',' << fmt(std::sin(r.theta_s)) << ','
       << fmt(r.log_p_plus) << ';' << fmt(r.log_p_minus) << ';' << fmt(r.log_q_plus) << ';' << fmt(r.log_q_minus)
       << '\n';
  }
}

void write_prep_csv(std::ostream& os, const std::vector<PrepRecord>& records) {
  os << "trial,syndrome_hash,bx,by,bz\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << i << ',' << r.syndrome_hash << ',' << fmt(r.bloch.x) << ',' << fmt(r.bloch.y) << ',' << fmt(r.bloch.z)
       << '\n';
  }
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json j;
  j["mode"] = to_string(config.mode);
  j["distance"] = config.distance;
  j["theta"] = config.theta;
  j["theta_over_pi"] = config.theta / std::numbers::pi;
  j["phi"] = config.phi;
  j["phi_over_pi"] = config.phi / std::numbers::pi;
  if (config.angles_file) j["angles_file"] = *config.angles_file;
  j["trials"] = config.trials;
  j["seed"] = config.seed;
  j["threads"] = config.threads;
  j["decoder"] = to_string(config.decoder);
  return j;
}

nlohmann::json storage_summary(const ExperimentConfig& config, const std::vector<StorageRecord>& records) {
  const StorageMetrics m = storage_metrics(records);
  double trig = 0.0;
  int peak = 0;
  for (const auto& r : records) {
    trig = std::max(trig, r.trig_defect);
    peak = std::max(peak, r.peak_modes);
  }
  nlohmann::json j;
  j["config"] = config_to_json(config);
  j["samples"] = m.samples;
  j["P_L"] = {{"value", m.p_l}, {"se", m.p_l_se}};
  j["P_L_twirl"] = {{"value", m.p_l_twirl}, {"se", m.p_l_twirl_se}};
  j["conditional_coherence_ratio"] = {{"value", m.conditional_ratio}, {"se", m.conditional_ratio_se}};
  j["average_channel_coherence_ratio"] = {{"value", m.average_channel_ratio}, {"se", m.average_channel_ratio_se}};
  j["epsilon"] = m.epsilon;
  j["delta"] = m.delta;
  j["ratio_limit_convention"] = m.ratio_limit;
  j["theta_s_histogram"] = {{"range", {0.0, std::numbers::pi}}, {"counts", m.histogram}};
  j["max_trig_defect"] = trig;
  j["peak_active_modes"] = peak;
  return j;
}

nlohmann::json prep_summary(const ExperimentConfig& config, const std::vector<PrepRecord>& records) {
  const PrepEstimate e = prep_estimate(records);
  double norm = 0.0;
  int peak = 0;
  std::size_t flips = 0;
  for (const auto& r : records) {
    norm = std::max(norm, r.norm_defect);
    peak = std::max(peak, r.peak_modes);
    flips += r.flipped ? 1 : 0;
  }
  nlohmann::json j;
  j["config"] = config_to_json(config);
  j["samples"] = e.samples;
  j["P_L"] = {{"value", e.p_l}, {"se", e.p_l_se}};
  j["sign_fixes"] = flips;
  j["max_bloch_norm_defect"] = norm;
  j["peak_active_modes"] = peak;
  return j;
}

nlohmann::json threshold_to_json(const ThresholdReport& report, double unit) {
  nlohmann::json j;
  std::vector<double> grid;
  for (double x : report.grid) grid.push_back(x / unit);
  j["grid"] = grid;
  j["crossings"] = nlohmann::json::array();
  for (const Crossing& c : report.crossings) {
    nlohmann::json e{{"distances", {c.d_small, c.d_large}}, {"found", c.found},
                     {"bootstrap_hit_rate", c.bootstrap_hit_rate}};
    if (c.found) e["crossing"] = c.x / unit;
    if (c.ci_found) e["ci"] = {c.ci_lo / unit, c.ci_hi / unit};
    j["crossings"].push_back(e);
  }
  return j;
}

std::vector<SweepPoint> prep_sweep(const CodeLayout& layout, const std::vector<double>& thetas,
                                   const std::vector<double>& phis, std::size_t trials, std::uint64_t seed,
                                   int threads, DecoderKind kind) {
  std::vector<SweepPoint> out;
  std::uint64_t point = 0;
  for (double th : thetas) {
    for (double ph : phis) {
      SweepPoint p;
      p.theta = th;
      p.phi = ph;
      std::tie(p.theta_canonical, p.phi_canonical) = prep_symmetry_check(th, ph);
      const PrepNoise noise = PrepNoise::from_angles(layout, p.theta_canonical, p.phi_canonical);
      p.estimate = prep_estimate(run_prep(layout, noise, trials, seed + point, threads, kind));
      out.push_back(p);
      ++point;
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
  os << "theta_over_pi,phi_over_pi,theta_canonical_over_pi,phi_canonical_over_pi,trials,P_L,P_L_se\n";
  for (const auto& p : points) {
    os << fmt(p.theta / std::numbers::pi) << ',' << fmt(p.phi / std::numbers::pi) << ','
       << fmt(p.theta_canonical / std::numbers::pi) << ',' << fmt(p.phi_canonical / std::numbers::pi) << ','
       << p.estimate.samples << ',' << fmt(p.estimate.p_l) << ',' << fmt(p.estimate.p_l_se) << '\n';
  }
}

std::vector<Curve> scan_curves(ScanKind kind, const std::vector<int>& distances, const std::vector<double>& grid,
                               std::size_t trials, std::uint64_t seed, int threads, double phi,
                               DecoderKind decoder) {
  std::vector<Curve> curves;
  for (int d : distances) {
    const CodeLayout layout = CodeLayout::build(d);
    Curve c;
    c.distance = d;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const std::uint64_t s = seed + 1000ull * static_cast<std::uint64_t>(d) + k;
      double mean = 0.0, se = 0.0;
      switch (kind) {
        case ScanKind::Storage: {
          const StorageMetrics m =
              storage_metrics(run_storage(layout, StorageNoise::uniform(layout, grid[k]), trials, s, threads, decoder));
          mean = m.p_l;
          se = m.p_l_se;
          break;
        }
        case ScanKind::Prep: {
          const PrepEstimate e =
              prep_estimate(run_prep(layout, PrepNoise::from_angles(layout, grid[k], phi), trials, s, threads));
          mean = e.p_l;
          se = e.p_l_se;
          break;
        }
        case ScanKind::Twirl: {
          const MeanEstimate f = proportion(run_twirl(layout, grid[k], trials, s, threads, decoder), trials);
          mean = 2.0 * f.mean;
          se = 2.0 * f.se;
          break;
        }
      }
      c.mean.push_back(mean);
      c.se.push_back(se);
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

void write_curves_csv(std::ostream& os, const std::vector<double>& grid, const std::vector<Curve>& curves) {
  os << "distance,x,P_L,P_L_se\n";
  for (const Curve& c : curves) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      os << c.distance << ',' << fmt(grid[k]) << ',' << fmt(c.mean[k]) << ',' << fmt(c.se[k]) << '\n';
    }
  }
}

BenchReport bench(const std::string& protocol, const std::vector<int>& distances, std::size_t trials,
                  std::uint64_t seed) {
  if (protocol != "storage" && protocol != "prep") throw InvalidConfig("bench protocol must be storage or prep");
  if (trials < 1) throw InvalidConfig("bench needs at least one trial");
  // Machine speed drifts over seconds, so distances are timed in interleaved
  // rounds and each point keeps its fastest round.
  constexpr int kRounds = 5;
  constexpr double kMinRoundSeconds = 0.1;
  const std::size_t per_round = (trials + kRounds - 1) / kRounds;

  struct Target {
    explicit Target(int d) : layout(CodeLayout::build(d)), decoder(layout) {}
    CodeLayout layout;
    Decoder decoder;
    std::function<std::pair<int, std::uint64_t>(std::uint64_t)> trial;
  };
  std::vector<std::unique_ptr<Target>> targets;
  std::vector<StorageSimulator> storage_sims;
  std::vector<PrepSimulator> prep_sims;
  storage_sims.reserve(distances.size());
  prep_sims.reserve(distances.size());
  BenchReport report;
  report.protocol = protocol;
  for (int d : distances) {
    auto t = std::make_unique<Target>(d);
    if (protocol == "storage") {
      const StorageSimulator& sim = storage_sims.emplace_back(t->layout);
      auto noise = std::make_shared<StorageNoise>(StorageNoise::uniform(t->layout, 0.08 * std::numbers::pi));
      t->trial = [&sim, &dec = t->decoder, noise, seed](std::uint64_t i) {
        PhiloxStream rng(seed, i);
        const StorageTrial tr = sim.run_trial(dec, *noise, rng);
        return std::make_pair(tr.peak_modes, tr.entry_updates);
      };
    } else {
      const PrepSimulator& sim = prep_sims.emplace_back(t->layout);
      auto noise = std::make_shared<PrepNoise>(PrepNoise::from_angles(t->layout, 0.1 * std::numbers::pi, 0.0));
      t->trial = [&sim, &dec = t->decoder, noise, seed](std::uint64_t i) {
        PhiloxStream rng(seed, i);
        const PrepTrial tr = sim.run_trial(dec, *noise, rng);
        return std::make_pair(tr.peak_modes, tr.entry_updates);
      };
    }
    BenchPoint p;
    p.distance = d;
    p.qubits = t->layout.num_qubits();
    p.seconds_per_trial = std::numeric_limits<double>::infinity();
    p.peak_modes = t->trial(0).first;  // untimed warmup
    report.points.push_back(p);
    targets.push_back(std::move(t));
  }
  std::vector<std::uint64_t> next(targets.size(), 1);
  std::vector<double> work(targets.size(), 0.0);
  for (int round = 0; round < kRounds; ++round) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
      BenchPoint& p = report.points[k];
      std::size_t done = 0;
      double secs = 0.0;
      const auto start = std::chrono::steady_clock::now();
      while (done < per_round || secs < kMinRoundSeconds) {
        const auto [peak, updates] = targets[k]->trial(next[k]++);
        p.peak_modes = std::max(p.peak_modes, peak);
        work[k] += static_cast<double>(updates);
        ++done;
        secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
      p.seconds_per_trial = std::min(p.seconds_per_trial, secs / static_cast<double>(done));
    }
  }
  std::vector<double> n, t, w;
  for (std::size_t k = 0; k < report.points.size(); ++k) {
    BenchPoint& p = report.points[k];
    p.entry_updates_per_trial = work[k] / static_cast<double>(next[k] - 1);
    n.push_back(p.qubits);
    t.push_back(p.seconds_per_trial);
    w.push_back(p.entry_updates_per_trial);
  }
  if (report.points.size() >= 2) {
    report.scaling_exponent = fit_power_law(n, t);
    report.work_exponent = fit_power_law(n, w);
  }
  return report;
}

nlohmann::json bench_to_json(const BenchReport& report) {
  nlohmann::json j;
  j["protocol"] = report.protocol;
  j["points"] = nlohmann::json::array();
  for (const auto& p : report.points) {
    j["points"].push_back({{"distance", p.distance},
                           {"qubits", p.qubits},
                           {"seconds_per_trial", p.seconds_per_trial},
                           {"peak_active_modes", p.peak_modes},
                           {"entry_updates_per_trial", p.entry_updates_per_trial}});
  }
  if (report.points.size() >= 2) {
    j["scaling_exponent"] = report.scaling_exponent;
    j["work_exponent"] = report.work_exponent;
  }
  return j;
}

}  // namespace flosurf
