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


// Command-line driver. Exit codes: 0 ok, 1 acceptance failure, 2 config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "flosurf/code_layout.hpp"
#include "flosurf/errors.hpp"
#include "flosurf/experiment.hpp"
#include "flosurf/layout_json.hpp"
#include "flosurf/validation.hpp"

namespace {

using namespace flosurf;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Common {
  int distance = 3;
  std::size_t trials = 50000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string decoder;
  std::string out;
  std::string summary;
  std::string dump_layout;
};

void add_common(CLI::App* app, Common& c, std::size_t default_trials, bool decoder = true) {
  c.trials = default_trials;
  app->add_option("--distance,-d", c.distance, "odd code distance >= 3")->capture_default_str();
  app->add_option("--trials,-n", c.trials, "number of trials")->capture_default_str();
  app->add_option("--seed,-s", c.seed, "base seed; trial i uses stream (seed, i)")->capture_default_str();
  app->add_option("--threads,-j", c.threads, "worker threads")->capture_default_str();
  if (decoder) app->add_option("--decoder", c.decoder, "mwpm or peel");
  app->add_option("--dump-layout", c.dump_layout, "write the layout JSON to this path");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  return f;
}

void emit_json(const nlohmann::json& j, const std::string& path) {
  std::cout << j.dump(2) << '\n';
  if (!path.empty()) open_out(path) << j.dump(2) << '\n';
}

void maybe_dump_layout(const Common& c, const CodeLayout& layout) {
  if (c.dump_layout.empty()) return;
  open_out(c.dump_layout) << layout_to_json(layout).dump(2) << '\n';
}

ExperimentConfig base_config(Mode mode, const Common& c, DecoderKind fallback) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.distance = c.distance;
  cfg.trials = c.trials;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  cfg.output = c.out;
  cfg.decoder = c.decoder.empty() ? fallback : parse_decoder_kind(c.decoder);
  validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface-code error correction under coherent noise, simulated with fermionic Gaussian states"};
  app.require_subcommand(1);

  // storage
  Common st;
  std::string st_theta = "0";
  std::string st_angles;
  auto* storage = app.add_subcommand("storage", "memory experiment under Z rotations");
  add_common(storage, st, 50000);
  storage->add_option("--theta,-t", st_theta, "rotation angle, radians or e.g. 0.08pi")->capture_default_str();
  storage->add_option("--angles-file", st_angles, "one angle per qubit, overrides --theta");
  storage->add_option("--out,-o", st.out, "per-trial CSV");
  storage->add_option("--summary", st.summary, "also write the summary JSON here");

  // prep
  Common pr;
  std::string pr_theta = "0", pr_phi = "0";
  auto* prep = app.add_subcommand("prep", "logical |+> preparation from a noisy product state");
  add_common(prep, pr, 50000);
  prep->add_option("--theta,-t", pr_theta, "Z angle")->capture_default_str();
  prep->add_option("--phi,-p", pr_phi, "X angle")->capture_default_str();
  prep->add_option("--out,-o", pr.out, "per-trial CSV");
  prep->add_option("--summary", pr.summary, "also write the summary JSON here");

  // prep-sweep
  Common sw;
  std::string sw_theta = "0:0.25pi:0.025pi", sw_phi = "0:0.25pi:0.025pi";
  auto* sweep = app.add_subcommand("prep-sweep", "P^L heat map over (theta, phi)");
  add_common(sweep, sw, 5000);
  sweep->add_option("--theta-grid", sw_theta, "list a,b,c or start:stop:step")->capture_default_str();
  sweep->add_option("--phi-grid", sw_phi, "list a,b,c or start:stop:step")->capture_default_str();
  sweep->add_option("--out,-o", sw.out, "heat-map CSV");

  // twirl
  Common tw;
  double tw_eps = 0.1;
  auto* twirl = app.add_subcommand("twirl", "iid Z errors with probability epsilon");
  add_common(twirl, tw, 50000);
  twirl->add_option("--epsilon,-e", tw_eps, "flip probability")->capture_default_str();
  twirl->add_option("--summary", tw.summary, "also write the summary JSON here");

  // threshold
  Common th;
  std::string th_protocol = "storage", th_distances = "5,9,13", th_grid = "0.06pi:0.12pi:0.01pi", th_phi = "0";
  int th_boot = 1000;
  auto* threshold = app.add_subcommand("threshold", "P^L curves and their crossings");
  add_common(threshold, th, 50000);
  threshold->add_option("--protocol", th_protocol, "storage, prep or twirl")->capture_default_str();
  threshold->add_option("--distances", th_distances, "comma-separated distances")->capture_default_str();
  threshold->add_option("--grid", th_grid, "theta grid (epsilon for twirl)")->capture_default_str();
  threshold->add_option("--phi", th_phi, "prep X angle")->capture_default_str();
  threshold->add_option("--bootstrap", th_boot, "bootstrap replicas")->capture_default_str();
  threshold->add_option("--out,-o", th.out, "curves CSV");
  threshold->add_option("--summary", th.summary, "also write the report JSON here");

  // oracle-check
  Common oc;
  std::string oc_suite = "engine", oc_layout;
  int oc_cases = 0;
  std::size_t oc_samples = 0;
  bool oc_allow_large = false;
  auto* oracle = app.add_subcommand("oracle-check", "compare against dense brute force");
  add_common(oracle, oc, 0, false);
  oracle->add_option("--suite", oc_suite, "engine, storage or prep")->capture_default_str();
  oracle->add_option("--cases", oc_cases, "sequences / angle vectors / product inputs (0: suite default)");
  oracle->add_option("--samples", oc_samples, "Monte Carlo samples per case (0: suite default)");
  oracle->add_option("--layout", oc_layout, "read the layout from a JSON dump");
  oracle->add_flag("--allow-d5", oc_allow_large, "permit d = 5 (2^25 amplitudes, slow)");
  oracle->add_option("--summary", oc.summary, "also write the report JSON here");
  oracle->remove_option(oracle->get_option("--trials"));

  // bench
  Common be;
  std::string be_mode = "storage", be_distances;
  auto* benchcmd = app.add_subcommand("bench", "per-trial wall time and scaling");
  add_common(benchcmd, be, 5, false);
  benchcmd->add_option("--mode", be_mode, "storage or prep")->capture_default_str();
  benchcmd->add_option("--distances", be_distances, "comma-separated; overrides --distance");
  benchcmd->add_option("--summary", be.summary, "also write the report JSON here");

  // layout
  Common ly;
  auto* layoutcmd = app.add_subcommand("layout", "print the layout JSON");
  layoutcmd->add_option("--distance,-d", ly.distance, "odd code distance >= 3")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*storage) {
      ExperimentConfig cfg = base_config(Mode::Storage, st, DecoderKind::Mwpm);
      cfg.theta = parse_angle(st_theta);
      const CodeLayout layout = CodeLayout::build(cfg.distance);
      maybe_dump_layout(st, layout);
      StorageNoise noise = StorageNoise::uniform(layout, cfg.theta);
      if (!st_angles.empty()) {
        cfg.angles_file = st_angles;
        noise.eta = read_angles_file(st_angles, static_cast<std::size_t>(layout.num_qubits()));
      }
      const auto records = run_storage(layout, noise, cfg.trials, cfg.seed, cfg.threads, cfg.decoder);
      if (!st.out.empty()) {
        auto f = open_out(st.out);
        write_storage_csv(f, records);
      }
      emit_json(storage_summary(cfg, records), st.summary);
      return 0;
    }
    if (*prep) {
      ExperimentConfig cfg = base_config(Mode::Prep, pr, DecoderKind::Peel);
      cfg.theta = parse_angle(pr_theta);
      cfg.phi = parse_angle(pr_phi);
      const CodeLayout layout = CodeLayout::build(cfg.distance);
      maybe_dump_layout(pr, layout);
      const auto records =
          run_prep(layout, PrepNoise::from_angles(layout, cfg.theta, cfg.phi), cfg.trials, cfg.seed, cfg.threads,
                   cfg.decoder);
      if (!pr.out.empty()) {
        auto f = open_out(pr.out);
        write_prep_csv(f, records);
      }
      emit_json(prep_summary(cfg, records), pr.summary);
      return 0;
    }
    if (*sweep) {
      const ExperimentConfig cfg = base_config(Mode::PrepSweep, sw, DecoderKind::Peel);
      const CodeLayout layout = CodeLayout::build(cfg.distance);
      maybe_dump_layout(sw, layout);
      const auto points = prep_sweep(layout, parse_angle_grid(sw_theta), parse_angle_grid(sw_phi), cfg.trials,
                                     cfg.seed, cfg.threads, cfg.decoder);
      if (!sw.out.empty()) {
        auto f = open_out(sw.out);
        write_sweep_csv(f, points);
      } else {
        write_sweep_csv(std::cout, points);
      }
      return 0;
    }
    if (*twirl) {
      const ExperimentConfig cfg = base_config(Mode::Twirl, tw, DecoderKind::Mwpm);
      if (!(tw_eps >= 0.0 && tw_eps <= 1.0)) throw InvalidConfig("epsilon must lie in [0, 1]");
      const CodeLayout layout = CodeLayout::build(cfg.distance);
      maybe_dump_layout(tw, layout);
      const auto f = proportion(run_twirl(layout, tw_eps, cfg.trials, cfg.seed, cfg.threads, cfg.decoder), cfg.trials);
      nlohmann::json j;
      j["config"] = config_to_json(cfg);
      j["epsilon"] = tw_eps;
      j["failure_rate"] = {{"value", f.mean}, {"se", f.se}};
      j["P_L_twirl"] = {{"value", 2.0 * f.mean}, {"se", 2.0 * f.se}};
      emit_json(j, tw.summary);
      return 0;
    }
    if (*threshold) {
      const ExperimentConfig cfg = base_config(Mode::Threshold, th, DecoderKind::Mwpm);
      ScanKind kind;
      if (th_protocol == "storage") kind = ScanKind::Storage;
      else if (th_protocol == "prep") kind = ScanKind::Prep;
      else if (th_protocol == "twirl") kind = ScanKind::Twirl;
      else throw InvalidConfig("protocol must be storage, prep or twirl");
      const std::vector<int> distances = parse_distances(th_distances);
      if (distances.size() < 2) throw NotEnoughCurves("threshold scan needs at least two distances");
      // Plain numbers are taken as-is, so twirl grids read as probabilities.
      const std::vector<double> grid = parse_angle_grid(th_grid);
      const auto curves =
          scan_curves(kind, distances, grid, cfg.trials, cfg.seed, cfg.threads, parse_angle(th_phi), cfg.decoder);
      if (!th.out.empty()) {
        auto f = open_out(th.out);
        write_curves_csv(f, grid, curves);
      }
      const double unit = kind == ScanKind::Twirl ? 1.0 : std::numbers::pi;
      nlohmann::json j = threshold_to_json(threshold_scan(grid, curves, th_boot, cfg.seed), unit);
      j["protocol"] = th_protocol;
      j["grid_unit"] = kind == ScanKind::Twirl ? "epsilon" : "pi";
      j["config"] = config_to_json(cfg);
      emit_json(j, th.summary);
      return 0;
    }
    if (*oracle) {
      if (oc.distance != 3 && !(oc.distance == 5 && oc_allow_large)) {
        throw InvalidConfig("oracle-check supports distance 3 (5 with --allow-d5)");
      }
      CodeLayout layout = CodeLayout::build(oc.distance);
      if (!oc_layout.empty()) {
        std::ifstream in(oc_layout);
        if (!in) throw IoError("cannot open " + oc_layout);
        layout = layout_from_json(nlohmann::json::parse(in));
      }
      maybe_dump_layout(oc, layout);
      nlohmann::json j;
      bool ok = false;
      if (oc_suite == "engine") {
        const EngineCheck c = run_engine_check(oc_cases > 0 ? oc_cases : 1000, oc.seed);
        j = to_json(c);
        ok = c.pass();
      } else if (oc_suite == "storage") {
        const StorageCheck c = run_storage_check(layout, oc_cases > 0 ? oc_cases : 20,
                                                 oc_samples > 0 ? oc_samples : 100000, oc.seed, oc.threads);
        j = to_json(c);
        ok = c.pass();
      } else if (oc_suite == "prep") {
        const PrepCheck c = run_prep_check(layout, oc_cases > 0 ? oc_cases : 5,
                                           oc_samples > 0 ? oc_samples : 1000000, oc.seed, oc.threads);
        j = to_json(c);
        ok = c.pass();
      } else {
        throw InvalidConfig("suite must be engine, storage or prep");
      }
      j["distance"] = layout.distance();
      j["seed"] = oc.seed;
      emit_json(j, oc.summary);
      return ok ? 0 : kExitFailure;
    }
    if (*benchcmd) {
      const std::vector<int> distances =
          be_distances.empty() ? std::vector<int>{be.distance} : parse_distances(be_distances);
      for (int d : distances) {
        if (d < 3 || d % 2 == 0) throw InvalidConfig("distance must be odd and at least 3");
      }
      emit_json(bench_to_json(bench(be_mode, distances, be.trials, be.seed)), be.summary);
      return 0;
    }
    if (*layoutcmd) {
      std::cout << layout_to_json(CodeLayout::build(ly.distance)).dump(2) << '\n';
      return 0;
    }
  } catch (const InvalidConfig& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidDistance& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const NotEnoughCurves& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed JSON: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
