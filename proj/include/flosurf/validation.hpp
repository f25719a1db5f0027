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


#ifndef FLOSURF_VALIDATION_HPP
#define FLOSURF_VALIDATION_HPP

#include <cstdint>

#include <json.hpp>

#include "flosurf/code_layout.hpp"

namespace flosurf {

/// Random rotate / measure sequences replayed on the covariance engine and
/// on the dense Majorana oracle.
struct EngineCheck {
  int sequences = 0;
  int operations = 0;
  int measurements = 0;
  double max_probability_error = 0.0;
  double max_covariance_error = 0.0;
  double max_wick_error = 0.0;
  double max_purity_defect = 0.0;
  bool pass(double tol = 1e-9) const;
};

/// Sequences use 2 to 8 modes and 1 to 12 operations each.
EngineCheck run_engine_check(int sequences, std::uint64_t seed);

/// Storage pipeline against dense enumeration on random angle vectors.
struct StorageCheck {
  int angle_vectors = 0;
  std::size_t samples_per_vector = 0;
  double max_tv = 0.0;
  double max_angle_error = 0.0;  // mod pi
  double max_trig_defect = 0.0;
  double input_probability_defect = 0.0;
  double input_angle_defect = 0.0;
  double max_codespace_defect = 0.0;
  double max_z_face_probability = 0.0;
  double max_oracle_consistency = 0.0;
  bool pass(double tv_tol = 0.01, double angle_tol = 1e-7) const;
};

StorageCheck run_storage_check(const CodeLayout& layout, int angle_vectors, std::size_t samples,
                               std::uint64_t seed, int threads);

/// Preparation pipeline against dense enumeration on random product states.
struct PrepCheck {
  int inputs = 0;
  std::size_t samples_per_input = 0;
  double max_tv = 0.0;
  double max_bloch_error = 0.0;
  double max_norm_defect = 0.0;
  std::size_t unmatched_syndromes = 0;
  bool pass(double tv_tol = 0.01, double bloch_tol = 1e-7, double norm_tol = 1e-6) const;
};

PrepCheck run_prep_check(const CodeLayout& layout, int inputs, std::size_t samples, std::uint64_t seed,
                         int threads);

nlohmann::json to_json(const EngineCheck& c);
nlohmann::json to_json(const StorageCheck& c);
nlohmann::json to_json(const PrepCheck& c);

}  // namespace flosurf

#endif  // FLOSURF_VALIDATION_HPP
