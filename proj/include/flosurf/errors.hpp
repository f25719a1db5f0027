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

#ifndef FLOSURF_ERRORS_HPP
#define FLOSURF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flosurf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FLOSURF_DEFINE_ERROR(Name)                               \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// Gaussian engine.
FLOSURF_DEFINE_ERROR(DuplicateMode);
FLOSURF_DEFINE_ERROR(UnmatchedMode);
FLOSURF_DEFINE_ERROR(NotNormalized);
FLOSURF_DEFINE_ERROR(LabelCollision);
FLOSURF_DEFINE_ERROR(UnknownMode);
FLOSURF_DEFINE_ERROR(ImpossibleOutcome);
FLOSURF_DEFINE_ERROR(OddSubset);
FLOSURF_DEFINE_ERROR(NotDecoupled);

// Layout and decoding.
FLOSURF_DEFINE_ERROR(InvalidDistance);
FLOSURF_DEFINE_ERROR(UnknownVertex);

// Simulation and statistics.
FLOSURF_DEFINE_ERROR(DegenerateWeights);
FLOSURF_DEFINE_ERROR(EmptySample);
FLOSURF_DEFINE_ERROR(NotEnoughCurves);

// Harness.
FLOSURF_DEFINE_ERROR(InvalidConfig);
FLOSURF_DEFINE_ERROR(IoError);

#undef FLOSURF_DEFINE_ERROR

}  // namespace flosurf

#endif  // FLOSURF_ERRORS_HPP
