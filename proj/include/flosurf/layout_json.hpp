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


#ifndef FLOSURF_LAYOUT_JSON_HPP
#define FLOSURF_LAYOUT_JSON_HPP

#include <json.hpp>

#include "flosurf/code_layout.hpp"

namespace flosurf {

/// Full geometry dump: vertices, oriented edges, faces with boundary
/// cycles, clusters, logical faces and boundary chains.
nlohmann::json layout_to_json(const CodeLayout& layout);

/// Inverse of layout_to_json. Throws InvalidDistance on inconsistent input.
CodeLayout layout_from_json(const nlohmann::json& doc);

}  // namespace flosurf

#endif  // FLOSURF_LAYOUT_JSON_HPP
