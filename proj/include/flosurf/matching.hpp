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


#ifndef FLOSURF_MATCHING_HPP
#define FLOSURF_MATCHING_HPP

#include <span>
#include <vector>

namespace flosurf {

struct WeightedEdge {
  int i = 0;
  int j = 0;
  long long weight = 0;
};

/// Maximum-weight matching on a general graph by the primal-dual blossom
/// method, O(V^3). Integer weights keep all dual variables exact. With
/// max_cardinality set, returns a maximum-weight matching among those of
/// maximum cardinality. Result: mate[v], or -1 if v is unmatched.
std::vector<int> max_weight_matching(int num_vertices, std::span<const WeightedEdge> edges,
                                     bool max_cardinality);

}  // namespace flosurf

#endif  // FLOSURF_MATCHING_HPP
