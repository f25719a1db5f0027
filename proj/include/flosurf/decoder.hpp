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


#ifndef FLOSURF_DECODER_HPP
#define FLOSURF_DECODER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flosurf/code_layout.hpp"

namespace flosurf {

/// Pauli correction X(x_support) Z(z_support) with its commutation signs
/// against the logical operators: C P = lambda P C.
struct Correction {
  std::vector<std::uint8_t> z_support;
  std::vector<std::uint8_t> x_support;
  int lambda_x = 1;
  int lambda_y = 1;
  int lambda_z = 1;
};

enum class DecoderKind : std::uint8_t { Mwpm, Peel };

DecoderKind parse_decoder_kind(const std::string& name);
std::string to_string(DecoderKind kind);

struct LogicalSigns {
  int x = 1;
  int y = 1;
  int z = 1;
};

LogicalSigns commutation_signs(const CodeLayout& layout, const Correction& correction);

/// Recomputes the lambda fields from the supports.
void refresh_signs(const CodeLayout& layout, Correction& correction);

/// Absorbs Z_L when bx < 0; bx == 0 keeps the correction.
Correction fix_sign(const CodeLayout& layout, Correction correction, double bx);

/// Syndrome of the correction on every face: X-faces see z_support,
/// Z-faces see x_support.
std::vector<int> correction_syndrome(const CodeLayout& layout, const Correction& correction);

/// Shortest-path decoders on the two face graphs of a layout.
///
/// Graph of type t: nodes are faces of type t, one node per face in
/// faces_of_type(t) order, plus a virtual boundary. Vertex u joins the
/// faces of type t that contain it, or joins its single face to the
/// boundary. Flipping the opposite Pauli on u toggles both ends.
class Decoder {
 public:
  explicit Decoder(const CodeLayout& layout);

  const CodeLayout& layout() const { return layout_; }

  /// Minimum-weight Z correction for an X-face syndrome (+-1 per X-face).
  Correction mwpm_decode(std::span<const int> x_syndrome) const;

  /// Storage decoding with either matcher or peeling.
  Correction decode_x_syndrome(std::span<const int> x_syndrome, DecoderKind kind) const;

  /// Any correction reproducing an all-face syndrome (+-1 per face).
  Correction prep_correction(std::span<const int> syndrome,
                             DecoderKind kind = DecoderKind::Peel) const;

  /// Vertices flipped by a minimum-weight matching of the defect nodes.
  std::vector<std::uint8_t> match(PauliType t, std::span<const int> defects) const;
  /// Vertices flipped by joining each defect node to the boundary.
  std::vector<std::uint8_t> peel(PauliType t, std::span<const int> defects) const;

  int node_count(PauliType t) const { return graph(t).nodes; }
  int distance(PauliType t, int a, int b) const;
  int boundary_distance(PauliType t, int a) const;

 private:
  struct Graph {
    int nodes = 0;
    // adjacency of node x: (neighbour node or -1 for boundary, vertex)
    std::vector<std::vector<std::pair<int, int>>> adj;
    std::vector<std::uint16_t> dist;  // nodes x nodes
    std::vector<std::uint16_t> bdist;
  };

  const Graph& graph(PauliType t) const { return t == PauliType::X ? graphs_[0] : graphs_[1]; }
  Graph build_graph(PauliType t) const;
  void toggle_path(const Graph& g, int from, int to, std::vector<std::uint8_t>& support) const;
  void toggle_boundary_path(const Graph& g, int from, std::vector<std::uint8_t>& support) const;

  CodeLayout layout_;
  Graph graphs_[2];
};

}  // namespace flosurf

#endif  // FLOSURF_DECODER_HPP
