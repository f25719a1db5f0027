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


#ifndef FLOSURF_CODE_LAYOUT_HPP
#define FLOSURF_CODE_LAYOUT_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flosurf/gaussian_state.hpp"

namespace flosurf {

enum class PauliType : std::uint8_t { X, Z };

enum class EdgeKind : std::uint8_t {
  Horizontal,
  Vertical,
  TopOuter,
  BottomOuter,
  LeftOuter,
  RightOuter,
};

/// Pair operators inside one cluster: X = i c1 c2, Z = i c2 c3,
/// XS = i c3 c4, ZS = i c1 c4 (cluster positions 1..4).
enum class ClusterOp : std::uint8_t { X, Z, XS, ZS };

enum class ScheduleFlavor : std::uint8_t { LinksByColumn, VerticesByColumn };

struct Vertex {
  int row = 0;
  int col = 0;
};

/// Mode ids are global; mode_u sits at vertex u, mode_v at vertex v.
/// The link operator is i c_tail c_head.
struct Edge {
  int u = 0;
  int v = 0;
  EdgeKind kind = EdgeKind::Horizontal;
  int mode_u = 0;
  int mode_v = 0;
  int tail = 0;
  int head = 0;
};

/// boundary lists the face's modes in clockwise order, starting with the
/// tail-or-head pair of a link, so positions (2i, 2i+1) are links and
/// (2i+1, 2i+2) are vertex pairs. Logical faces close the cycle with a
/// virtual link between two corner modes.
struct Face {
  PauliType type = PauliType::X;
  std::vector<int> vertices;
  std::vector<int> edges;
  std::vector<int> boundary;
};

enum class LogicalFace : std::uint8_t { Top, Bottom, Left, Right };

struct ScheduleStep {
  /// Edge id for LinksByColumn, vertex id for VerticesByColumn.
  int target = 0;
  /// Vertices whose clusters load here (LinksByColumn) or modes whose
  /// initial pair loads here (VerticesByColumn).
  std::vector<int> attach;
  std::vector<ModePair> detach;
};

struct OrientationReport {
  std::vector<int> failing_faces;
  std::vector<LogicalFace> failing_logical;
  bool ok() const { return failing_faces.empty() && failing_logical.empty(); }
  std::string describe() const;
};

/// Rotated distance-d surface code with its Majorana mode layout.
///
/// Vertex (row, col) has id col * d + row. Corner modes are 1..4:
/// 1 bottom-left, 2 top-left, 3 top-right, 4 bottom-right. Edge e carries
/// modes 5 + 2e (at u) and 6 + 2e (at v). Z_L acts on the top row and X_L
/// on the left column.
class CodeLayout {
 public:
  static CodeLayout build(int d);

  int distance() const { return d_; }
  int num_qubits() const { return d_ * d_; }
  int num_modes() const { return 4 * d_ * d_; }
  int vertex_id(int row, int col) const { return col * d_ + row; }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<std::array<int, 4>>& clusters() const { return clusters_; }
  const std::array<int, 4>& cluster(int u) const;
  static constexpr std::array<int, 4> corners() { return {1, 2, 3, 4}; }

  const std::vector<int>& left_edges() const { return left_edges_; }
  const std::vector<int>& top_edges() const { return top_edges_; }
  const std::vector<int>& logical_z_support() const { return logical_z_; }
  const std::vector<int>& logical_x_support() const { return logical_x_; }

  /// Face ids of one type in increasing order.
  const std::vector<int>& faces_of_type(PauliType t) const {
    return t == PauliType::X ? x_faces_ : z_faces_;
  }
  /// Faces of type t containing vertex u (one or two).
  const std::vector<int>& faces_at_vertex(int u, PauliType t) const {
    return t == PauliType::X ? x_faces_at_[u] : z_faces_at_[u];
  }
  /// Faces whose boundary contains edge e (one or two).
  const std::vector<int>& faces_at_edge(int e) const { return faces_at_edge_[e]; }

  const Face& logical_face(LogicalFace which) const;

  int mode_vertex(int mode) const { return mode_vertex_[mode]; }
  /// Position 0..3 of the mode inside its vertex cluster.
  int mode_slot(int mode) const { return mode_slot_[mode]; }
  /// Edge carrying the mode, or -1 for corner modes.
  int mode_edge(int mode) const { return mode_edge_[mode]; }

  /// Copy with the orientation of edge e reversed (diagnostics only).
  CodeLayout with_flipped_edge(int e) const;

  /// Builds a layout from explicit geometry and rebuilds derived tables.
  static CodeLayout from_parts(int d, std::vector<Vertex> vertices, std::vector<Edge> edges,
                               std::vector<Face> faces, std::vector<std::array<int, 4>> clusters,
                               std::vector<Face> logical_faces, std::vector<int> left_edges,
                               std::vector<int> top_edges);

 private:
  void index();

  int d_ = 0;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 4>> clusters_;
  std::vector<Face> logical_faces_;  // Top, Bottom, Left, Right
  std::vector<int> left_edges_;
  std::vector<int> top_edges_;

  std::vector<int> logical_z_;
  std::vector<int> logical_x_;
  std::vector<int> x_faces_;
  std::vector<int> z_faces_;
  std::vector<std::vector<int>> x_faces_at_;
  std::vector<std::vector<int>> z_faces_at_;
  std::vector<std::vector<int>> faces_at_edge_;
  std::vector<int> mode_vertex_;
  std::vector<int> mode_slot_;
  std::vector<int> mode_edge_;
};

/// Pair operator for slots (i, j) of a cluster, or throws if the slots do
/// not form one of the four cluster operators.
ClusterOp cluster_op_for_slots(int i, int j);

/// Checks that every real and logical face has an odd number of clockwise
/// arrows on its boundary cycle.
OrientationReport check_orientations(const CodeLayout& layout);

/// s_f = prod of m_e over the boundary of f, for every face.
std::vector<int> face_syndromes(const CodeLayout& layout, std::span<const int> m);

/// s_f = prod of m_u over the vertices of each X-face, in faces_of_type(X) order.
std::vector<int> x_face_syndromes_from_vertex_outcomes(const CodeLayout& layout,
                                                        std::span<const int> m);

ModePair encoding_pairs(const CodeLayout& layout, int u, ClusterOp op);

std::vector<ScheduleStep> measurement_schedule(const CodeLayout& layout, ScheduleFlavor flavor);

/// Peak number of simultaneously active modes when the schedule runs on
/// the edge-link pairing (LinksByColumn) or the X-basis storage pairing.
int schedule_peak_modes(const CodeLayout& layout, ScheduleFlavor flavor);

}  // namespace flosurf

#endif  // FLOSURF_CODE_LAYOUT_HPP
