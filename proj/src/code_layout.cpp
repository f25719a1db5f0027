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


#include "flosurf/code_layout.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "flosurf/errors.hpp"

namespace flosurf {

namespace {

enum Slot { kUp = 0, kRight = 1, kDown = 2, kLeft = 3 };

int mode_at(const Edge& e, int vertex) { return e.u == vertex ? e.mode_u : e.mode_v; }

// Tail slot of each cluster operator.
int tail_slot(ClusterOp op) {
  switch (op) {
    case ClusterOp::X: return 0;
    case ClusterOp::Z: return 1;
    case ClusterOp::XS: return 2;
    case ClusterOp::ZS: return 0;
  }
  return 0;
}

}  // namespace

ClusterOp cluster_op_for_slots(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return ClusterOp::X;
  if (i == 1 && j == 2) return ClusterOp::Z;
  if (i == 2 && j == 3) return ClusterOp::XS;
  if (i == 0 && j == 3) return ClusterOp::ZS;
  throw std::logic_error("cluster slots " + std::to_string(i) + "," + std::to_string(j) +
                         " do not form a pair operator");
}

const std::array<int, 4>& CodeLayout::cluster(int u) const {
  if (u < 0 || u >= num_qubits()) throw UnknownVertex("vertex " + std::to_string(u));
  return clusters_[u];
}

const Face& CodeLayout::logical_face(LogicalFace which) const {
  return logical_faces_[static_cast<int>(which)];
}

CodeLayout CodeLayout::build(int d) {
  if (d < 3 || d % 2 == 0) throw InvalidDistance("distance must be odd and at least 3, got " +
                                                 std::to_string(d));
  const int n = d * d;
  auto vid = [d](int r, int c) { return c * d + r; };

  std::vector<Vertex> vertices(n);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) vertices[vid(r, c)] = {r, c};
  }

  std::vector<Edge> edges;
  edges.reserve(2 * n - 2);
  auto add_edge = [&](int u, int v, EdgeKind kind, bool tail_at_u) {
    const int e = static_cast<int>(edges.size());
    Edge edge{u, v, kind, 5 + 2 * e, 6 + 2 * e, 0, 0};
    edge.tail = tail_at_u ? edge.mode_u : edge.mode_v;
    edge.head = tail_at_u ? edge.mode_v : edge.mode_u;
    edges.push_back(edge);
    return e;
  };

  // Orientation rule: horizontal links point left except in column 0;
  // vertical links point down on odd sublattice rows; outer boundary links
  // close each digon with the parity the faces require.
  std::vector<std::vector<int>> h_id(d, std::vector<int>(d - 1, -1));
  std::vector<std::vector<int>> v_id(d - 1, std::vector<int>(d, -1));
  std::vector<int> top_id(d - 1, -1), bottom_id(d - 1, -1), left_id(d - 1, -1), right_id(d - 1, -1);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c + 1 < d; ++c) h_id[r][c] = add_edge(vid(r, c), vid(r, c + 1), EdgeKind::Horizontal, c == 0);
  }
  for (int r = 0; r + 1 < d; ++r) {
    for (int c = 0; c < d; ++c) {
      v_id[r][c] = add_edge(vid(r, c), vid(r + 1, c), EdgeKind::Vertical, (r + c) % 2 == 1);
    }
  }
  for (int c = 0; c + 1 < d; c += 2) top_id[c] = add_edge(vid(0, c), vid(0, c + 1), EdgeKind::TopOuter, c == 0);
  for (int c = 1; c + 1 < d; c += 2) {
    bottom_id[c] = add_edge(vid(d - 1, c), vid(d - 1, c + 1), EdgeKind::BottomOuter, false);
  }
  for (int r = 1; r + 1 < d; r += 2) left_id[r] = add_edge(vid(r, 0), vid(r + 1, 0), EdgeKind::LeftOuter, false);
  for (int r = 0; r + 1 < d; r += 2) {
    right_id[r] = add_edge(vid(r, d - 1), vid(r + 1, d - 1), EdgeKind::RightOuter, true);
  }

  std::vector<std::array<int, 4>> clusters(n);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) {
      const int u = vid(r, c);
      std::array<int, 4> slot{};
      if (r > 0) {
        slot[kUp] = mode_at(edges[v_id[r - 1][c]], u);
      } else if (c == d - 1) {
        slot[kUp] = 3;
      } else {
        slot[kUp] = mode_at(edges[top_id[c - c % 2]], u);
      }
      if (r + 1 < d) {
        slot[kDown] = mode_at(edges[v_id[r][c]], u);
      } else if (c == 0) {
        slot[kDown] = 1;
      } else {
        slot[kDown] = mode_at(edges[bottom_id[c % 2 == 1 ? c : c - 1]], u);
      }
      if (c > 0) {
        slot[kLeft] = mode_at(edges[h_id[r][c - 1]], u);
      } else if (r == 0) {
        slot[kLeft] = 2;
      } else {
        slot[kLeft] = mode_at(edges[left_id[r % 2 == 1 ? r : r - 1]], u);
      }
      if (c + 1 < d) {
        slot[kRight] = mode_at(edges[h_id[r][c]], u);
      } else if (r == d - 1) {
        slot[kRight] = 4;
      } else {
        slot[kRight] = mode_at(edges[right_id[r - r % 2]], u);
      }
      // Clockwise from Up on the even sublattice, from Right on the odd one.
      clusters[u] = (r + c) % 2 == 0
                        ? std::array<int, 4>{slot[kUp], slot[kRight], slot[kDown], slot[kLeft]}
                        : std::array<int, 4>{slot[kRight], slot[kDown], slot[kLeft], slot[kUp]};
    }
  }

  auto at = [&](int e, int r, int c) { return mode_at(edges[e], vid(r, c)); };
  std::vector<Face> faces;
  for (int i = 0; i + 1 < d; ++i) {
    for (int j = 0; j + 1 < d; ++j) {
      const int top = h_id[i][j], right = v_id[i][j + 1], bottom = h_id[i + 1][j], left = v_id[i][j];
      Face f;
      f.type = (i + j) % 2 == 0 ? PauliType::Z : PauliType::X;
      f.vertices = {vid(i, j), vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j)};
      f.edges = {top, right, bottom, left};
      f.boundary = {at(top, i, j),         at(top, i, j + 1),     at(right, i, j + 1),
                    at(right, i + 1, j + 1), at(bottom, i + 1, j + 1), at(bottom, i + 1, j),
                    at(left, i + 1, j),    at(left, i, j)};
      faces.push_back(std::move(f));
    }
  }
  for (int c = 0; c + 1 < d; c += 2) {
    const int outer = top_id[c], inner = h_id[0][c];
    faces.push_back({PauliType::X, {vid(0, c), vid(0, c + 1)}, {outer, inner},
                     {at(outer, 0, c), at(outer, 0, c + 1), at(inner, 0, c + 1), at(inner, 0, c)}});
  }
  for (int c = 1; c + 1 < d; c += 2) {
    const int outer = bottom_id[c], inner = h_id[d - 1][c];
    faces.push_back({PauliType::X, {vid(d - 1, c), vid(d - 1, c + 1)}, {inner, outer},
                     {at(inner, d - 1, c), at(inner, d - 1, c + 1), at(outer, d - 1, c + 1),
                      at(outer, d - 1, c)}});
  }
  for (int r = 1; r + 1 < d; r += 2) {
    const int outer = left_id[r], inner = v_id[r][0];
    faces.push_back({PauliType::Z, {vid(r, 0), vid(r + 1, 0)}, {outer, inner},
                     {at(outer, r + 1, 0), at(outer, r, 0), at(inner, r, 0), at(inner, r + 1, 0)}});
  }
  for (int r = 0; r + 1 < d; r += 2) {
    const int outer = right_id[r], inner = v_id[r][d - 1];
    faces.push_back({PauliType::Z, {vid(r, d - 1), vid(r + 1, d - 1)}, {inner, outer},
                     {at(inner, r + 1, d - 1), at(inner, r, d - 1), at(outer, r, d - 1),
                      at(outer, r + 1, d - 1)}});
  }

  // Outer boundary chains; each logical face is closed by a virtual corner link.
  std::vector<int> top_chain(d - 1), bottom_chain(d - 1), left_chain(d - 1), right_chain(d - 1);
  for (int k = 0; k + 1 < d; ++k) {
    top_chain[k] = k % 2 == 0 ? top_id[k] : h_id[0][k];
    bottom_chain[k] = k % 2 == 1 ? bottom_id[k] : h_id[d - 1][k];
    left_chain[k] = k % 2 == 1 ? left_id[k] : v_id[k][0];
    right_chain[k] = k % 2 == 0 ? right_id[k] : v_id[k][d - 1];
  }
  std::vector<Face> logical(4);
  {
    Face& f = logical[static_cast<int>(LogicalFace::Top)];
    f.type = PauliType::Z;
    f.boundary = {2, 3};
    for (int c = d - 2; c >= 0; --c) {
      f.boundary.push_back(at(top_chain[c], 0, c + 1));
      f.boundary.push_back(at(top_chain[c], 0, c));
    }
    f.edges = top_chain;
    for (int c = 0; c < d; ++c) f.vertices.push_back(vid(0, c));
  }
  {
    Face& f = logical[static_cast<int>(LogicalFace::Bottom)];
    f.type = PauliType::Z;
    for (int c = 0; c + 1 < d; ++c) {
      f.boundary.push_back(at(bottom_chain[c], d - 1, c));
      f.boundary.push_back(at(bottom_chain[c], d - 1, c + 1));
    }
    f.boundary.push_back(4);
    f.boundary.push_back(1);
    f.edges = bottom_chain;
    for (int c = 0; c < d; ++c) f.vertices.push_back(vid(d - 1, c));
  }
  {
    Face& f = logical[static_cast<int>(LogicalFace::Left)];
    f.type = PauliType::X;
    f.boundary = {1, 2};
    for (int r = 0; r + 1 < d; ++r) {
      f.boundary.push_back(at(left_chain[r], r, 0));
      f.boundary.push_back(at(left_chain[r], r + 1, 0));
    }
    f.edges = left_chain;
    for (int r = 0; r < d; ++r) f.vertices.push_back(vid(r, 0));
  }
  {
    Face& f = logical[static_cast<int>(LogicalFace::Right)];
    f.type = PauliType::X;
    f.boundary = {3, 4};
    for (int r = d - 2; r >= 0; --r) {
      f.boundary.push_back(at(right_chain[r], r + 1, d - 1));
      f.boundary.push_back(at(right_chain[r], r, d - 1));
    }
    f.edges = right_chain;
    for (int r = 0; r < d; ++r) f.vertices.push_back(vid(r, d - 1));
  }

  return from_parts(d, std::move(vertices), std::move(edges), std::move(faces), std::move(clusters),
                    std::move(logical), left_chain, top_chain);
}

CodeLayout CodeLayout::from_parts(int d, std::vector<Vertex> vertices, std::vector<Edge> edges,
                                  std::vector<Face> faces, std::vector<std::array<int, 4>> clusters,
                                  std::vector<Face> logical_faces, std::vector<int> left_edges,
                                  std::vector<int> top_edges) {
  if (d < 3 || d % 2 == 0) throw InvalidDistance("distance " + std::to_string(d));
  const int n = d * d;
  if (static_cast<int>(vertices.size()) != n || static_cast<int>(edges.size()) != 2 * n - 2 ||
      static_cast<int>(faces.size()) != n - 1 || static_cast<int>(clusters.size()) != n ||
      logical_faces.size() != 4) {
    throw InvalidDistance("layout tables do not match distance " + std::to_string(d));
  }
  CodeLayout out;
  out.d_ = d;
  out.vertices_ = std::move(vertices);
  out.edges_ = std::move(edges);
  out.faces_ = std::move(faces);
  out.clusters_ = std::move(clusters);
  out.logical_faces_ = std::move(logical_faces);
  out.left_edges_ = std::move(left_edges);
  out.top_edges_ = std::move(top_edges);
  out.index();
  return out;
}

void CodeLayout::index() {
  const int n = num_qubits();
  const int modes = num_modes();
  logical_z_.clear();
  logical_x_.clear();
  for (int u = 0; u < n; ++u) {
    if (vertices_[u].row == 0) logical_z_.push_back(u);
    if (vertices_[u].col == 0) logical_x_.push_back(u);
  }
  x_faces_.clear();
  z_faces_.clear();
  x_faces_at_.assign(n, {});
  z_faces_at_.assign(n, {});
  faces_at_edge_.assign(edges_.size(), {});
  for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
    const Face& face = faces_[f];
    (face.type == PauliType::X ? x_faces_ : z_faces_).push_back(f);
    for (int u : face.vertices) (face.type == PauliType::X ? x_faces_at_ : z_faces_at_)[u].push_back(f);
    for (int e : face.edges) faces_at_edge_[e].push_back(f);
  }
  mode_vertex_.assign(modes + 1, -1);
  mode_slot_.assign(modes + 1, -1);
  mode_edge_.assign(modes + 1, -1);
  for (int u = 0; u < n; ++u) {
    for (int s = 0; s < 4; ++s) {
      const int m = clusters_[u][s];
      if (m < 1 || m > modes || mode_vertex_[m] != -1) {
        throw std::logic_error("cluster modes are not a partition of 1.." + std::to_string(modes));
      }
      mode_vertex_[m] = u;
      mode_slot_[m] = s;
    }
  }
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const Edge& edge = edges_[e];
    mode_edge_[edge.mode_u] = e;
    mode_edge_[edge.mode_v] = e;
    if (mode_vertex_[edge.mode_u] != edge.u || mode_vertex_[edge.mode_v] != edge.v) {
      throw std::logic_error("edge " + std::to_string(e) + " modes are not in its endpoint clusters");
    }
  }
}

CodeLayout CodeLayout::with_flipped_edge(int e) const {
  CodeLayout copy = *this;
  std::swap(copy.edges_.at(e).tail, copy.edges_.at(e).head);
  return copy;
}

std::string OrientationReport::describe() const {
  if (ok()) return "all faces have odd clockwise parity";
  std::string out = "failing faces:";
  for (int f : failing_faces) out += " " + std::to_string(f);
  static const char* names[] = {"top", "bottom", "left", "right"};
  for (LogicalFace f : failing_logical) out += std::string(" logical-") + names[static_cast<int>(f)];
  return out;
}

namespace {

bool odd_clockwise(const CodeLayout& layout, const Face& face) {
  const std::vector<int>& b = face.boundary;
  const int len = static_cast<int>(b.size());
  if (len < 2 || len % 2 != 0) return false;
  int clockwise = 0;
  for (int i = 0; i < len; i += 2) {
    const int a = b[i];
    const int c = b[i + 1];
    const int e = layout.mode_edge(a);
    if (e >= 0) {
      if (layout.mode_edge(c) != e) return false;
      clockwise += layout.edges()[e].tail == a;
    } else {
      // Virtual corner link; the tail is the lower corner id for all four operators.
      if (layout.mode_edge(c) >= 0) return false;
      clockwise += a < c;
    }
  }
  for (int i = 1; i < len; i += 2) {
    const int a = b[i];
    const int c = b[(i + 1) % len];
    if (layout.mode_vertex(a) != layout.mode_vertex(c)) return false;
    const ClusterOp op = cluster_op_for_slots(layout.mode_slot(a), layout.mode_slot(c));
    clockwise += layout.mode_slot(a) == tail_slot(op);
  }
  return clockwise % 2 == 1;
}

}  // namespace

OrientationReport check_orientations(const CodeLayout& layout) {
  OrientationReport report;
  for (int f = 0; f < static_cast<int>(layout.faces().size()); ++f) {
    if (!odd_clockwise(layout, layout.faces()[f])) report.failing_faces.push_back(f);
  }
  for (LogicalFace which : {LogicalFace::Top, LogicalFace::Bottom, LogicalFace::Left}) {
    if (!odd_clockwise(layout, layout.logical_face(which))) report.failing_logical.push_back(which);
  }
  return report;
}

std::vector<int> face_syndromes(const CodeLayout& layout, std::span<const int> m) {
  if (m.size() != layout.edges().size()) throw std::invalid_argument("need one outcome per edge");
  std::vector<int> s(layout.faces().size(), 1);
  for (std::size_t f = 0; f < s.size(); ++f) {
    for (int e : layout.faces()[f].edges) s[f] *= m[e];
  }
  return s;
}

std::vector<int> x_face_syndromes_from_vertex_outcomes(const CodeLayout& layout,
                                                        std::span<const int> m) {
  if (static_cast<int>(m.size()) != layout.num_qubits()) {
    throw std::invalid_argument("need one outcome per vertex");
  }
  const std::vector<int>& xf = layout.faces_of_type(PauliType::X);
  std::vector<int> s(xf.size(), 1);
  for (std::size_t i = 0; i < xf.size(); ++i) {
    for (int u : layout.faces()[xf[i]].vertices) s[i] *= m[u];
  }
  return s;
}

ModePair encoding_pairs(const CodeLayout& layout, int u, ClusterOp op) {
  const std::array<int, 4>& g = layout.cluster(u);
  switch (op) {
    case ClusterOp::X: return {g[0], g[1], 1};
    case ClusterOp::Z: return {g[1], g[2], 1};
    case ClusterOp::XS: return {g[2], g[3], 1};
    case ClusterOp::ZS: return {g[0], g[3], 1};
  }
  throw std::logic_error("unknown cluster operator");
}

namespace {

// Partner of each mode in the edge-link pairing, corners paired (1,2),(3,4).
std::vector<int> link_partners(const CodeLayout& layout) {
  std::vector<int> partner(layout.num_modes() + 1, -1);
  for (const Edge& e : layout.edges()) {
    partner[e.mode_u] = e.mode_v;
    partner[e.mode_v] = e.mode_u;
  }
  partner[1] = 2;
  partner[2] = 1;
  partner[3] = 4;
  partner[4] = 3;
  return partner;
}

}  // namespace

std::vector<ScheduleStep> measurement_schedule(const CodeLayout& layout, ScheduleFlavor flavor) {
  std::vector<ScheduleStep> steps;
  if (flavor == ScheduleFlavor::LinksByColumn) {
    const auto& edges = layout.edges();
    const auto& verts = layout.vertices();
    std::vector<int> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int e) {
      const Vertex& a = verts[edges[e].u];
      const Vertex& b = verts[edges[e].v];
      return std::make_tuple(std::min(a.col, b.col), std::min(a.row, b.row), e);
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
    std::vector<char> loaded(layout.num_qubits(), 0);
    steps.reserve(order.size());
    for (int e : order) {
      ScheduleStep step;
      step.target = e;
      for (int u : {edges[e].u, edges[e].v}) {
        if (!loaded[u]) {
          loaded[u] = 1;
          step.attach.push_back(u);
        }
      }
      step.detach.push_back({edges[e].tail, edges[e].head, 1});
      steps.push_back(std::move(step));
    }
  } else {
    const std::vector<int> partner = link_partners(layout);
    std::vector<char> active(layout.num_modes() + 1, 0);
    steps.reserve(layout.num_qubits());
    for (int u = 0; u < layout.num_qubits(); ++u) {
      ScheduleStep step;
      step.target = u;
      for (int mode : layout.cluster(u)) {
        if (!active[mode]) {
          active[mode] = active[partner[mode]] = 1;
          step.attach.push_back(mode);
        }
      }
      const auto& g = layout.cluster(u);
      step.detach.push_back({g[0], g[1], 1});
      step.detach.push_back({g[2], g[3], 1});
      steps.push_back(std::move(step));
    }
  }
  return steps;
}

int schedule_peak_modes(const CodeLayout& layout, ScheduleFlavor flavor) {
  int active = 0;
  int peak = 0;
  for (const ScheduleStep& step : measurement_schedule(layout, flavor)) {
    active += static_cast<int>(step.attach.size()) * (flavor == ScheduleFlavor::LinksByColumn ? 4 : 2);
    peak = std::max(peak, active);
    active -= 2 * static_cast<int>(step.detach.size());
  }
  return peak;
}

}  // namespace flosurf
