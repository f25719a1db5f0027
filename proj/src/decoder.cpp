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


#include "flosurf/decoder.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "flosurf/errors.hpp"
#include "flosurf/matching.hpp"

namespace flosurf {

namespace {

constexpr std::uint16_t kUnreachable = std::numeric_limits<std::uint16_t>::max();

std::vector<int> defect_nodes(std::span<const int> syndrome) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(syndrome.size()); ++i) {
    if (syndrome[i] == -1) {
      out.push_back(i);
    } else if (syndrome[i] != 1) {
      throw std::invalid_argument("syndrome entries must be +1 or -1");
    }
  }
  return out;
}

int parity_sign(const std::vector<std::uint8_t>& support, const std::vector<int>& vertices) {
  int parity = 0;
  for (int u : vertices) parity ^= support[u] & 1;
  return parity ? -1 : 1;
}

}  // namespace

DecoderKind parse_decoder_kind(const std::string& name) {
  if (name == "mwpm") return DecoderKind::Mwpm;
  if (name == "peel") return DecoderKind::Peel;
  throw InvalidConfig("unknown decoder '" + name + "' (expected mwpm or peel)");
}

std::string to_string(DecoderKind kind) { return kind == DecoderKind::Mwpm ? "mwpm" : "peel"; }

LogicalSigns commutation_signs(const CodeLayout& layout, const Correction& correction) {
  LogicalSigns s;
  s.x = parity_sign(correction.z_support, layout.logical_x_support());
  s.z = parity_sign(correction.x_support, layout.logical_z_support());
  s.y = s.x * s.z;
  return s;
}

void refresh_signs(const CodeLayout& layout, Correction& correction) {
  const LogicalSigns s = commutation_signs(layout, correction);
  correction.lambda_x = s.x;
  correction.lambda_y = s.y;
  correction.lambda_z = s.z;
}

Correction fix_sign(const CodeLayout& layout, Correction correction, double bx) {
  if (bx < 0.0) {
    for (int u : layout.logical_z_support()) correction.z_support[u] ^= 1;
    refresh_signs(layout, correction);
  }
  return correction;
}

std::vector<int> correction_syndrome(const CodeLayout& layout, const Correction& correction) {
  std::vector<int> s(layout.faces().size(), 1);
  for (std::size_t f = 0; f < s.size(); ++f) {
    const Face& face = layout.faces()[f];
    const auto& support = face.type == PauliType::X ? correction.z_support : correction.x_support;
    for (int u : face.vertices) {
      if (support[u]) s[f] = -s[f];
    }
  }
  return s;
}

Decoder::Decoder(const CodeLayout& layout) : layout_(layout) {
  graphs_[0] = build_graph(PauliType::X);
  graphs_[1] = build_graph(PauliType::Z);
}

Decoder::Graph Decoder::build_graph(PauliType t) const {
  Graph g;
  const std::vector<int>& faces = layout_.faces_of_type(t);
  g.nodes = static_cast<int>(faces.size());
  std::vector<int> node_of_face(layout_.faces().size(), -1);
  for (int i = 0; i < g.nodes; ++i) node_of_face[faces[i]] = i;
  g.adj.assign(g.nodes, {});
  for (int u = 0; u < layout_.num_qubits(); ++u) {
    const std::vector<int>& fs = layout_.faces_at_vertex(u, t);
    if (fs.size() == 2) {
      const int a = node_of_face[fs[0]];
      const int b = node_of_face[fs[1]];
      g.adj[a].push_back({b, u});
      g.adj[b].push_back({a, u});
    } else if (fs.size() == 1) {
      g.adj[node_of_face[fs[0]]].push_back({-1, u});
    }
  }

  const int n = g.nodes;
  g.dist.assign(static_cast<std::size_t>(n) * n, kUnreachable);
  std::vector<int> queue(n);
  for (int src = 0; src < n; ++src) {
    std::uint16_t* row = g.dist.data() + static_cast<std::size_t>(src) * n;
    int head = 0;
    int tail = 0;
    row[src] = 0;
    queue[tail++] = src;
    while (head < tail) {
      const int x = queue[head++];
      for (auto [y, u] : g.adj[x]) {
        if (y >= 0 && row[y] == kUnreachable) {
          row[y] = static_cast<std::uint16_t>(row[x] + 1);
          queue[tail++] = y;
        }
      }
    }
  }
  g.bdist.assign(n, kUnreachable);
  int head = 0;
  int tail = 0;
  for (int x = 0; x < n; ++x) {
    for (auto [y, u] : g.adj[x]) {
      if (y < 0 && g.bdist[x] == kUnreachable) {
        g.bdist[x] = 1;
        queue[tail++] = x;
      }
    }
  }
  while (head < tail) {
    const int x = queue[head++];
    for (auto [y, u] : g.adj[x]) {
      if (y >= 0 && g.bdist[y] == kUnreachable) {
        g.bdist[y] = static_cast<std::uint16_t>(g.bdist[x] + 1);
        queue[tail++] = y;
      }
    }
  }
  return g;
}

int Decoder::distance(PauliType t, int a, int b) const {
  const Graph& g = graph(t);
  const std::uint16_t v = g.dist[static_cast<std::size_t>(a) * g.nodes + b];
  return v == kUnreachable ? -1 : v;
}

int Decoder::boundary_distance(PauliType t, int a) const {
  const std::uint16_t v = graph(t).bdist[a];
  return v == kUnreachable ? -1 : v;
}

void Decoder::toggle_path(const Graph& g, int from, int to, std::vector<std::uint8_t>& support) const {
  // Walk from `to` back towards `from` along strictly decreasing distance.
  const std::uint16_t* row = g.dist.data() + static_cast<std::size_t>(from) * g.nodes;
  int x = to;
  while (x != from) {
    bool moved = false;
    for (auto [y, u] : g.adj[x]) {
      if (y >= 0 && row[y] + 1 == row[x]) {
        support[u] ^= 1;
        x = y;
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("decoder graph path reconstruction failed");
  }
}

void Decoder::toggle_boundary_path(const Graph& g, int from, std::vector<std::uint8_t>& support) const {
  int x = from;
  while (true) {
    if (g.bdist[x] == 1) {
      for (auto [y, u] : g.adj[x]) {
        if (y < 0) {
          support[u] ^= 1;
          return;
        }
      }
    }
    bool moved = false;
    for (auto [y, u] : g.adj[x]) {
      if (y >= 0 && g.bdist[y] + 1 == g.bdist[x]) {
        support[u] ^= 1;
        x = y;
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("decoder boundary path reconstruction failed");
  }
}

std::vector<std::uint8_t> Decoder::match(PauliType t, std::span<const int> defects) const {
  const Graph& g = graph(t);
  std::vector<std::uint8_t> support(layout_.num_qubits(), 0);
  const int k = static_cast<int>(defects.size());
  if (k == 0) return support;

  // Defect i is vertex i, its private boundary copy is vertex k + i.
  // Pairs whose distance is at least the sum of their boundary distances
  // never need a direct edge; boundary copies pair freely at zero cost.
  std::vector<WeightedEdge> edges;
  long long wmax = 0;
  for (int i = 0; i < k; ++i) {
    const long long b = g.bdist[defects[i]];
    edges.push_back({i, k + i, b});
    wmax = std::max(wmax, b);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const long long dij = g.dist[static_cast<std::size_t>(defects[i]) * g.nodes + defects[j]];
      if (dij == kUnreachable) continue;
      if (dij < static_cast<long long>(g.bdist[defects[i]]) + g.bdist[defects[j]]) {
        edges.push_back({i, j, dij});
        edges.push_back({k + i, k + j, 0});
        wmax = std::max(wmax, dij);
      }
    }
  }
  for (WeightedEdge& e : edges) e.weight = wmax + 1 - e.weight;
  const std::vector<int> mate = max_weight_matching(2 * k, edges, true);
  for (int i = 0; i < k; ++i) {
    const int m = mate[i];
    if (m < 0) throw std::logic_error("matching left a defect unmatched");
    if (m == k + i) {
      toggle_boundary_path(g, defects[i], support);
    } else if (m < k && m > i) {
      toggle_path(g, defects[i], defects[m], support);
    } else if (m >= k) {
      throw std::logic_error("defect matched to a foreign boundary copy");
    }
  }
  return support;
}

std::vector<std::uint8_t> Decoder::peel(PauliType t, std::span<const int> defects) const {
  const Graph& g = graph(t);
  std::vector<std::uint8_t> support(layout_.num_qubits(), 0);
  for (int x : defects) toggle_boundary_path(g, x, support);
  return support;
}

Correction Decoder::mwpm_decode(std::span<const int> x_syndrome) const {
  return decode_x_syndrome(x_syndrome, DecoderKind::Mwpm);
}

Correction Decoder::decode_x_syndrome(std::span<const int> x_syndrome, DecoderKind kind) const {
  if (static_cast<int>(x_syndrome.size()) != graph(PauliType::X).nodes) {
    throw std::invalid_argument("need one syndrome bit per X-face");
  }
  const std::vector<int> defects = defect_nodes(x_syndrome);
  Correction c;
  c.z_support = kind == DecoderKind::Mwpm ? match(PauliType::X, defects) : peel(PauliType::X, defects);
  c.x_support.assign(layout_.num_qubits(), 0);
  refresh_signs(layout_, c);
  return c;
}

Correction Decoder::prep_correction(std::span<const int> syndrome, DecoderKind kind) const {
  if (syndrome.size() != layout_.faces().size()) {
    throw std::invalid_argument("need one syndrome bit per face");
  }
  std::vector<int> sx;
  std::vector<int> sz;
  for (int f : layout_.faces_of_type(PauliType::X)) sx.push_back(syndrome[f]);
  for (int f : layout_.faces_of_type(PauliType::Z)) sz.push_back(syndrome[f]);
  const std::vector<int> dx = defect_nodes(sx);
  const std::vector<int> dz = defect_nodes(sz);
  Correction c;
  if (kind == DecoderKind::Mwpm) {
    c.z_support = match(PauliType::X, dx);
    c.x_support = match(PauliType::Z, dz);
  } else {
    c.z_support = peel(PauliType::X, dx);
    c.x_support = peel(PauliType::Z, dz);
  }
  refresh_signs(layout_, c);
  return c;
}

}  // namespace flosurf
