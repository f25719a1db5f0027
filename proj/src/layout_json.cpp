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


#include "flosurf/layout_json.hpp"

#include <string>

#include "flosurf/errors.hpp"

namespace flosurf {

namespace {

const char* kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Horizontal: return "horizontal";
    case EdgeKind::Vertical: return "vertical";
    case EdgeKind::TopOuter: return "top_outer";
    case EdgeKind::BottomOuter: return "bottom_outer";
    case EdgeKind::LeftOuter: return "left_outer";
    case EdgeKind::RightOuter: return "right_outer";
  }
  return "?";
}

EdgeKind kind_from_name(const std::string& s) {
  for (EdgeKind k : {EdgeKind::Horizontal, EdgeKind::Vertical, EdgeKind::TopOuter, EdgeKind::BottomOuter,
                     EdgeKind::LeftOuter, EdgeKind::RightOuter}) {
    if (s == kind_name(k)) return k;
  }
  throw InvalidDistance("unknown edge kind '" + s + "'");
}

nlohmann::json face_json(const Face& f) {
  return {{"type", f.type == PauliType::X ? "X" : "Z"},
          {"vertices", f.vertices},
          {"edges", f.edges},
          {"boundary", f.boundary}};
}

Face face_from_json(const nlohmann::json& j) {
  Face f;
  f.type = j.at("type").get<std::string>() == "X" ? PauliType::X : PauliType::Z;
  f.vertices = j.at("vertices").get<std::vector<int>>();
  f.edges = j.at("edges").get<std::vector<int>>();
  f.boundary = j.at("boundary").get<std::vector<int>>();
  return f;
}

}  // namespace

nlohmann::json layout_to_json(const CodeLayout& layout) {
  nlohmann::json doc;
  doc["distance"] = layout.distance();
  doc["corners"] = CodeLayout::corners();
  auto& vs = doc["vertices"] = nlohmann::json::array();
  for (std::size_t u = 0; u < layout.vertices().size(); ++u) {
    const Vertex& v = layout.vertices()[u];
    vs.push_back({{"id", u}, {"row", v.row}, {"col", v.col}, {"cluster", layout.clusters()[u]}});
  }
  auto& es = doc["edges"] = nlohmann::json::array();
  for (std::size_t e = 0; e < layout.edges().size(); ++e) {
    const Edge& edge = layout.edges()[e];
    es.push_back({{"id", e},
                  {"u", edge.u},
                  {"v", edge.v},
                  {"kind", kind_name(edge.kind)},
                  {"mode_u", edge.mode_u},
                  {"mode_v", edge.mode_v},
                  {"tail", edge.tail},
                  {"head", edge.head}});
  }
  auto& fs = doc["faces"] = nlohmann::json::array();
  for (const Face& f : layout.faces()) fs.push_back(face_json(f));
  doc["logical_faces"] = {{"top", face_json(layout.logical_face(LogicalFace::Top))},
                          {"bottom", face_json(layout.logical_face(LogicalFace::Bottom))},
                          {"left", face_json(layout.logical_face(LogicalFace::Left))},
                          {"right", face_json(layout.logical_face(LogicalFace::Right))}};
  doc["left_edges"] = layout.left_edges();
  doc["top_edges"] = layout.top_edges();
  doc["logical_z_support"] = layout.logical_z_support();
  doc["logical_x_support"] = layout.logical_x_support();
  return doc;
}

CodeLayout layout_from_json(const nlohmann::json& doc) {
  try {
    const int d = doc.at("distance").get<int>();
    std::vector<Vertex> vertices;
    std::vector<std::array<int, 4>> clusters;
    for (const auto& v : doc.at("vertices")) {
      vertices.push_back({v.at("row").get<int>(), v.at("col").get<int>()});
      clusters.push_back(v.at("cluster").get<std::array<int, 4>>());
    }
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(), kind_from_name(e.at("kind").get<std::string>()),
                       e.at("mode_u").get<int>(), e.at("mode_v").get<int>(), e.at("tail").get<int>(),
                       e.at("head").get<int>()});
    }
    std::vector<Face> faces;
    for (const auto& f : doc.at("faces")) faces.push_back(face_from_json(f));
    const auto& lf = doc.at("logical_faces");
    std::vector<Face> logical = {face_from_json(lf.at("top")), face_from_json(lf.at("bottom")),
                                 face_from_json(lf.at("left")), face_from_json(lf.at("right"))};
    return CodeLayout::from_parts(d, std::move(vertices), std::move(edges), std::move(faces),
                                  std::move(clusters), std::move(logical),
                                  doc.at("left_edges").get<std::vector<int>>(),
                                  doc.at("top_edges").get<std::vector<int>>());
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidDistance(std::string("malformed layout document: ") + ex.what());
  }
}

}  // namespace flosurf
