#pragma once

#include <json.hpp>
#include <string>

#include "sgmorph/core/error.hpp"
#include "sgmorph/core/shape_graph.hpp"

namespace sgmorph {

namespace detail {

inline Vec3 point_from_json(const nlohmann::json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw parse_error(where + ": point must be an array of " + std::to_string(dim) +
                      " numbers");
  for (const auto& c : j)
    if (!c.is_number()) throw parse_error(where + ": non-numeric coordinate");
  Vec3 p;
  p.x = j[0].get<double>();
  p.y = j[1].get<double>();
  if (dim == 3) p.z = j[2].get<double>();
  return p;
}

}  // namespace detail

/// Canonical on-disk shape-graph format:
///   {"dim": 2|3, "id": str, "label": str?, "nodes": [[x,y],...],
///    "edges": [{"u": int, "v": int, "polyline": [[x,y],...]}, ...]}
/// Node indices are 0-based; polyline endpoints must coincide with the edge
/// nodes within 1e-9. Doubles are serialized at full precision, so a
/// write/read round trip reproduces the graph exactly.
inline ShapeGraph read_graph_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw parse_error("top level must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw parse_error("field 'dim' missing or not an integer");
  ShapeGraph g;
  g.dim = j["dim"].get<int>();
  if (g.dim != 2 && g.dim != 3) throw parse_error("field 'dim' must be 2 or 3");
  if (!j.contains("id") || !j["id"].is_string())
    throw parse_error("field 'id' missing or not a string");
  g.id = j["id"].get<std::string>();
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw parse_error("field 'label' must be a string");
    g.label = j["label"].get<std::string>();
  }
  if (!j.contains("nodes") || !j["nodes"].is_array())
    throw parse_error("field 'nodes' missing or not an array");
  for (std::size_t i = 0; i < j["nodes"].size(); ++i)
    g.nodes.push_back(
        detail::point_from_json(j["nodes"][i], g.dim, "nodes[" + std::to_string(i) + "]"));

  if (!j.contains("edges") || !j["edges"].is_array())
    throw parse_error("field 'edges' missing or not an array");
  for (std::size_t e = 0; e < j["edges"].size(); ++e) {
    const auto& je = j["edges"][e];
    const std::string where = "edges[" + std::to_string(e) + "]";
    if (!je.is_object() || !je.contains("u") || !je.contains("v") ||
        !je["u"].is_number_integer() || !je["v"].is_number_integer())
      throw parse_error(where + ": needs integer fields 'u' and 'v'");
    const int u = je["u"].get<int>(), v = je["v"].get<int>();
    if (u < 0 || v < 0 || u >= static_cast<int>(g.nodes.size()) ||
        v >= static_cast<int>(g.nodes.size()))
      throw parse_error(where + ": node index out of range");
    Polyline poly;
    if (je.contains("polyline")) {
      if (!je["polyline"].is_array())
        throw parse_error(where + ".polyline: must be an array of points");
      for (std::size_t k = 0; k < je["polyline"].size(); ++k)
        poly.push_back(detail::point_from_json(
            je["polyline"][k], g.dim, where + ".polyline[" + std::to_string(k) + "]"));
    } else {
      poly = {g.nodes[u], g.nodes[v]};
    }
    if (poly.size() < 2) throw parse_error(where + ".polyline: needs at least 2 points");
    g.edges.push_back({u, v});
    g.branches.push_back(std::move(poly));
  }

  const std::vector<std::string> report = validate(g);
  if (!report.empty()) throw parse_error(report.front());
  return g;
}

inline std::string write_graph_json(const ShapeGraph& g) {
  nlohmann::ordered_json j;
  j["dim"] = g.dim;
  j["id"] = g.id;
  if (!g.label.empty()) j["label"] = g.label;
  j["nodes"] = nlohmann::ordered_json::array();
  const auto point_json = [&](const Vec3& p) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    a.push_back(p.x);
    a.push_back(p.y);
    if (g.dim == 3) a.push_back(p.z);
    return a;
  };
  for (const Vec3& p : g.nodes) j["nodes"].push_back(point_json(p));
  j["edges"] = nlohmann::ordered_json::array();
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    nlohmann::ordered_json je;
    je["u"] = g.edges[e].u;
    je["v"] = g.edges[e].v;
    je["polyline"] = nlohmann::ordered_json::array();
    for (const Vec3& p : g.branches[e]) je["polyline"].push_back(point_json(p));
    j["edges"].push_back(std::move(je));
  }
  return j.dump(1);
}

}  // namespace sgmorph
