#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sgmorph/core/error.hpp"
#include "sgmorph/core/shape_graph.hpp"

namespace sgmorph {

/// One SWC sample line: id, structure type, xyz, radius (parsed but unused),
/// parent id or -1.
struct SwcRecord {
  long long id = 0;
  int type_code = 0;
  Vec3 position;
  double radius = 0.0;
  long long parent = -1;
};

inline std::vector<SwcRecord> parse_swc_records(const std::string& text) {
  std::vector<SwcRecord> records;
  std::set<long long> declared;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    SwcRecord r;
    if (!(fields >> r.id)) continue;  // blank line
    if (!(fields >> r.type_code >> r.position.x >> r.position.y >> r.position.z >>
          r.radius >> r.parent))
      throw parse_error("malformed SWC record", line_no);
    if (!declared.insert(r.id).second)
      throw structure_error("duplicate SWC id " + std::to_string(r.id) + " at line " +
                            std::to_string(line_no));
    if (r.parent != -1 && declared.count(r.parent) == 0)
      throw structure_error("SWC record " + std::to_string(r.id) +
                            " references parent " + std::to_string(r.parent) +
                            " before its declaration (line " + std::to_string(line_no) +
                            ")");
    records.push_back(r);
  }
  return records;
}

/// Parses an SWC neuron trace into a 3D shape graph. Records whose type is
/// not in `keep_types` are dropped together with their incident segments
/// (children survive as new fragment roots). The kept forest is compressed:
/// graph nodes are the sample points of tree-degree != 2 -- plus type-1 soma
/// roots regardless of degree -- and each branch polyline is the chain of
/// degree-2 samples in between. Zero-length interior steps (duplicate
/// consecutive samples) are dropped; degenerate chains are skipped with a
/// warning.
inline ShapeGraph parse_swc(const std::string& text, const std::set<int>& keep_types,
                            std::vector<std::string>* warnings = nullptr) {
  if (keep_types.empty())
    throw std::invalid_argument("parse_swc: keep_types must not be empty");
  const std::vector<SwcRecord> records = parse_swc_records(text);

  std::map<long long, int> index_of;
  std::vector<const SwcRecord*> kept;
  for (const SwcRecord& r : records)
    if (keep_types.count(r.type_code)) {
      index_of[r.id] = static_cast<int>(kept.size());
      kept.push_back(&r);
    }

  const int n = static_cast<int>(kept.size());
  std::vector<std::vector<int>> adj(n);
  std::vector<bool> is_root(n, false);
  for (int i = 0; i < n; ++i) {
    const SwcRecord& r = *kept[i];
    const auto parent_it =
        r.parent == -1 ? index_of.end() : index_of.find(r.parent);
    if (parent_it == index_of.end()) {
      is_root[i] = true;  // true root, or parent filtered away
    } else {
      adj[i].push_back(parent_it->second);
      adj[parent_it->second].push_back(i);
    }
  }

  ShapeGraph g;
  g.dim = 3;
  std::vector<int> node_of(n, -1);
  const auto is_node = [&](int i) {
    return adj[i].size() != 2 || (kept[i]->type_code == 1 && is_root[i]);
  };
  for (int i = 0; i < n; ++i)
    if (is_node(i)) {
      node_of[i] = static_cast<int>(g.nodes.size());
      g.nodes.push_back(kept[i]->position);
    }

  // walk chains of degree-2 samples between nodes
  std::set<std::pair<int, int>> walked;
  for (int i = 0; i < n; ++i) {
    if (node_of[i] < 0) continue;
    for (const int first : adj[i]) {
      if (walked.count({std::min(i, first), std::max(i, first)})) continue;
      Polyline poly = {kept[i]->position};
      int prev = i, at = first;
      walked.insert({std::min(prev, at), std::max(prev, at)});
      while (node_of[at] < 0) {
        poly.push_back(kept[at]->position);
        const int next = adj[at][0] == prev ? adj[at][1] : adj[at][0];
        walked.insert({std::min(at, next), std::max(at, next)});
        prev = at;
        at = next;
      }
      poly.push_back(kept[at]->position);

      // drop zero-length interior steps
      Polyline clean = {poly.front()};
      for (std::size_t k = 1; k < poly.size(); ++k)
        if (distance(poly[k], clean.back()) > 0.0) clean.push_back(poly[k]);
      if (clean.size() < 2) {
        if (warnings)
          warnings->push_back("skipped zero-length SWC chain at sample id " +
                              std::to_string(kept[i]->id));
        continue;
      }
      g.edges.push_back({node_of[i], node_of[at]});
      g.branches.push_back(std::move(clean));
    }
  }
  return g;
}

}  // namespace sgmorph
