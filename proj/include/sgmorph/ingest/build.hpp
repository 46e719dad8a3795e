#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sgmorph/core/shape_graph.hpp"

namespace sgmorph {

/// Splits the branch of edge `e` at interior point index `k`, introducing a
/// new node there. Both halves keep their geometry; the second half is
/// appended as a new edge. Returns the new node index.
inline int split_branch_at(ShapeGraph& g, std::size_t e, std::size_t k) {
  const Polyline& b = g.branches[e];
  const int new_node = static_cast<int>(g.nodes.size());
  g.nodes.push_back(b[k]);
  Polyline tail(b.begin() + k, b.end());
  Polyline head(b.begin(), b.begin() + k + 1);
  const int old_v = g.edges[e].v;
  g.edges[e].v = new_node;
  g.branches[e] = std::move(head);
  g.edges.push_back({new_node, old_v});
  g.branches.push_back(std::move(tail));
  return new_node;
}

/// Restores the no-self-loop / no-parallel-edge invariants by splitting
/// offending branches at interior points. Unsplittable offenders (no
/// interior point) are dropped and reported.
inline void normalize_multi_edges(ShapeGraph& g, std::vector<std::string>* warnings = nullptr) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, std::size_t> seen;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const int u = g.edges[e].u, v = g.edges[e].v;
      const bool self_loop = u == v;
      const auto key = std::minmax(u, v);
      const bool duplicate = !self_loop && seen.count({key.first, key.second}) > 0;
      if (!self_loop && !duplicate) {
        seen[{key.first, key.second}] = e;
        continue;
      }
      if (g.branches[e].size() < 3) {
        if (warnings)
          warnings->push_back("dropped unsplittable " +
                              std::string(self_loop ? "self-loop" : "parallel edge") +
                              " between nodes " + std::to_string(u) + " and " +
                              std::to_string(v));
        g.edges.erase(g.edges.begin() + e);
        g.branches.erase(g.branches.begin() + e);
      } else {
        split_branch_at(g, e, g.branches[e].size() / 2);
      }
      changed = true;
      break;
    }
  }
}

/// Drops nodes that no edge touches (keeps a lone node when the graph has
/// no edges at all, so a single-point graph stays representable).
inline void drop_isolated_nodes(ShapeGraph& g) {
  if (g.edges.empty()) return;
  std::vector<bool> used(g.nodes.size(), false);
  for (const Edge& e : g.edges) used[e.u] = used[e.v] = true;
  bool any_unused = false;
  for (const bool u : used) any_unused |= !u;
  if (any_unused) g = induced_subgraph(g, used);
}

}  // namespace sgmorph
