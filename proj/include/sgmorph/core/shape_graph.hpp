#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgmorph/core/vec.hpp"

namespace sgmorph {

/// Tolerance for branch endpoints agreeing with their nodes.
inline constexpr double k_endpoint_tol = 1e-9;

struct Edge {
  int u = -1;
  int v = -1;
};

using Polyline = std::vector<Vec3>;

/// A geometric network embedded in R^2 or R^3: nodes with coordinates,
/// unordered edges, and one polyline branch per edge whose first and last
/// points coincide with the edge's nodes. Treated as immutable once built;
/// every operation on it is a pure function.
struct ShapeGraph {
  int dim = 2;
  std::string id;
  std::string label;
  std::vector<Vec3> nodes;
  std::vector<Edge> edges;
  std::vector<Polyline> branches;  // parallel to edges

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_edges() const { return edges.size(); }
};

inline void check_edge_index(const ShapeGraph& g, std::size_t e) {
  if (e >= g.edges.size())
    throw std::out_of_range("edge index " + std::to_string(e) +
                            " out of range (graph has " +
                            std::to_string(g.edges.size()) + " edges)");
}

/// Straight-line distance between the two endpoint nodes of an edge.
inline double edge_length(const ShapeGraph& g, std::size_t e) {
  check_edge_index(g, e);
  return distance(g.nodes[g.edges[e].u], g.nodes[g.edges[e].v]);
}

/// Arc length of the polyline branch attached to an edge.
inline double branch_length(const ShapeGraph& g, std::size_t e) {
  check_edge_index(g, e);
  const Polyline& b = g.branches[e];
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < b.size(); ++k) s += distance(b[k], b[k + 1]);
  return s;
}

inline double total_edge_length(const ShapeGraph& g) {
  double t = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) t += edge_length(g, e);
  return t;
}

inline double total_branch_length(const ShapeGraph& g) {
  double t = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) t += branch_length(g, e);
  return t;
}

/// Diagnostic check of all ShapeGraph invariants. Returns one message per
/// violation; empty means the graph is well-formed.
inline std::vector<std::string> validate(const ShapeGraph& g) {
  std::vector<std::string> report;
  const auto num = [](std::size_t e) { return "edge " + std::to_string(e); };

  if (g.dim != 2 && g.dim != 3)
    report.push_back("dim must be 2 or 3, got " + std::to_string(g.dim));
  if (g.branches.size() != g.edges.size())
    report.push_back("branch count does not match edge count");
  if (g.dim == 2) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (g.nodes[i].z != 0.0) {
        report.push_back("node " + std::to_string(i) +
                         " has a nonzero third coordinate in a 2D graph");
        break;
      }
  }

  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const int u = g.edges[e].u, v = g.edges[e].v;
    if (u < 0 || v < 0 || u >= static_cast<int>(g.nodes.size()) ||
        v >= static_cast<int>(g.nodes.size())) {
      report.push_back(num(e) + ": node index out of range");
      continue;
    }
    if (u == v) report.push_back(num(e) + ": self-loop at node " + std::to_string(u));
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second)
      report.push_back(num(e) + ": duplicate edge between nodes " +
                       std::to_string(key.first) + " and " + std::to_string(key.second));

    if (e >= g.branches.size()) continue;
    const Polyline& b = g.branches[e];
    if (b.size() < 2) {
      report.push_back(num(e) + ": branch has fewer than 2 points");
      continue;
    }
    if (distance(b.front(), g.nodes[u]) > k_endpoint_tol)
      report.push_back(num(e) + ": branch start does not coincide with node " +
                       std::to_string(u));
    if (distance(b.back(), g.nodes[v]) > k_endpoint_tol)
      report.push_back(num(e) + ": branch end does not coincide with node " +
                       std::to_string(v));
    for (std::size_t k = 0; k + 1 < b.size(); ++k)
      if (!(distance(b[k], b[k + 1]) > 0.0)) {
        report.push_back(num(e) + ": zero-length segment at index " + std::to_string(k));
        break;
      }
    if (g.dim == 2)
      for (const Vec3& p : b)
        if (p.z != 0.0) {
          report.push_back(num(e) + ": branch point has a nonzero third coordinate");
          break;
        }
  }
  return report;
}

/// Undirected adjacency list: per node, (neighbor, edge index) pairs.
inline std::vector<std::vector<std::pair<int, int>>> adjacency(const ShapeGraph& g) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.nodes.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    adj[g.edges[e].u].emplace_back(g.edges[e].v, static_cast<int>(e));
    adj[g.edges[e].v].emplace_back(g.edges[e].u, static_cast<int>(e));
  }
  return adj;
}

struct Components {
  std::vector<int> label;  // component id per node, -1 never occurs
  int count = 0;

  std::vector<std::vector<int>> groups() const {
    std::vector<std::vector<int>> out(count);
    for (std::size_t i = 0; i < label.size(); ++i) out[label[i]].push_back(static_cast<int>(i));
    return out;
  }
};

/// Partition of the node set into connected components (iterative DFS).
inline Components connected_components(const ShapeGraph& g) {
  Components comps;
  comps.label.assign(g.nodes.size(), -1);
  const auto adj = adjacency(g);
  std::vector<int> stack;
  for (std::size_t s = 0; s < g.nodes.size(); ++s) {
    if (comps.label[s] != -1) continue;
    const int c = comps.count++;
    stack.push_back(static_cast<int>(s));
    comps.label[s] = c;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& [v, e] : adj[u])
        if (comps.label[v] == -1) {
          comps.label[v] = c;
          stack.push_back(v);
        }
    }
  }
  return comps;
}

inline bool is_connected(const ShapeGraph& g) {
  return g.nodes.empty() || connected_components(g).count == 1;
}

/// Keeps only the nodes selected by `keep` (node-index predicate result),
/// dropping incident edges and remapping indices. Used by the ingest cleanup
/// passes; preserves branch geometry untouched.
inline ShapeGraph induced_subgraph(const ShapeGraph& g, const std::vector<bool>& keep) {
  ShapeGraph out;
  out.dim = g.dim;
  out.id = g.id;
  out.label = g.label;
  std::vector<int> remap(g.nodes.size(), -1);
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (keep[i]) {
      remap[i] = static_cast<int>(out.nodes.size());
      out.nodes.push_back(g.nodes[i]);
    }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const int u = remap[g.edges[e].u], v = remap[g.edges[e].v];
    if (u >= 0 && v >= 0) {
      out.edges.push_back({u, v});
      out.branches.push_back(g.branches[e]);
    }
  }
  return out;
}

}  // namespace sgmorph
