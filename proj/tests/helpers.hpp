#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// must not reuse the library's computation paths: shortest-path quantities
// are recomputed by exhaustive enumeration, transport distances by a small
// dense-simplex LP.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "sgmorph/core/rng.hpp"
#include "sgmorph/core/shape_graph.hpp"

namespace sgmorph::testing {

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 rotate_point(const Mat3& m, const Vec3& p) {
  return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
          m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
          m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
}

inline Mat3 rotation_2d(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
}

/// Rodrigues rotation about a unit axis.
inline Mat3 rotation_3d(Vec3 axis, double angle) {
  axis = normalized(axis);
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  const double x = axis.x, y = axis.y, z = axis.z;
  return {{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
           {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
           {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
}

inline Mat3 random_rotation(Rng& rng, int dim) {
  if (dim == 2) return rotation_2d(rng.uniform(0.0, 2.0 * 3.14159265358979323846));
  Vec3 axis{rng.normal(), rng.normal(), rng.normal()};
  while (norm(axis) < 1e-6) axis = {rng.normal(), rng.normal(), rng.normal()};
  return rotation_3d(axis, rng.uniform(0.0, 2.0 * 3.14159265358979323846));
}

inline ShapeGraph rigid_transform(const ShapeGraph& g, const Mat3& rot, const Vec3& t) {
  ShapeGraph out = g;
  for (Vec3& p : out.nodes) p = rotate_point(rot, p) + t;
  for (Polyline& b : out.branches)
    for (Vec3& p : b) p = rotate_point(rot, p) + t;
  if (out.dim == 2) {
    for (Vec3& p : out.nodes) p.z = 0.0;
    for (Polyline& b : out.branches)
      for (Vec3& p : b) p.z = 0.0;
  }
  return out;
}

inline ShapeGraph scaled(const ShapeGraph& g, double c) {
  ShapeGraph out = g;
  for (Vec3& p : out.nodes) p *= c;
  for (Polyline& b : out.branches)
    for (Vec3& p : b) p *= c;
  return out;
}

/// Reverses the stored direction of every branch (node pair swapped).
inline ShapeGraph reversed_branches(const ShapeGraph& g) {
  ShapeGraph out = g;
  for (std::size_t e = 0; e < out.edges.size(); ++e) {
    std::swap(out.edges[e].u, out.edges[e].v);
    std::reverse(out.branches[e].begin(), out.branches[e].end());
  }
  return out;
}

/// Midpoint-subdivides every polyline segment.
inline ShapeGraph subdivided(const ShapeGraph& g) {
  ShapeGraph out = g;
  for (Polyline& b : out.branches) {
    Polyline fine;
    fine.reserve(b.size() * 2);
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      fine.push_back(b[k]);
      fine.push_back(midpoint(b[k], b[k + 1]));
    }
    fine.push_back(b.back());
    b = std::move(fine);
  }
  return out;
}

/// Straight-branch graph from node coordinates and edges.
inline ShapeGraph straight_graph(int dim, std::vector<Vec3> nodes,
                                 std::vector<Edge> edges, std::string id = "g") {
  ShapeGraph g;
  g.dim = dim;
  g.id = std::move(id);
  g.nodes = std::move(nodes);
  g.edges = std::move(edges);
  for (const Edge& e : g.edges) g.branches.push_back({g.nodes[e.u], g.nodes[e.v]});
  return g;
}

/// Path A-B-C with unit edge lengths.
inline ShapeGraph path3_unit() {
  return straight_graph(2, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1}, {1, 2}});
}

/// Equilateral triangle with unit sides.
inline ShapeGraph unit_triangle() {
  return straight_graph(2, {{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0}},
                        {{0, 1}, {1, 2}, {2, 0}});
}

/// Unit square boundary (4 unit branches, hull area 1).
inline ShapeGraph unit_square() {
  return straight_graph(2, {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}},
                        {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

// ---------------------------------------------------------------------------
// Exhaustive shortest-path oracle for graphs with <= ~8 nodes: enumerates all
// simple paths between every node pair.

struct PathOracle {
  std::vector<std::vector<double>> dist;        // shortest distances
  std::vector<std::vector<long long>> npaths;   // counts of shortest paths
  std::vector<double> betweenness_raw;          // unnormalized, unordered pairs
};

inline PathOracle enumerate_paths(const ShapeGraph& g,
                                  const std::vector<double>& weights) {
  const int n = static_cast<int>(g.nodes.size());
  const double inf = std::numeric_limits<double>::infinity();
  PathOracle o;
  o.dist.assign(n, std::vector<double>(n, inf));
  o.npaths.assign(n, std::vector<long long>(n, 0));
  o.betweenness_raw.assign(n, 0.0);

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    adj[g.edges[e].u].emplace_back(g.edges[e].v, weights[e]);
    adj[g.edges[e].v].emplace_back(g.edges[e].u, weights[e]);
  }

  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (s >= t) continue;
      std::vector<std::vector<int>> best_paths;
      double best = inf;
      std::vector<int> path = {s};
      std::vector<bool> used(n, false);
      used[s] = true;
      // depth-first enumeration of all simple paths s -> t
      const std::function<void(int, double)> dfs = [&](int u, double len) {
        if (u == t) {
          if (len < best - 1e-12) {
            best = len;
            best_paths.clear();
          }
          if (len <= best + 1e-12) best_paths.push_back(path);
          return;
        }
        for (const auto& [v, w] : adj[u]) {
          if (used[v] || len + w > best + 1e-12) continue;
          used[v] = true;
          path.push_back(v);
          dfs(v, len + w);
          path.pop_back();
          used[v] = false;
        }
      };
      dfs(s, 0.0);
      if (best_paths.empty()) continue;
      o.dist[s][t] = o.dist[t][s] = best;
      o.npaths[s][t] = o.npaths[t][s] = static_cast<long long>(best_paths.size());
      for (const auto& p : best_paths)
        for (std::size_t i = 1; i + 1 < p.size(); ++i)
          o.betweenness_raw[p[i]] += 1.0 / static_cast<double>(best_paths.size());
    }
  return o;
}

inline double oracle_mean_betweenness(const ShapeGraph& g) {
  std::vector<double> w;
  for (std::size_t e = 0; e < g.edges.size(); ++e) w.push_back(edge_length(g, e));
  const PathOracle o = enumerate_paths(g, w);
  const int m = static_cast<int>(g.nodes.size());
  if (m < 3) return 0.0;
  double mean = 0.0;
  for (const double b : o.betweenness_raw)
    mean += b * 2.0 / (static_cast<double>(m - 1) * (m - 2));
  return mean / m;
}

inline double oracle_diameter(const ShapeGraph& g) {
  std::vector<double> w;
  for (std::size_t e = 0; e < g.edges.size(); ++e) w.push_back(edge_length(g, e));
  const PathOracle o = enumerate_paths(g, w);
  double d = 0.0;
  for (const auto& row : o.dist)
    for (const double v : row)
      if (!std::isinf(v)) d = std::max(d, v);
  return d;
}

inline double oracle_apl(const ShapeGraph& g) {
  std::vector<double> w;
  for (std::size_t e = 0; e < g.edges.size(); ++e) w.push_back(branch_length(g, e));
  const PathOracle o = enumerate_paths(g, w);
  double sum = 0.0;
  long long ordered_pairs = 0;
  for (std::size_t u = 0; u < o.dist.size(); ++u)
    for (std::size_t v = 0; v < o.dist.size(); ++v)
      if (u != v && !std::isinf(o.dist[u][v])) {
        sum += o.dist[u][v];
        ++ordered_pairs;
      }
  return ordered_pairs > 0 ? sum / static_cast<double>(ordered_pairs) : 0.0;
}

}  // namespace sgmorph::testing
