#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "sgmorph/core/shape_graph.hpp"

namespace sgmorph {

inline constexpr double k_inf = std::numeric_limits<double>::infinity();

/// Tie tolerance for comparing path lengths. Float sums of rotated
/// coordinates land within a few ulps of each other; treating them as equal
/// keeps shortest-path counts stable under rigid motions.
inline bool path_length_equal(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

struct DijkstraResult {
  std::vector<double> dist;        // k_inf if unreachable
  std::vector<double> num_paths;   // count of shortest paths (as double)
  std::vector<std::vector<int>> preds;  // predecessors along shortest paths
  std::vector<int> settled_order;  // nodes in nondecreasing distance order
};

/// Single-source Dijkstra over a weighted adjacency list, counting shortest
/// paths for betweenness accumulation.
inline DijkstraResult dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                               int source, bool track_paths = false) {
  const std::size_t n = adj.size();
  DijkstraResult r;
  r.dist.assign(n, k_inf);
  r.num_paths.assign(n, 0.0);
  if (track_paths) r.preds.assign(n, {});
  std::vector<bool> done(n, false);

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  r.dist[source] = 0.0;
  r.num_paths[source] = 1.0;
  pq.push({0.0, source});

  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = true;
    r.settled_order.push_back(u);
    for (const auto& [v, w] : adj[u]) {
      if (done[v]) continue;
      const double nd = d + w;
      if (path_length_equal(nd, r.dist[v])) {
        r.num_paths[v] += r.num_paths[u];
        if (track_paths) r.preds[v].push_back(u);
      } else if (nd < r.dist[v]) {
        r.dist[v] = nd;
        r.num_paths[v] = r.num_paths[u];
        if (track_paths) {
          r.preds[v].clear();
          r.preds[v].push_back(u);
        }
        pq.push({nd, v});
      }
    }
  }
  return r;
}

enum class PathWeight { EdgeLength, BranchLength };

/// Weighted adjacency list with the requested per-edge weight.
inline std::vector<std::vector<std::pair<int, double>>> weighted_adjacency(
    const ShapeGraph& g, PathWeight w) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.nodes.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const double len =
        w == PathWeight::EdgeLength ? edge_length(g, e) : branch_length(g, e);
    adj[g.edges[e].u].emplace_back(g.edges[e].v, len);
    adj[g.edges[e].v].emplace_back(g.edges[e].u, len);
  }
  return adj;
}

}  // namespace sgmorph
