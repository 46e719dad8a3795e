#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "sgmorph/core/error.hpp"
#include "sgmorph/core/shape_graph.hpp"
#include "sgmorph/features/shortest_paths.hpp"

namespace sgmorph {

inline std::size_t num_edges(const ShapeGraph& g) { return g.edges.size(); }

/// Laplacian L = D - A with A_ij the straight edge length, plus its sorted
/// eigenvalue spectrum (ascending, clipped at zero).
struct WeightedLaplacian {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;
};

inline WeightedLaplacian weighted_laplacian(const ShapeGraph& g) {
  const int m = static_cast<int>(g.nodes.size());
  WeightedLaplacian lap;
  lap.matrix = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const int u = g.edges[e].u, v = g.edges[e].v;
    const double w = edge_length(g, e);
    lap.matrix(u, v) -= w;
    lap.matrix(v, u) -= w;
    lap.matrix(u, u) += w;
    lap.matrix(v, v) += w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.matrix);
  lap.eigenvalues = solver.eigenvalues().cwiseMax(0.0);
  return lap;
}

/// Mean of node betweenness centrality, shortest paths weighted by edge
/// length, normalized by 1/((M-1)(M-2)) over ordered source-target pairs
/// (the networkx convention for undirected graphs).
inline double mean_betweenness(const ShapeGraph& g) {
  const int m = static_cast<int>(g.nodes.size());
  if (m < 3) return 0.0;
  const auto adj = weighted_adjacency(g, PathWeight::EdgeLength);
  std::vector<double> centrality(m, 0.0);
  std::vector<double> delta(m);
  for (int s = 0; s < m; ++s) {
    const DijkstraResult r = dijkstra(adj, s, /*track_paths=*/true);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = r.settled_order.rbegin(); it != r.settled_order.rend(); ++it) {
      const int w = *it;
      for (const int p : r.preds[w])
        delta[p] += r.num_paths[p] / r.num_paths[w] * (1.0 + delta[w]);
      if (w != s) centrality[w] += delta[w];
    }
  }
  const double scale = 1.0 / (static_cast<double>(m - 1) * (m - 2));
  double sum = 0.0;
  for (double c : centrality) sum += c * scale;
  return sum / m;
}

/// Shannon entropy of the normalized Laplacian spectrum (natural log).
inline double spectral_entropy(const ShapeGraph& g) {
  if (g.edges.empty())
    throw undefined_feature_error("spectral_entropy", "graph has no edges");
  const WeightedLaplacian lap = weighted_laplacian(g);
  const double trace = lap.eigenvalues.sum();
  if (!(trace > 0.0)) return 0.0;  // all edges zero-length
  double h = 0.0;
  for (int k = 0; k < lap.eigenvalues.size(); ++k) {
    const double p = lap.eigenvalues[k] / trace;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

/// Second-smallest Laplacian eigenvalue; exactly zero for disconnected graphs.
inline double algebraic_connectivity(const ShapeGraph& g) {
  if (g.nodes.size() < 2)
    throw undefined_feature_error("algebraic_connectivity",
                                  "graph has fewer than 2 nodes");
  if (connected_components(g).count > 1) return 0.0;
  const WeightedLaplacian lap = weighted_laplacian(g);
  return lap.eigenvalues[1];
}

/// Pearson correlation of endpoint strengths over edges, symmetrized; the
/// strength of a node is the summed length of its incident edges. Returns 0
/// when strengths are (numerically) constant.
inline double assortativity(const ShapeGraph& g) {
  const std::size_t ne = g.edges.size();
  if (ne < 2)
    throw undefined_feature_error("assortativity", "graph has fewer than 2 edges");
  std::vector<double> strength(g.nodes.size(), 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    const double len = edge_length(g, e);
    strength[g.edges[e].u] += len;
    strength[g.edges[e].v] += len;
  }
  double sum_xy = 0.0, sum_mean = 0.0, sum_sq = 0.0;
  for (const Edge& e : g.edges) {
    const double x = strength[e.u], y = strength[e.v];
    sum_xy += x * y;
    sum_mean += (x + y) / 2.0;
    sum_sq += (x * x + y * y) / 2.0;
  }
  const double inv = 1.0 / static_cast<double>(ne);
  const double mean = sum_mean * inv;
  const double numerator = sum_xy * inv - mean * mean;
  const double denominator = sum_sq * inv - mean * mean;
  if (denominator < 1e-12) return 0.0;
  return numerator / denominator;
}

/// Largest edge-length-weighted shortest-path distance between reachable
/// node pairs (max over components when disconnected).
inline double graph_diameter(const ShapeGraph& g) {
  if (g.nodes.empty())
    throw undefined_feature_error("graph_diameter", "graph has no nodes");
  const auto adj = weighted_adjacency(g, PathWeight::EdgeLength);
  double diam = 0.0;
  for (std::size_t s = 0; s < g.nodes.size(); ++s) {
    const DijkstraResult r = dijkstra(adj, static_cast<int>(s));
    for (double d : r.dist)
      if (d != k_inf && d > diam) diam = d;
  }
  return diam;
}

/// Mean branch-length-weighted shortest-path distance over ordered reachable
/// node pairs.
inline double avg_shortest_path_length(const ShapeGraph& g) {
  if (g.nodes.size() < 2)
    throw undefined_feature_error("avg_shortest_path_length",
                                  "graph has fewer than 2 nodes");
  const auto adj = weighted_adjacency(g, PathWeight::BranchLength);
  double sum = 0.0;
  long long pairs = 0;
  for (std::size_t s = 0; s < g.nodes.size(); ++s) {
    const DijkstraResult r = dijkstra(adj, static_cast<int>(s));
    for (std::size_t t = 0; t < g.nodes.size(); ++t) {
      if (t == s || r.dist[t] == k_inf) continue;
      sum += r.dist[t];
      ++pairs;
    }
  }
  return pairs > 0 ? sum / static_cast<double>(pairs) : 0.0;
}

}  // namespace sgmorph
