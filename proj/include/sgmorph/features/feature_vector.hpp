#pragma once

#include <array>
#include <string>
#include <string_view>

#include "sgmorph/core/error.hpp"
#include "sgmorph/core/shape_graph.hpp"
#include "sgmorph/features/directional.hpp"
#include "sgmorph/features/fractal.hpp"
#include "sgmorph/features/geometry_features.hpp"
#include "sgmorph/features/graph_features.hpp"

namespace sgmorph {

inline constexpr int k_num_features = 19;

/// Canonical feature order; every matrix, CSV and report uses it.
inline constexpr std::array<std::string_view, k_num_features> k_feature_names = {
    "num_edges",
    "mean_betweenness",
    "spectral_entropy",
    "algebraic_connectivity",
    "assortativity",
    "graph_diameter",
    "avg_branch_length",
    "branch_density",
    "bending_energy",
    "avg_shortest_path_length",
    "circuity",
    "fractal_dimension",
    "directional_std",
    "q1",
    "q2",
    "q3",
    "q4",
    "directional_entropy",
    "orientation_order",
};

namespace feat {
enum : int {
  num_edges = 0,
  mean_betweenness,
  spectral_entropy,
  algebraic_connectivity,
  assortativity,
  graph_diameter,
  avg_branch_length,
  branch_density,
  bending_energy,
  avg_shortest_path_length,
  circuity,
  fractal_dimension,
  directional_std,
  q1,
  q2,
  q3,
  q4,
  directional_entropy,
  orientation_order,
};
}  // namespace feat

struct FeatureVector {
  std::string id;
  std::array<double, k_num_features> values{};
  std::array<bool, k_num_features> missing{};

  bool complete() const {
    for (const bool m : missing)
      if (m) return false;
    return true;
  }
};

/// Computes the full 19-entry descriptor. Undefined features raise
/// undefined_feature_error tagged with the entry name; when
/// `hull_degenerate_as_missing` is set, a lower-dimensional convex hull
/// flags branch_density as missing instead of throwing (the CLI extract
/// behavior).
inline FeatureVector feature_vector(const ShapeGraph& g,
                                    bool hull_degenerate_as_missing = false) {
  if (g.edges.empty())
    throw undefined_feature_error("feature_vector", "graph has no edges");
  FeatureVector fv;
  fv.id = g.id;
  auto& v = fv.values;

  v[feat::num_edges] = static_cast<double>(num_edges(g));
  v[feat::mean_betweenness] = mean_betweenness(g);
  v[feat::spectral_entropy] = spectral_entropy(g);
  v[feat::algebraic_connectivity] = algebraic_connectivity(g);
  v[feat::assortativity] = assortativity(g);
  v[feat::graph_diameter] = graph_diameter(g);
  v[feat::avg_branch_length] = avg_branch_length(g);
  try {
    v[feat::branch_density] = branch_density(g);
  } catch (const degenerate_hull_error&) {
    if (!hull_degenerate_as_missing) throw;
    fv.missing[feat::branch_density] = true;
  }
  v[feat::bending_energy] = bending_energy(g);
  v[feat::avg_shortest_path_length] = avg_shortest_path_length(g);
  v[feat::circuity] = circuity(g);
  v[feat::fractal_dimension] = fractal_dimension(g);

  const DirectionalDistribution dist = directional_distribution(g);
  v[feat::directional_std] = g.dim == 2 ? circular_mean_std_2d(dist).sigma
                                        : projective_mean_std_3d(dist).sigma;
  const std::array<double, 4> q = quantile_vector(dist);
  v[feat::q1] = q[0];
  v[feat::q2] = q[1];
  v[feat::q3] = q[2];
  v[feat::q4] = q[3];
  const DirectionalHistogram hist = directional_histogram(dist, /*centered=*/true);
  v[feat::directional_entropy] = directional_entropy(hist);
  v[feat::orientation_order] = orientation_order(hist);
  return fv;
}

}  // namespace sgmorph
