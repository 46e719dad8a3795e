#pragma once

#include <cmath>
#include <vector>

#include "sgmorph/core/error.hpp"
#include "sgmorph/core/shape_graph.hpp"
#include "sgmorph/features/convex_hull.hpp"

namespace sgmorph {

inline double avg_branch_length(const ShapeGraph& g) {
  if (g.edges.empty())
    throw undefined_feature_error("avg_branch_length", "graph has no edges");
  return total_branch_length(g) / static_cast<double>(g.edges.size());
}

/// All polyline points of all branches, in storage order.
inline std::vector<Vec3> all_branch_points(const ShapeGraph& g) {
  std::vector<Vec3> pts;
  for (const Polyline& b : g.branches) pts.insert(pts.end(), b.begin(), b.end());
  return pts;
}

/// Total branch length divided by the Lebesgue measure (area in 2D, volume
/// in 3D) of the convex hull of every branch point.
inline double branch_density(const ShapeGraph& g) {
  if (g.edges.empty())
    throw undefined_feature_error("branch_density", "graph has no edges");
  const std::vector<Vec3> pts = all_branch_points(g);
  const double measure = g.dim == 2 ? hull_area_2d(pts) : hull_volume_3d(pts);
  if (measure <= 1e-12)
    throw degenerate_hull_error("convex hull of branch points is lower-dimensional");
  return total_branch_length(g) / measure;
}

/// Discrete bending energy of one polyline: length-normalized integral of
/// squared curvature, curvature from the centered difference of unit
/// tangents. Polylines with fewer than 3 points are flat by convention.
inline double polyline_bending_energy(const Polyline& b) {
  if (b.size() < 3) return 0.0;
  const std::size_t nseg = b.size() - 1;
  std::vector<double> seg_len(nseg);
  std::vector<Vec3> tangent(nseg);
  double total = 0.0;
  for (std::size_t k = 0; k < nseg; ++k) {
    seg_len[k] = distance(b[k], b[k + 1]);
    tangent[k] = seg_len[k] > 0.0 ? (b[k + 1] - b[k]) * (1.0 / seg_len[k]) : Vec3{};
    total += seg_len[k];
  }
  if (!(total > 0.0)) return 0.0;
  double energy = 0.0;
  for (std::size_t k = 1; k < nseg; ++k) {
    const double ds = (seg_len[k] + seg_len[k - 1]) / 2.0;
    if (!(ds > 0.0)) continue;
    const double kappa = norm(tangent[k] - tangent[k - 1]) / ds;
    energy += kappa * kappa * ds;
  }
  return energy / total;
}

/// Mean of the per-branch bending energies.
inline double bending_energy(const ShapeGraph& g) {
  if (g.edges.empty())
    throw undefined_feature_error("bending_energy", "graph has no edges");
  double sum = 0.0;
  for (const Polyline& b : g.branches) sum += polyline_bending_energy(b);
  return sum / static_cast<double>(g.branches.size());
}

/// Total branch length over total edge length (tortuosity >= 1).
inline double circuity(const ShapeGraph& g) {
  if (g.edges.empty())
    throw undefined_feature_error("circuity", "graph has no edges");
  const double le = total_edge_length(g);
  if (!(le > 0.0))
    throw undefined_feature_error("circuity", "all edges have zero length");
  return total_branch_length(g) / le;
}

}  // namespace sgmorph
