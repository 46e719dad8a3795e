#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmorph/core/distance_matrix.hpp"
#include "sgmorph/core/parallel.hpp"
#include "sgmorph/core/rng.hpp"
#include "sgmorph/core/shape_graph.hpp"
#include "sgmorph/gw/transport.hpp"

namespace sgmorph {

/// Node set of a shape graph as a metric measure space: pairwise Euclidean
/// node distances with uniform weights. Graphs beyond `max_nodes` are
/// uniformly subsampled (deterministically).
struct MetricMeasureSpace {
  Eigen::MatrixXd dist;
  bool subsampled = false;
};

inline MetricMeasureSpace vertex_space(const ShapeGraph& g, int max_nodes = 1500) {
  if (g.nodes.empty())
    throw std::invalid_argument("vertex_space: graph has no nodes");
  std::vector<Vec3> pts = g.nodes;
  MetricMeasureSpace space;
  if (static_cast<int>(pts.size()) > max_nodes) {
    std::vector<Vec3> kept;
    const double stride = static_cast<double>(pts.size()) / max_nodes;
    for (int k = 0; k < max_nodes; ++k)
      kept.push_back(pts[static_cast<std::size_t>(k * stride)]);
    pts = std::move(kept);
    space.subsampled = true;
  }
  const int n = static_cast<int>(pts.size());
  space.dist = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      space.dist(i, j) = space.dist(j, i) = distance(pts[i], pts[j]);
  return space;
}

struct GwResult {
  double cost = 0.0;  // squared-loss GW objective value at the returned coupling
  Eigen::MatrixXd coupling;
  int iterations = 0;
  std::vector<double> objective_trace;
};

namespace detail {

/// E(T) = c1 + c2 - 2 <A T B, T> for the squared loss with fixed uniform
/// marginals; gradient is -4 A T B.
struct GwObjective {
  const Eigen::MatrixXd& a;
  const Eigen::MatrixXd& b;
  double constant;

  GwObjective(const Eigen::MatrixXd& a_, const Eigen::MatrixXd& b_) : a(a_), b(b_) {
    const double n = static_cast<double>(a.rows());
    const double m = static_cast<double>(b.rows());
    constant = a.array().square().sum() / (n * n) + b.array().square().sum() / (m * m);
  }

  double value(const Eigen::MatrixXd& t) const {
    return constant - 2.0 * (a * t * b).cwiseProduct(t).sum();
  }
  Eigen::MatrixXd gradient(const Eigen::MatrixXd& t) const { return -4.0 * a * t * b; }
};

}  // namespace detail

/// Gromov-Wasserstein squared-loss distance between two metric measure
/// spaces via conditional gradient (Frank-Wolfe): the linearized subproblem
/// is an exact transportation solve and the step size comes from exact line
/// search on the quadratic objective, so the objective never increases.
/// `starts` > 1 adds seeded random restarts (the problem is non-convex).
inline GwResult gw_distance(const MetricMeasureSpace& a, const MetricMeasureSpace& b,
                            int max_iters = 200, double tol = 1e-7,
                            std::uint64_t seed = 0, int starts = 1) {
  const int n = static_cast<int>(a.dist.rows());
  const int m = static_cast<int>(b.dist.rows());
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / n);
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(m, 1.0 / m);
  const detail::GwObjective objective(a.dist, b.dist);

  GwResult best;
  best.cost = std::numeric_limits<double>::infinity();
  Rng rng(seed);

  for (int start = 0; start < std::max(1, starts); ++start) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Constant(n, m, 1.0 / (n * m));
    if (start > 0) {
      // random extreme point of the polytope: transport under a random cost
      Eigen::MatrixXd noise(n, m);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) noise(i, j) = rng.uniform();
      t = solve_transport(noise, p, q);
    }

    GwResult run;
    run.coupling = t;
    double value = objective.value(t);
    run.objective_trace.push_back(value);
    for (int iter = 0; iter < max_iters; ++iter) {
      const Eigen::MatrixXd grad = objective.gradient(run.coupling);
      const Eigen::MatrixXd shifted =
          (grad.array() - std::min(0.0, grad.minCoeff())).matrix();  // costs >= 0
      const Eigen::MatrixXd vertex = solve_transport(shifted, p, q);
      const Eigen::MatrixXd delta = vertex - run.coupling;

      const double linear = grad.cwiseProduct(delta).sum();
      const double quad = -2.0 * (a.dist * delta * b.dist).cwiseProduct(delta).sum();
      double alpha;
      if (quad > 0.0)
        alpha = std::clamp(-linear / (2.0 * quad), 0.0, 1.0);
      else
        alpha = (quad + linear < 0.0) ? 1.0 : 0.0;

      run.coupling += alpha * delta;
      const double next = objective.value(run.coupling);
      run.objective_trace.push_back(next);
      ++run.iterations;
      const bool converged = std::abs(value - next) <= tol * std::max(std::abs(value), 1.0);
      value = next;
      if (converged || alpha == 0.0) break;
    }
    run.cost = std::max(0.0, value);
    if (run.cost < best.cost) best = std::move(run);
  }
  return best;
}

inline GwResult gw_distance(const ShapeGraph& a, const ShapeGraph& b,
                            int max_iters = 200, double tol = 1e-7,
                            std::uint64_t seed = 0, int starts = 1) {
  return gw_distance(vertex_space(a), vertex_space(b), max_iters, tol, seed, starts);
}

/// Pairwise GW distance matrix (sqrt of the squared-loss cost), each pair
/// solved once, in parallel.
inline DistanceMatrix gw_matrix(const std::vector<ShapeGraph>& graphs,
                                int max_iters = 200, double tol = 1e-7,
                                std::uint64_t seed = 0, int starts = 1,
                                unsigned threads = 0) {
  if (graphs.size() < 2)
    throw std::invalid_argument("gw_matrix: need at least 2 graphs");
  const std::size_t n = graphs.size();
  DistanceMatrix out;
  for (const ShapeGraph& g : graphs) out.ids.push_back(g.id);
  out.values = Eigen::MatrixXd::Zero(n, n);

  std::vector<MetricMeasureSpace> spaces(n);
  parallel_for(n, [&](std::size_t i) { spaces[i] = vertex_space(graphs[i]); }, threads);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  parallel_for(
      pairs.size(),
      [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const GwResult r =
            gw_distance(spaces[i], spaces[j], max_iters, tol, seed + k, starts);
        out.values(i, j) = out.values(j, i) = std::sqrt(r.cost);
      },
      threads);
  return out;
}

}  // namespace sgmorph
