#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sgmorph/core/distance_matrix.hpp"
#include "sgmorph/core/rng.hpp"
#include "sgmorph/popstats/popstats.hpp"

namespace sgmorph {

/// Euclidean distances between normalized feature rows.
inline DistanceMatrix pairwise_feature_distances(const FeatureMatrix& m) {
  DistanceMatrix out;
  out.ids = m.ids;
  const Eigen::Index n = m.rows();
  out.values = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (m.values.row(i) - m.values.row(j)).norm();
      out.values(i, j) = out.values(j, i) = d;
    }
  return out;
}

struct Embedding2D {
  Eigen::MatrixXd points;  // n x 2
  double perplexity = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  bool perplexity_reduced = false;
  std::vector<double> kl_trace;  // objective per iteration
};

namespace detail {

/// Conditional p_{j|i} with the bandwidth binary-searched until the row
/// entropy matches log(perplexity).
inline Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& d2,
                                              double perplexity) {
  const Eigen::Index n = d2.rows();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  const double target_entropy = std::log(perplexity);
  for (Eigen::Index i = 0; i < n; ++i) {
    double beta = 1.0, beta_lo = 0.0, beta_hi = std::numeric_limits<double>::infinity();
    Eigen::VectorXd row(n);
    for (int step = 0; step < 64; ++step) {
      double sum = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        row[j] = j == i ? 0.0 : std::exp(-beta * d2(i, j));
        sum += row[j];
      }
      if (sum <= 0.0) sum = 1e-300;
      double entropy = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (row[j] <= 0.0) continue;
        const double pj = row[j] / sum;
        entropy -= pj * std::log(pj);
      }
      const double diff = entropy - target_entropy;
      if (std::abs(diff) < 1e-7) break;
      if (diff > 0.0) {  // entropy too high -> sharpen
        beta_lo = beta;
        beta = std::isinf(beta_hi) ? beta * 2.0 : (beta + beta_hi) / 2.0;
      } else {
        beta_hi = beta;
        beta = (beta + beta_lo) / 2.0;
      }
      row.setZero();
    }
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      row[j] = j == i ? 0.0 : std::exp(-beta * d2(i, j));
      sum += row[j];
    }
    if (sum <= 0.0) sum = 1e-300;
    p.row(i) = row.transpose() / sum;
  }
  return p;
}

}  // namespace detail

/// t-SNE on a precomputed distance matrix: binary-searched bandwidths,
/// symmetrized affinities, Student-t low-dimensional kernel, gradient
/// descent with early exaggeration (x12 for 250 iterations) and momentum
/// 0.5 -> 0.8. Deterministic given the seed.
inline Embedding2D tsne_embed(const DistanceMatrix& distances, double perplexity = 30.0,
                              int iterations = 1000, std::uint64_t seed = 0) {
  const Eigen::Index n = distances.values.rows();
  if (n < 4) throw std::invalid_argument("tsne_embed requires at least 4 samples");
  Embedding2D emb;
  emb.iterations = iterations;
  emb.seed = seed;
  const double max_perplexity = static_cast<double>(n - 1) / 3.0;
  if (perplexity > max_perplexity) {
    perplexity = max_perplexity;
    emb.perplexity_reduced = true;
  }
  emb.perplexity = perplexity;

  const Eigen::MatrixXd d2 = distances.values.array().square();
  Eigen::MatrixXd p = detail::conditional_affinities(d2, perplexity);
  p = (p + p.transpose()) / (2.0 * static_cast<double>(n));
  p = p.cwiseMax(1e-12);

  constexpr double exaggeration = 12.0;
  constexpr int exaggeration_iters = 250;
  constexpr double learning_rate = 200.0;

  Rng rng(seed);
  Eigen::MatrixXd y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c) y(i, c) = rng.normal(0.0, 1e-4);
  Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(n, 2);
  Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);

  Eigen::MatrixXd w(n, n), q(n, n), grad(n, 2);
  emb.kl_trace.reserve(iterations);

  for (int iter = 0; iter < iterations; ++iter) {
    const double exag = iter < exaggeration_iters ? exaggeration : 1.0;
    const double momentum = iter < exaggeration_iters ? 0.5 : 0.8;

    double qsum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      w(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double dy0 = y(i, 0) - y(j, 0), dy1 = y(i, 1) - y(j, 1);
        const double wij = 1.0 / (1.0 + dy0 * dy0 + dy1 * dy1);
        w(i, j) = w(j, i) = wij;
        qsum += 2.0 * wij;
      }
    }
    qsum = std::max(qsum, 1e-300);

    grad.setZero();
    double kl = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double qij = std::max(w(i, j) / qsum, 1e-12);
        const double mult = (exag * p(i, j) - qij) * w(i, j);
        grad(i, 0) += 4.0 * mult * (y(i, 0) - y(j, 0));
        grad(i, 1) += 4.0 * mult * (y(i, 1) - y(j, 1));
        if (j > i) kl += 2.0 * p(i, j) * std::log(p(i, j) / qij);
      }
    emb.kl_trace.push_back(kl);

    for (Eigen::Index i = 0; i < n; ++i)
      for (int c = 0; c < 2; ++c) {
        const bool same_sign = (grad(i, c) > 0.0) == (velocity(i, c) > 0.0);
        gains(i, c) = std::max(same_sign ? gains(i, c) * 0.8 : gains(i, c) + 0.2, 0.01);
        velocity(i, c) = momentum * velocity(i, c) - learning_rate * gains(i, c) * grad(i, c);
        y(i, c) += velocity(i, c);
      }
    y.rowwise() -= y.colwise().mean();
  }

  emb.points = y;
  return emb;
}

}  // namespace sgmorph
