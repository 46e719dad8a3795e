#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmorph/features/feature_vector.hpp"

namespace sgmorph {

/// Samples-by-features table. Column order is the canonical feature order.
struct FeatureMatrix {
  std::vector<std::string> ids;
  std::vector<std::string> labels;  // empty, or one per row
  Eigen::MatrixXd values;           // n x k_num_features (NaN = missing)
  bool normalized = false;
  Eigen::VectorXd col_min, col_max;        // set once normalized
  std::vector<bool> constant_columns;      // flagged during normalization

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

/// Per-column min-max scaling over the whole dataset. Constant columns map
/// to 0 and are flagged. Missing entries are an error naming the sample and
/// feature.
inline FeatureMatrix normalize_features(const FeatureMatrix& m) {
  FeatureMatrix out = m;
  const Eigen::Index n = m.rows(), k = m.cols();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index f = 0; f < k; ++f)
      if (!std::isfinite(m.values(i, f)))
        throw std::invalid_argument(
            "missing feature '" + std::string(k_feature_names[f]) +
            "' for sample '" + (i < static_cast<Eigen::Index>(m.ids.size())
                                    ? m.ids[i]
                                    : std::to_string(i)) +
            "'");
  out.col_min = m.values.colwise().minCoeff();
  out.col_max = m.values.colwise().maxCoeff();
  out.constant_columns.assign(k, false);
  for (Eigen::Index f = 0; f < k; ++f) {
    const double span = out.col_max[f] - out.col_min[f];
    if (span <= 0.0) {
      out.constant_columns[f] = true;
      out.values.col(f).setZero();
    } else {
      out.values.col(f) = (m.values.col(f).array() - out.col_min[f]) / span;
    }
  }
  out.normalized = true;
  return out;
}

/// Per-feature probability histograms of one labeled group over [0,1].
struct GroupSummary {
  std::string group;
  int count = 0;
  std::vector<std::vector<double>> histograms;  // one per feature, each sums to 1
};

/// Equal-width histograms over [0,1] with a right-closed last bin, one
/// GroupSummary per distinct label (sorted). Requires a normalized matrix
/// with labels on every row.
inline std::vector<GroupSummary> group_histograms(const FeatureMatrix& m,
                                                  int bins = 20) {
  if (!m.normalized)
    throw std::invalid_argument("group_histograms requires a normalized matrix");
  if (m.labels.size() != static_cast<std::size_t>(m.rows()))
    throw std::invalid_argument("group_histograms requires one label per row");
  if (bins < 1) throw std::invalid_argument("bins must be positive");

  std::map<std::string, std::vector<Eigen::Index>> by_label;
  for (Eigen::Index i = 0; i < m.rows(); ++i) by_label[m.labels[i]].push_back(i);

  std::vector<GroupSummary> out;
  for (const auto& [label, rows] : by_label) {
    if (rows.empty()) throw std::invalid_argument("empty group '" + label + "'");
    GroupSummary gs;
    gs.group = label;
    gs.count = static_cast<int>(rows.size());
    gs.histograms.assign(m.cols(), std::vector<double>(bins, 0.0));
    for (const Eigen::Index i : rows)
      for (Eigen::Index f = 0; f < m.cols(); ++f) {
        const int b = std::clamp(static_cast<int>(m.values(i, f) * bins), 0, bins - 1);
        gs.histograms[f][b] += 1.0;
      }
    for (auto& h : gs.histograms)
      for (double& v : h) v /= gs.count;
    out.push_back(std::move(gs));
  }
  return out;
}

/// 1-Wasserstein distance between two histograms on the same equal-width
/// binning of [0,1]: bin width times the summed absolute CDF differences.
inline double wasserstein1(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("wasserstein1: histogram binning mismatch");
  const double width = 1.0 / static_cast<double>(a.size());
  double cdf_a = 0.0, cdf_b = 0.0, w = 0.0;
  for (std::size_t k = 0; k + 1 < a.size(); ++k) {
    cdf_a += a[k];
    cdf_b += b[k];
    w += std::abs(cdf_a - cdf_b);
  }
  return w * width;
}

/// Average ranks with ties sharing their mean rank.
inline std::vector<double> average_ranks(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return x[a] < x[b]; });
  std::vector<double> rank(n, 0.0);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i) + j) / 2.0 + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) rank[order[k]] = mean_rank;
    i = j + 1;
  }
  return rank;
}

/// Spearman rank correlations between feature columns; symmetric with unit
/// diagonal, constant columns correlating 0 with everything else.
struct CorrelationMatrix {
  Eigen::MatrixXd values;
};

inline CorrelationMatrix spearman_matrix(const FeatureMatrix& m) {
  const Eigen::Index n = m.rows(), k = m.cols();
  if (n < 3) throw std::invalid_argument("spearman_matrix requires >= 3 samples");
  Eigen::MatrixXd ranks(n, k);
  for (Eigen::Index f = 0; f < k; ++f) {
    const std::vector<double> r = average_ranks(m.values.col(f));
    for (Eigen::Index i = 0; i < n; ++i) ranks(i, f) = r[i];
  }
  CorrelationMatrix out;
  out.values = Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd mean = ranks.colwise().mean();
  Eigen::MatrixXd centered = ranks.rowwise() - mean.transpose();
  Eigen::VectorXd sd = centered.colwise().norm();
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = a + 1; b < k; ++b) {
      double rho = 0.0;
      if (sd[a] > 1e-12 && sd[b] > 1e-12)
        rho = centered.col(a).dot(centered.col(b)) / (sd[a] * sd[b]);
      out.values(a, b) = out.values(b, a) = std::clamp(rho, -1.0, 1.0);
    }
  return out;
}

/// Aggregated morphological distance between two groups: per-feature W1
/// distances d combined as MD^2 = d'Rd - (1/2N) d'|R-I|d, clamped at zero
/// (`clamped` reports when that fires); R=I reduces it to sqrt(sum d^2).
inline double morphological_distance(const GroupSummary& p, const GroupSummary& q,
                                     const CorrelationMatrix& correlation,
                                     bool* clamped = nullptr) {
  const std::size_t nf = p.histograms.size();
  if (q.histograms.size() != nf ||
      correlation.values.rows() != static_cast<Eigen::Index>(nf))
    throw std::invalid_argument("morphological_distance: dimension mismatch");
  Eigen::VectorXd d(nf);
  for (std::size_t f = 0; f < nf; ++f)
    d[f] = wasserstein1(p.histograms[f], q.histograms[f]);
  const Eigen::MatrixXd& r = correlation.values;
  const Eigen::MatrixXd penalty =
      (r - Eigen::MatrixXd::Identity(nf, nf)).cwiseAbs();
  const double md2 = d.dot(r * d) - d.dot(penalty * d) / (2.0 * static_cast<double>(nf));
  if (clamped) *clamped = md2 < 0.0;
  return std::sqrt(std::max(md2, 0.0));
}

/// Pair-counting Adjusted Rand Index between two equal-length labelings.
/// Degenerate cases where both partitions are trivial return 1.
template <typename Label>
double adjusted_rand_index(const std::vector<Label>& a, const std::vector<Label>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("adjusted_rand_index: length mismatch");
  if (a.size() < 2)
    throw std::invalid_argument("adjusted_rand_index: need at least 2 samples");
  std::map<std::pair<Label, Label>, long long> joint;
  std::map<Label, long long> ca, cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}]++;
    ca[a[i]]++;
    cb[b[i]]++;
  }
  const auto comb2 = [](long long x) {
    return static_cast<double>(x) * (x - 1) / 2.0;
  };
  double sum_joint = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [k, v] : joint) sum_joint += comb2(v);
  for (const auto& [k, v] : ca) sum_a += comb2(v);
  for (const auto& [k, v] : cb) sum_b += comb2(v);
  const double total = comb2(static_cast<long long>(a.size()));
  const double expected = sum_a * sum_b / total;
  const double max_index = (sum_a + sum_b) / 2.0;
  const double denom = max_index - expected;
  if (std::abs(denom) < 1e-15) return 1.0;
  return (sum_joint - expected) / denom;
}

}  // namespace sgmorph
