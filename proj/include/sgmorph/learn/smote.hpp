#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmorph/core/rng.hpp"

namespace sgmorph {

struct OversampledSet {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;
  int synthetic_from = 0;  // rows at or past this index are synthetic
};

/// Center-anchored SMOTE variant: every class is upsampled to the majority
/// count with synthetic points drawn near the class centroid, each
/// coordinate within sigma0/3 of it (sigma0 = per-feature class standard
/// deviation). Draws are centroid + r * (z .* sigma0/3) with z uniform in
/// [-1,1]^d and r uniform in [0,1], clipped to [0,1] per feature. Original
/// rows are kept untouched.
inline OversampledSet smote_center_oversample(const Eigen::MatrixXd& x,
                                              const std::vector<std::string>& labels,
                                              std::uint64_t seed) {
  const Eigen::Index n = x.rows(), k = x.cols();
  if (labels.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("smote_center_oversample: one label per row required");

  std::map<std::string, std::vector<Eigen::Index>> by_class;
  for (Eigen::Index i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
  std::size_t majority = 0;
  for (const auto& [cls, rows] : by_class) {
    if (rows.size() < 2)
      throw std::invalid_argument("class '" + cls + "' has fewer than 2 samples");
    majority = std::max(majority, rows.size());
  }

  std::size_t total = n;
  for (const auto& [cls, rows] : by_class) total += majority - rows.size();

  OversampledSet out;
  out.values.resize(total, k);
  out.values.topRows(n) = x;
  out.labels = labels;
  out.synthetic_from = static_cast<int>(n);

  Rng rng(seed);
  Eigen::Index cursor = n;
  for (const auto& [cls, rows] : by_class) {
    if (rows.size() == majority) continue;
    Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(k);
    for (const Eigen::Index i : rows) centroid += x.row(i);
    centroid /= static_cast<double>(rows.size());
    Eigen::RowVectorXd sigma = Eigen::RowVectorXd::Zero(k);
    for (const Eigen::Index i : rows)
      sigma += (x.row(i) - centroid).array().square().matrix();
    sigma = (sigma / static_cast<double>(rows.size())).array().sqrt();

    for (std::size_t add = rows.size(); add < majority; ++add) {
      const double radius = rng.uniform();
      for (Eigen::Index f = 0; f < k; ++f) {
        const double z = rng.uniform(-1.0, 1.0);
        const double v = centroid[f] + radius * z * sigma[f] / 3.0;
        out.values(cursor, f) = std::clamp(v, 0.0, 1.0);
      }
      out.labels.push_back(cls);
      ++cursor;
    }
  }
  return out;
}

}  // namespace sgmorph
