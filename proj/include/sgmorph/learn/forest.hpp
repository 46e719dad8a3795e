#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmorph/core/rng.hpp"

namespace sgmorph {

namespace detail {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  double positive_fraction = 0.0;  // leaf payload
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  double predict(const Eigen::RowVectorXd& x) const {
    int at = 0;
    while (nodes[at].feature >= 0)
      at = x[nodes[at].feature] <= nodes[at].threshold ? nodes[at].left
                                                       : nodes[at].right;
    return nodes[at].positive_fraction;
  }
};

inline double gini(double positives, double count) {
  if (count <= 0.0) return 0.0;
  const double p = positives / count;
  return 2.0 * p * (1.0 - p);
}

/// Grows one Gini CART on a bootstrap sample. `importance` accumulates the
/// node-weighted impurity decrease per feature (MDI).
class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const std::vector<int>& y, int mtry,
              int max_depth, Rng& rng, Eigen::VectorXd& importance)
      : x_(x), y_(y), mtry_(mtry), max_depth_(max_depth), rng_(rng),
        importance_(importance), root_count_(0.0) {}

  DecisionTree build(const std::vector<int>& sample_rows) {
    root_count_ = static_cast<double>(sample_rows.size());
    tree_.nodes.clear();
    std::vector<int> rows = sample_rows;
    grow(rows, 0);
    return tree_;
  }

 private:
  int grow(std::vector<int>& rows, int depth) {
    const int node_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double positives = 0.0;
    for (const int r : rows) positives += y_[r];
    const double count = static_cast<double>(rows.size());
    tree_.nodes[node_id].positive_fraction = positives / count;

    const bool pure = positives == 0.0 || positives == count;
    if (pure || rows.size() < 2 || (max_depth_ > 0 && depth >= max_depth_))
      return node_id;

    // Shuffled feature order; the best midpoint threshold by Gini over the
    // first mtry candidates, continuing past mtry until some valid split is
    // found (the usual CART splitter rule, so constant features cannot turn
    // a splittable node into a stump).
    std::vector<int> features(x_.cols());
    std::iota(features.begin(), features.end(), 0);
    for (std::size_t i = 0; i + 1 < features.size(); ++i) {
      const int j =
          static_cast<int>(i + rng_.uniform_int(features.size() - i));
      std::swap(features[i], features[j]);
    }

    const double parent_impurity = gini(positives, count);
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    int inspected = 0;
    std::vector<std::pair<double, int>> sorted;
    for (const int f : features) {
      if (inspected >= mtry_ && best_feature >= 0) break;
      ++inspected;
      sorted.clear();
      for (const int r : rows) sorted.emplace_back(x_(r, f), y_[r]);
      std::sort(sorted.begin(), sorted.end());
      double left_pos = 0.0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        left_pos += sorted[i].second;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const double left_n = static_cast<double>(i + 1);
        const double right_n = count - left_n;
        const double right_pos = positives - left_pos;
        const double child_impurity = (left_n * gini(left_pos, left_n) +
                                       right_n * gini(right_pos, right_n)) /
                                      count;
        const double gain = parent_impurity - child_impurity;
        if (gain > best_gain + 1e-15) {
          best_gain = gain;
          best_feature = f;
          best_threshold = (sorted[i].first + sorted[i + 1].first) / 2.0;
        }
      }
    }
    if (best_feature < 0) return node_id;

    std::vector<int> left_rows, right_rows;
    for (const int r : rows) {
      if (x_(r, best_feature) <= best_threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    if (left_rows.empty() || right_rows.empty()) return node_id;

    importance_[best_feature] += count / root_count_ * best_gain;
    tree_.nodes[node_id].feature = best_feature;
    tree_.nodes[node_id].threshold = best_threshold;
    rows.clear();
    rows.shrink_to_fit();
    tree_.nodes[node_id].left = grow(left_rows, depth + 1);
    tree_.nodes[node_id].right = grow(right_rows, depth + 1);
    return node_id;
  }

  const Eigen::MatrixXd& x_;
  const std::vector<int>& y_;
  int mtry_;
  int max_depth_;
  Rng& rng_;
  Eigen::VectorXd& importance_;
  double root_count_;
  DecisionTree tree_;
};

struct BinaryForest {
  std::vector<DecisionTree> trees;
  Eigen::VectorXd importances;  // MDI, sums to 1 unless no split happened

  /// Fraction of trees voting positive.
  double vote_fraction(const Eigen::RowVectorXd& x) const {
    double votes = 0.0;
    for (const DecisionTree& t : trees)
      if (t.predict(x) > 0.5) votes += 1.0;
    return votes / static_cast<double>(trees.size());
  }
};

}  // namespace detail

/// One-versus-rest random forest: one bagged Gini-CART forest per class,
/// sqrt(#features) random candidates per split, prediction by the largest
/// positive-vote fraction with ties going to the first class in sorted
/// order. Fully deterministic given the seed.
struct ForestModel {
  std::vector<std::string> classes;  // sorted
  std::vector<detail::BinaryForest> forests;
  int trees = 0;
  int max_depth = 0;  // 0 = unlimited
  int feature_subset = 0;
  std::uint64_t seed = 0;

  int predict_index(const Eigen::RowVectorXd& x) const {
    int best = 0;
    double best_votes = -1.0;
    for (std::size_t c = 0; c < forests.size(); ++c) {
      const double v = forests[c].vote_fraction(x);
      if (v > best_votes) {
        best_votes = v;
        best = static_cast<int>(c);
      }
    }
    return best;
  }

  std::vector<std::string> predict(const Eigen::MatrixXd& x) const {
    std::vector<std::string> out;
    out.reserve(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      out.push_back(classes[predict_index(x.row(i))]);
    return out;
  }
};

inline ForestModel train_random_forest_ovr(const Eigen::MatrixXd& x,
                                           const std::vector<std::string>& labels,
                                           int trees = 100, int max_depth = 0,
                                           std::uint64_t seed = 0) {
  const Eigen::Index n = x.rows();
  if (labels.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("train_random_forest_ovr: one label per row required");
  const std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2)
    throw std::invalid_argument("train_random_forest_ovr: need at least 2 classes");

  ForestModel model;
  model.classes.assign(distinct.begin(), distinct.end());
  model.trees = trees;
  model.max_depth = max_depth;
  model.feature_subset =
      std::max(1, static_cast<int>(std::sqrt(static_cast<double>(x.cols()))));
  model.seed = seed;

  Rng root_rng(seed);
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    std::vector<int> y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = labels[i] == model.classes[c] ? 1 : 0;

    detail::BinaryForest forest;
    forest.importances = Eigen::VectorXd::Zero(x.cols());
    Rng class_rng = root_rng.derive(c);
    for (int t = 0; t < trees; ++t) {
      Rng tree_rng = class_rng.derive(t);
      std::vector<int> bootstrap(n);
      for (Eigen::Index i = 0; i < n; ++i)
        bootstrap[i] = static_cast<int>(tree_rng.uniform_int(n));
      Eigen::VectorXd tree_importance = Eigen::VectorXd::Zero(x.cols());
      detail::TreeBuilder builder(x, y, model.feature_subset, max_depth, tree_rng,
                                  tree_importance);
      forest.trees.push_back(builder.build(bootstrap));
      const double total = tree_importance.sum();
      if (total > 0.0) forest.importances += tree_importance / total;
    }
    forest.importances /= static_cast<double>(trees);
    const double sum = forest.importances.sum();
    if (sum > 0.0) forest.importances /= sum;
    model.forests.push_back(std::move(forest));
  }
  return model;
}

/// Features ranked by MDI importance averaged over the per-class forests,
/// descending; ties keep canonical feature order.
inline std::vector<std::pair<int, double>> mdi_ranking(const ForestModel& model) {
  const Eigen::Index k = model.forests.empty() ? 0 : model.forests[0].importances.size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(k);
  for (const detail::BinaryForest& f : model.forests) mean += f.importances;
  if (!model.forests.empty()) mean /= static_cast<double>(model.forests.size());
  std::vector<std::pair<int, double>> ranked;
  for (Eigen::Index f = 0; f < k; ++f) ranked.emplace_back(static_cast<int>(f), mean[f]);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked;
}

}  // namespace sgmorph
