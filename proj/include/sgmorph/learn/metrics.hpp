#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmorph/learn/forest.hpp"
#include "sgmorph/learn/smote.hpp"

namespace sgmorph {

struct ClassMetrics {
  long long tp = 0, fp = 0, tn = 0, fn = 0;
  double sensitivity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;  // one-vs-rest binary accuracy for this class
  bool precision_degenerate = false;  // no positive predictions
  bool sensitivity_degenerate = false;  // no positive truths
};

struct ClassReport {
  std::vector<std::string> classes;
  std::vector<ClassMetrics> per_class;
  double overall_accuracy = 0.0;
};

/// One-vs-rest confusion counts and the usual binary rates per class, plus
/// the multiclass correct fraction. Degenerate ratios (0/0) report 0 with a
/// flag.
inline ClassReport evaluate(const ForestModel& model, const Eigen::MatrixXd& x,
                            const std::vector<std::string>& truth) {
  if (truth.size() != static_cast<std::size_t>(x.rows()))
    throw std::invalid_argument("evaluate: one truth label per row required");
  for (const std::string& t : truth)
    if (std::find(model.classes.begin(), model.classes.end(), t) ==
        model.classes.end())
      throw std::invalid_argument("evaluate: unknown class '" + t + "'");

  const std::vector<std::string> predicted = model.predict(x);
  ClassReport report;
  report.classes = model.classes;
  long long correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (predicted[i] == truth[i]) ++correct;
  report.overall_accuracy = static_cast<double>(correct) / truth.size();

  for (const std::string& cls : model.classes) {
    ClassMetrics m;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool is_pos = truth[i] == cls;
      const bool said_pos = predicted[i] == cls;
      if (is_pos && said_pos) ++m.tp;
      else if (!is_pos && said_pos) ++m.fp;
      else if (is_pos && !said_pos) ++m.fn;
      else ++m.tn;
    }
    if (m.tp + m.fn > 0)
      m.sensitivity = static_cast<double>(m.tp) / (m.tp + m.fn);
    else
      m.sensitivity_degenerate = true;
    if (m.tp + m.fp > 0)
      m.precision = static_cast<double>(m.tp) / (m.tp + m.fp);
    else
      m.precision_degenerate = true;
    if (m.precision + m.sensitivity > 0)
      m.f1 = 2.0 * m.precision * m.sensitivity / (m.precision + m.sensitivity);
    m.accuracy = static_cast<double>(m.tp + m.tn) / truth.size();
    report.per_class.push_back(m);
  }
  return report;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& values) {
  MeanStd ms;
  if (values.empty()) return ms;
  for (const double v : values) ms.mean += v;
  ms.mean /= values.size();
  for (const double v : values) ms.std += (v - ms.mean) * (v - ms.mean);
  ms.std = std::sqrt(ms.std / values.size());
  return ms;
}

struct AggregatedClassMetrics {
  MeanStd sensitivity, precision, f1, accuracy;
};

/// Repeated-split evaluation summary: per-class and overall mean +- std
/// across runs, plus MDI importances averaged the same way.
struct AggregatedReport {
  std::vector<std::string> classes;
  std::vector<AggregatedClassMetrics> per_class;
  MeanStd overall_accuracy;
  std::vector<MeanStd> importances;  // per feature, canonical order
  std::vector<ClassReport> runs;
  double train_fraction = 0.0;
  int num_runs = 0;
  std::uint64_t seed = 0;
  int trees = 0;
  int max_depth = 0;
  bool oversampled = false;
};

/// Stratified random 70/30-style splits with per-run derived seeds; the
/// training fold is oversampled (SMOTE-center) when requested, test folds
/// are never touched. Train folds always contain every class by
/// construction; should a split come out degenerate it is redrawn a bounded
/// number of times.
inline AggregatedReport split_runs(const Eigen::MatrixXd& x,
                                   const std::vector<std::string>& labels,
                                   double train_frac = 0.7, int runs = 10,
                                   std::uint64_t seed = 0, int trees = 100,
                                   int max_depth = 0, bool oversample = true) {
  const Eigen::Index n = x.rows();
  if (labels.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("split_runs: one label per row required");
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw std::invalid_argument("split_runs: train fraction must be in (0,1)");

  std::map<std::string, std::vector<int>> by_class;
  for (Eigen::Index i = 0; i < n; ++i) by_class[labels[i]].push_back(static_cast<int>(i));
  if (by_class.size() < 2)
    throw std::invalid_argument("split_runs: need at least 2 classes");
  const std::size_t min_train = oversample ? 2 : 1;
  for (const auto& [cls, rows] : by_class) {
    const auto train_count = static_cast<std::size_t>(train_frac * rows.size());
    if (train_count < min_train || train_count >= rows.size())
      throw std::invalid_argument("split_runs: class '" + cls +
                                  "' too small for a stratified split");
  }

  AggregatedReport agg;
  agg.train_fraction = train_frac;
  agg.num_runs = runs;
  agg.seed = seed;
  agg.trees = trees;
  agg.max_depth = max_depth;
  agg.oversampled = oversample;

  std::vector<Eigen::VectorXd> run_importances;
  for (int run = 0; run < runs; ++run) {
    Rng rng = Rng(seed).derive(run);
    std::vector<int> train_rows, test_rows;
    for (int attempt = 0; attempt < 16; ++attempt) {
      train_rows.clear();
      test_rows.clear();
      for (const auto& [cls, rows] : by_class) {
        std::vector<int> shuffled = rows;
        rng.shuffle(shuffled);
        const auto cut = static_cast<std::size_t>(train_frac * shuffled.size());
        train_rows.insert(train_rows.end(), shuffled.begin(), shuffled.begin() + cut);
        test_rows.insert(test_rows.end(), shuffled.begin() + cut, shuffled.end());
      }
      std::set<std::string> seen;
      for (const int r : train_rows) seen.insert(labels[r]);
      if (seen.size() == by_class.size()) break;
      if (attempt == 15)
        throw std::runtime_error("split_runs: could not draw a usable split");
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());

    Eigen::MatrixXd train_x(train_rows.size(), x.cols());
    std::vector<std::string> train_y;
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      train_x.row(i) = x.row(train_rows[i]);
      train_y.push_back(labels[train_rows[i]]);
    }
    Eigen::MatrixXd test_x(test_rows.size(), x.cols());
    std::vector<std::string> test_y;
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      test_x.row(i) = x.row(test_rows[i]);
      test_y.push_back(labels[test_rows[i]]);
    }

    if (oversample) {
      const OversampledSet os =
          smote_center_oversample(train_x, train_y, Rng(seed).derive(1000 + run).next());
      train_x = os.values;
      train_y = os.labels;
    }

    const ForestModel model = train_random_forest_ovr(
        train_x, train_y, trees, max_depth, Rng(seed).derive(2000 + run).next());
    agg.runs.push_back(evaluate(model, test_x, test_y));
    if (agg.classes.empty()) agg.classes = model.classes;

    Eigen::VectorXd imp = Eigen::VectorXd::Zero(x.cols());
    for (const auto& [f, v] : mdi_ranking(model)) imp[f] = v;
    run_importances.push_back(imp);
  }

  // aggregate across runs
  agg.per_class.resize(agg.classes.size());
  for (std::size_t c = 0; c < agg.classes.size(); ++c) {
    std::vector<double> s, p, f1, acc;
    for (const ClassReport& r : agg.runs) {
      s.push_back(r.per_class[c].sensitivity);
      p.push_back(r.per_class[c].precision);
      f1.push_back(r.per_class[c].f1);
      acc.push_back(r.per_class[c].accuracy);
    }
    agg.per_class[c] = {mean_std(s), mean_std(p), mean_std(f1), mean_std(acc)};
  }
  std::vector<double> overall;
  for (const ClassReport& r : agg.runs) overall.push_back(r.overall_accuracy);
  agg.overall_accuracy = mean_std(overall);

  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    std::vector<double> vals;
    for (const Eigen::VectorXd& imp : run_importances) vals.push_back(imp[f]);
    agg.importances.push_back(mean_std(vals));
  }
  return agg;
}

}  // namespace sgmorph
