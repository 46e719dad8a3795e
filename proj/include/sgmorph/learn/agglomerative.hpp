#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sgmorph {

namespace detail {

/// Ward cluster-pair cost via the centroid shortcut:
/// |A||B|/(|A|+|B|) * ||centroid_A - centroid_B||^2.
inline double ward_cost(double size_a, const Eigen::RowVectorXd& ca, double size_b,
                        const Eigen::RowVectorXd& cb) {
  return size_a * size_b / (size_a + size_b) * (ca - cb).squaredNorm();
}

struct Merge {
  int a, b;       // cluster slots at merge time
  int product;    // slot of the merged cluster
  double height;  // Ward cost
};

}  // namespace detail

/// Ward-linkage agglomerative clustering cut at k clusters, via the
/// nearest-neighbor-chain algorithm (exact for Ward). Labels are compacted
/// in order of first appearance, so output is deterministic.
inline std::vector<int> agglomerative_cluster(const Eigen::MatrixXd& points, int k) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n)
    throw std::invalid_argument("agglomerative_cluster: k out of range");
  if (k == n) {
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return labels;
  }

  // cluster slots 0..2n-2: originals then merge products
  std::vector<double> size(2 * n - 1, 0.0);
  std::vector<Eigen::RowVectorXd> centroid(2 * n - 1);
  std::vector<bool> active(2 * n - 1, false);
  for (int i = 0; i < n; ++i) {
    size[i] = 1.0;
    centroid[i] = points.row(i);
    active[i] = true;
  }
  int next_slot = n;

  std::vector<detail::Merge> merges;
  merges.reserve(n - 1);
  std::vector<int> chain;
  chain.reserve(n);

  while (static_cast<int>(merges.size()) < n - 1) {
    if (chain.empty()) {
      for (int i = 0; i < 2 * n - 1; ++i)
        if (active[i]) {
          chain.push_back(i);
          break;
        }
    }
    while (true) {
      const int tip = chain.back();
      int nearest = -1;
      double best = std::numeric_limits<double>::infinity();
      const int prev = chain.size() >= 2 ? chain[chain.size() - 2] : -1;
      for (int j = 0; j < 2 * n - 1; ++j) {
        if (!active[j] || j == tip) continue;
        const double d = detail::ward_cost(size[tip], centroid[tip], size[j], centroid[j]);
        if (d < best || (d == best && j == prev)) {  // prefer reciprocal ties
          best = d;
          nearest = j;
        }
      }
      if (nearest == prev && prev != -1) {
        merges.push_back({prev, tip, next_slot, best});
        active[prev] = active[tip] = false;
        const double s = size[prev] + size[tip];
        centroid[next_slot] =
            (size[prev] * centroid[prev] + size[tip] * centroid[tip]) / s;
        size[next_slot] = s;
        active[next_slot] = true;
        ++next_slot;
        chain.pop_back();
        chain.pop_back();
        break;
      }
      chain.push_back(nearest);
    }
  }

  // Sort merges by height (valid dendrogram order for reducible linkages)
  // and replay the first n-k of them through a union-find.
  std::stable_sort(merges.begin(), merges.end(),
                   [](const detail::Merge& x, const detail::Merge& y) {
                     return x.height < y.height;
                   });
  std::vector<int> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  const std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int m = 0; m < n - k; ++m) {
    const int ra = find(merges[m].a), rb = find(merges[m].b);
    const int root = std::min(ra, rb);
    parent[std::max(ra, rb)] = root;
    parent[find(merges[m].product)] = root;  // later merges reference the slot
  }

  std::vector<int> labels(n, -1);
  std::vector<int> relabel(2 * n - 1, -1);
  int next_label = 0;
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (relabel[root] < 0) relabel[root] = next_label++;
    labels[i] = relabel[root];
  }
  return labels;
}

}  // namespace sgmorph
