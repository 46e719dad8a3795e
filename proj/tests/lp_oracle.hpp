#pragma once

// Tiny dense two-phase simplex, used as an independent oracle for optimal
// transport values. Bland's rule, so it terminates; only meant for the
// hand-sized LPs in the tests.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sgmorph::testing {

/// Minimizes c.x subject to A x = b, x >= 0 (b must be nonnegative).
inline double solve_lp_equality(std::vector<std::vector<double>> a,
                                std::vector<double> b, std::vector<double> c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0) {
      for (double& v : a[i]) v = -v;
      b[i] = -b[i];
    }

  // Tableau with artificial variables appended; phase 1 drives them to zero.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][cols - 1] = b[i];
    basis[i] = n + i;
  }

  const auto pivot = [&](std::size_t row, std::size_t col) {
    const double p = t[row][col];
    for (double& v : t[row]) v /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == row || t[i][col] == 0.0) continue;
      const double f = t[i][col];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[row][j];
    }
    basis[row] = col;
  };

  const auto run_simplex = [&](std::size_t usable_cols) {
    while (true) {
      std::size_t col = usable_cols;
      for (std::size_t j = 0; j < usable_cols; ++j)  // Bland: first negative
        if (t[m][j] < -1e-9) {
          col = j;
          break;
        }
      if (col == usable_cols) return;
      std::size_t row = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i)
        if (t[i][col] > 1e-12) {
          const double ratio = t[i][cols - 1] / t[i][col];
          if (ratio < best - 1e-12 || (ratio < best + 1e-12 && (row == m || basis[i] < basis[row]))) {
            best = ratio;
            row = i;
          }
        }
      if (row == m) throw std::runtime_error("lp oracle: unbounded");
      pivot(row, col);
    }
  };

  // Phase 1: minimize the sum of artificial variables.
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += t[i][j];
    if (j < n || j == cols - 1) t[m][j] = -s;
  }
  run_simplex(n);
  if (std::abs(t[m][cols - 1]) > 1e-7)
    throw std::runtime_error("lp oracle: infeasible");

  // Drive leftover artificial variables out of the basis when possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(t[i][j]) > 1e-9) {
        pivot(i, j);
        break;
      }
  }

  // Phase 2 objective from the original costs expressed in the current basis.
  for (std::size_t j = 0; j < cols; ++j) t[m][j] = 0.0;
  for (std::size_t j = 0; j < n; ++j) t[m][j] = c[j];
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) continue;
    const double f = t[m][basis[i]];
    if (f == 0.0) continue;
    for (std::size_t j = 0; j < cols; ++j) t[m][j] -= f * t[i][j];
  }
  run_simplex(n);

  double value = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) value += c[basis[i]] * t[i][cols - 1];
  return value;
}

/// Exact 1-Wasserstein between histograms on [0,1] bins solved as a
/// transportation LP over bin centers.
inline double lp_wasserstein1(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t nb = p.size();
  const double width = 1.0 / static_cast<double>(nb);
  const std::size_t nvar = nb * nb;
  std::vector<std::vector<double>> a;
  std::vector<double> b, c(nvar);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      c[i * nb + j] = width * std::abs(static_cast<double>(i) - static_cast<double>(j));
  for (std::size_t i = 0; i < nb; ++i) {  // row sums = p
    std::vector<double> row(nvar, 0.0);
    for (std::size_t j = 0; j < nb; ++j) row[i * nb + j] = 1.0;
    a.push_back(row);
    b.push_back(p[i]);
  }
  for (std::size_t j = 0; j + 1 < nb; ++j) {  // col sums = q (last redundant)
    std::vector<double> row(nvar, 0.0);
    for (std::size_t i = 0; i < nb; ++i) row[i * nb + j] = 1.0;
    a.push_back(row);
    b.push_back(q[j]);
  }
  return solve_lp_equality(a, b, c);
}

}  // namespace sgmorph::testing
