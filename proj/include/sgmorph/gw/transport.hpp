#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sgmorph {

/// Exact solver for the transportation problem
///   min <C, X>  s.t.  X 1 = a,  X' 1 = b,  X >= 0
/// via the transportation (network) simplex: north-west-corner start, MODI
/// potentials, most-negative entering rule with a Bland fallback against
/// degenerate cycling.
inline Eigen::MatrixXd solve_transport(const Eigen::MatrixXd& cost,
                                       const Eigen::VectorXd& supply,
                                       const Eigen::VectorXd& demand) {
  const int n = static_cast<int>(supply.size());
  const int m = static_cast<int>(demand.size());
  if (cost.rows() != n || cost.cols() != m)
    throw std::invalid_argument("solve_transport: dimension mismatch");
  if (std::abs(supply.sum() - demand.sum()) > 1e-9 * std::max(1.0, supply.sum()))
    throw std::invalid_argument("solve_transport: unbalanced marginals");

  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, m);
  std::vector<std::vector<char>> basic(n, std::vector<char>(m, 0));

  // North-west corner start: exactly n+m-1 basic cells (zeros kept when a
  // row and column exhaust together).
  {
    Eigen::VectorXd a = supply, b = demand;
    int r = 0, c = 0;
    while (true) {
      const double x = std::min(a[r], b[c]);
      flow(r, c) = x;
      basic[r][c] = 1;
      a[r] -= x;
      b[c] -= x;
      if (r == n - 1 && c == m - 1) break;
      if (a[r] <= b[c] && r < n - 1)
        ++r;
      else if (c < m - 1)
        ++c;
      else
        ++r;
    }
  }

  std::vector<double> u(n), v(m);
  std::vector<char> u_set(n), v_set(m);
  const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  const long long bland_after = 50LL * (n + m);

  for (long long iter = 0;; ++iter) {
    // potentials from the basis tree
    std::fill(u_set.begin(), u_set.end(), 0);
    std::fill(v_set.begin(), v_set.end(), 0);
    u[0] = 0.0;
    u_set[0] = 1;
    bool progress = true;
    while (progress) {
      progress = false;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
          if (!basic[i][j]) continue;
          if (u_set[i] && !v_set[j]) {
            v[j] = cost(i, j) - u[i];
            v_set[j] = 1;
            progress = true;
          } else if (!u_set[i] && v_set[j]) {
            u[i] = cost(i, j) - v[j];
            u_set[i] = 1;
            progress = true;
          }
        }
    }

    // entering cell
    int enter_i = -1, enter_j = -1;
    double most_negative = -tol;
    const bool bland = iter > bland_after;
    for (int i = 0; i < n && (!bland || enter_i < 0); ++i)
      for (int j = 0; j < m; ++j) {
        if (basic[i][j]) continue;
        const double reduced = cost(i, j) - u[i] - v[j];
        if (reduced < most_negative) {
          enter_i = i;
          enter_j = j;
          if (bland) break;
          most_negative = reduced;
        }
      }
    if (enter_i < 0) break;  // optimal

    // cycle: unique path from row enter_i to col enter_j through the tree
    // (bipartite DFS over basic cells), then alternate +/- along it
    struct Step {
      int i, j;
    };
    std::vector<Step> path;
    std::vector<int> col_parent(m, -2), row_parent(n, -2);  // -2 unvisited
    row_parent[enter_i] = -1;
    std::vector<int> row_stack = {enter_i};
    while (!row_stack.empty() && col_parent[enter_j] == -2) {
      const int i = row_stack.back();
      row_stack.pop_back();
      for (int j = 0; j < m; ++j) {
        if (!basic[i][j] || col_parent[j] != -2) continue;
        col_parent[j] = i;
        for (int i2 = 0; i2 < n; ++i2)
          if (basic[i2][j] && row_parent[i2] == -2) {
            row_parent[i2] = j;
            row_stack.push_back(i2);
          }
      }
    }
    if (col_parent[enter_j] == -2)
      throw std::runtime_error("solve_transport: disconnected basis");
    // walk back: (enter_i,enter_j) is the + cell; alternate along the path
    std::vector<Step> minus_cells, plus_cells;
    plus_cells.push_back({enter_i, enter_j});
    int cj = enter_j;
    while (true) {
      const int pi = col_parent[cj];
      minus_cells.push_back({pi, cj});
      if (pi == enter_i) break;
      const int pj = row_parent[pi];
      plus_cells.push_back({pi, pj});
      cj = pj;
    }

    double theta = std::numeric_limits<double>::infinity();
    Step leave{-1, -1};
    for (const Step& s : minus_cells)
      if (flow(s.i, s.j) < theta ||
          (flow(s.i, s.j) == theta && (s.i < leave.i || (s.i == leave.i && s.j < leave.j)))) {
        theta = flow(s.i, s.j);
        leave = s;
      }
    for (const Step& s : plus_cells) flow(s.i, s.j) += theta;
    for (const Step& s : minus_cells) flow(s.i, s.j) -= theta;
    flow(leave.i, leave.j) = 0.0;
    basic[leave.i][leave.j] = 0;
    basic[enter_i][enter_j] = 1;
  }

  return flow;
}

}  // namespace sgmorph
