#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "helpers.hpp"
#include "lp_oracle.hpp"
#include "sgmorph/gw/gw.hpp"

using namespace sgmorph;
using namespace sgmorph::testing;
using Catch::Approx;

namespace {

double gw_objective(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                    const Eigen::MatrixXd& t) {
  double total = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.rows(); ++k)
      for (int j = 0; j < b.rows(); ++j)
        for (int l = 0; l < b.rows(); ++l) {
          const double diff = a(i, k) - b(j, l);
          total += diff * diff * t(i, j) * t(k, l);
        }
  return total;
}

/// Brute force over the coupling polytope with uniform marginals: nested
/// grid search with local refinement around the best cell.
double oracle_gw_2x2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  // couplings: T = [[t, 1/2 - t], [1/2 - t, t]], t in [0, 1/2]
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 20000; ++k) {
    const double t = 0.5 * k / 20000.0;
    Eigen::MatrixXd coupling(2, 2);
    coupling << t, 0.5 - t, 0.5 - t, t;
    best = std::min(best, gw_objective(a, b, coupling));
  }
  return best;
}

double oracle_gw_3x3(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  // four free parameters; coarse grid then two refinement passes
  const auto value_at = [&](double t11, double t12, double t21, double t22,
                            double& feas) -> double {
    Eigen::MatrixXd t(3, 3);
    const double third = 1.0 / 3.0;
    t(0, 0) = t11;
    t(0, 1) = t12;
    t(0, 2) = third - t11 - t12;
    t(1, 0) = t21;
    t(1, 1) = t22;
    t(1, 2) = third - t21 - t22;
    t(2, 0) = third - t11 - t21;
    t(2, 1) = third - t12 - t22;
    t(2, 2) = third - t(0, 2) - t(1, 2);
    feas = t.minCoeff();
    return gw_objective(a, b, t);
  };

  double lo[4] = {0, 0, 0, 0};
  double hi[4] = {1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  double best = std::numeric_limits<double>::infinity();
  double best_pt[4] = {0, 0, 0, 0};
  for (int pass = 0; pass < 4; ++pass) {
    const int steps = pass == 0 ? 14 : 10;
    for (int a1 = 0; a1 <= steps; ++a1)
      for (int a2 = 0; a2 <= steps; ++a2)
        for (int a3 = 0; a3 <= steps; ++a3)
          for (int a4 = 0; a4 <= steps; ++a4) {
            const double pt[4] = {lo[0] + (hi[0] - lo[0]) * a1 / steps,
                                  lo[1] + (hi[1] - lo[1]) * a2 / steps,
                                  lo[2] + (hi[2] - lo[2]) * a3 / steps,
                                  lo[3] + (hi[3] - lo[3]) * a4 / steps};
            double feas;
            const double v = value_at(pt[0], pt[1], pt[2], pt[3], feas);
            if (feas < -1e-12 || v >= best) continue;
            best = v;
            for (int d = 0; d < 4; ++d) best_pt[d] = pt[d];
          }
    for (int d = 0; d < 4; ++d) {
      const double radius = (hi[d] - lo[d]) / steps;
      lo[d] = std::max(0.0, best_pt[d] - radius);
      hi[d] = std::min(1.0 / 3, best_pt[d] + radius);
    }
  }
  return best;
}

MetricMeasureSpace space_from(const Eigen::MatrixXd& d) {
  MetricMeasureSpace s;
  s.dist = d;
  return s;
}

Eigen::MatrixXd random_metric(Rng& rng, int n, double scale = 1.0) {
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back({rng.uniform(0, scale), rng.uniform(0, scale), rng.uniform(0, scale)});
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = distance(pts[i], pts[j]);
  return d;
}

}  // namespace

TEST_CASE("transport solver against the LP oracle") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(4));
    const int m = 2 + static_cast<int>(rng.uniform_int(4));
    Eigen::MatrixXd cost(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) cost(i, j) = rng.uniform(0, 5);
    Eigen::VectorXd supply = Eigen::VectorXd::Constant(n, 1.0 / n);
    Eigen::VectorXd demand = Eigen::VectorXd::Constant(m, 1.0 / m);

    const Eigen::MatrixXd flow = solve_transport(cost, supply, demand);
    CHECK((flow.rowwise().sum() - supply).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((flow.colwise().sum().transpose() - demand).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(flow.minCoeff() >= -1e-12);

    // oracle: generic equality-form simplex on the same LP
    std::vector<std::vector<double>> a;
    std::vector<double> b, c;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) c.push_back(cost(i, j));
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(n * m, 0.0);
      for (int j = 0; j < m; ++j) row[i * m + j] = 1.0;
      a.push_back(row);
      b.push_back(supply[i]);
    }
    for (int j = 0; j + 1 < m; ++j) {
      std::vector<double> row(n * m, 0.0);
      for (int i = 0; i < n; ++i) row[i * m + j] = 1.0;
      a.push_back(row);
      b.push_back(demand[j]);
    }
    const double oracle = solve_lp_equality(a, b, c);
    CHECK(cost.cwiseProduct(flow).sum() == Approx(oracle).margin(1e-9));
  }
}

TEST_CASE("vertex space") {
  const ShapeGraph g = straight_graph(2, {{0, 0, 0}, {3, 0, 0}}, {{0, 1}});
  const MetricMeasureSpace s = vertex_space(g);
  CHECK(s.dist(0, 1) == Approx(3.0));
  CHECK(s.dist(0, 0) == 0.0);

  Rng rng(8);
  const ShapeGraph moved = rigid_transform(g, random_rotation(rng, 2), {5, 5, 0});
  CHECK(vertex_space(moved).dist(0, 1) == Approx(3.0).epsilon(1e-12));

  ShapeGraph single;
  single.dim = 2;
  single.nodes = {{1, 2, 0}};
  CHECK(vertex_space(single).dist.rows() == 1);
}

TEST_CASE("gw distance basics") {
  Rng rng(17);
  const Eigen::MatrixXd d = random_metric(rng, 6);

  SECTION("self distance is zero") {
    const GwResult r = gw_distance(space_from(d), space_from(d));
    CHECK(r.cost <= 1e-6);
  }

  SECTION("vertex permutation leaves the space indistinguishable") {
    std::vector<int> perm = {3, 1, 5, 0, 2, 4};
    Eigen::MatrixXd pd(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) pd(i, j) = d(perm[i], perm[j]);
    const GwResult r = gw_distance(space_from(d), space_from(pd), 300, 1e-9, 0, 4);
    CHECK(r.cost <= 1e-6);
  }

  SECTION("objective is non-increasing across iterations") {
    const Eigen::MatrixXd e = random_metric(rng, 7, 2.0);
    const GwResult r = gw_distance(space_from(d), space_from(e), 200, 1e-9);
    for (std::size_t i = 0; i + 1 < r.objective_trace.size(); ++i)
      CHECK(r.objective_trace[i + 1] <= r.objective_trace[i] + 1e-12);
  }

  SECTION("coupling satisfies the marginal constraints") {
    const Eigen::MatrixXd e = random_metric(rng, 4);
    const GwResult r = gw_distance(space_from(d), space_from(e));
    CHECK((r.coupling.rowwise().sum().array() - 1.0 / 6).abs().maxCoeff() < 1e-7);
    CHECK((r.coupling.colwise().sum().array() - 1.0 / 4).abs().maxCoeff() < 1e-7);
    CHECK(r.coupling.minCoeff() >= -1e-12);
  }
}

TEST_CASE("gw matches the brute-force oracle on tiny spaces") {
  Rng rng(29);
  SECTION("2-point spaces") {
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
      a(0, 1) = a(1, 0) = rng.uniform(0.5, 2.0);
      b(0, 1) = b(1, 0) = rng.uniform(0.5, 2.0);
      const GwResult r = gw_distance(space_from(a), space_from(b), 300, 1e-10, 0, 4);
      CHECK(r.cost == Approx(oracle_gw_2x2(a, b)).margin(1e-6));
    }
  }
  SECTION("3-point spaces") {
    for (int trial = 0; trial < 6; ++trial) {
      const Eigen::MatrixXd a = random_metric(rng, 3);
      const Eigen::MatrixXd b = random_metric(rng, 3);
      const GwResult r = gw_distance(space_from(a), space_from(b), 400, 1e-12, 0, 8);
      const double oracle = oracle_gw_3x3(a, b);
      CHECK(r.cost <= oracle + 1e-4);
      CHECK(r.cost >= oracle - 1e-4);
    }
  }
}

TEST_CASE("gw matrix") {
  Rng rng(31);
  std::vector<ShapeGraph> graphs;
  for (int k = 0; k < 3; ++k) {
    std::vector<Vec3> nodes;
    for (int i = 0; i < 5; ++i)
      nodes.push_back({rng.uniform(0, 2), rng.uniform(0, 2), 0});
    graphs.push_back(straight_graph(2, nodes, {{0, 1}, {1, 2}, {2, 3}, {3, 4}},
                                    "g" + std::to_string(k)));
  }
  graphs.push_back(graphs[0]);  // duplicate
  graphs.back().id = "dup";

  const DistanceMatrix m = gw_matrix(graphs, 200, 1e-9, 0, 2);
  CHECK((m.values - m.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.values.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.values(0, 3) <= 1e-3);  // duplicate graph

  // rigid copies stay near zero
  const ShapeGraph rotated =
      rigid_transform(graphs[1], random_rotation(rng, 2), {3, -1, 0});
  const GwResult r = gw_distance(graphs[1], rotated, 300, 1e-9, 0, 4);
  CHECK(std::sqrt(r.cost) <= 1e-3);
}
