#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "helpers.hpp"
#include "lp_oracle.hpp"
#include "sgmorph/popstats/popstats.hpp"

using namespace sgmorph;
using namespace sgmorph::testing;
using Catch::Approx;

namespace {

std::vector<double> random_histogram(Rng& rng, int bins) {
  std::vector<double> h(bins);
  double total = 0.0;
  for (double& v : h) {
    v = rng.uniform();
    total += v;
  }
  for (double& v : h) v /= total;
  return h;
}

FeatureMatrix tiny_matrix() {
  FeatureMatrix m;
  m.ids = {"a", "b", "c", "d"};
  m.labels = {"g1", "g1", "g2", "g2"};
  m.values.resize(4, k_num_features);
  Rng rng(1);
  for (int i = 0; i < 4; ++i)
    for (int f = 0; f < k_num_features; ++f) m.values(i, f) = rng.uniform(0, 5);
  return m;
}

}  // namespace

TEST_CASE("normalize_features") {
  FeatureMatrix m = tiny_matrix();
  m.values(0, 0) = 1.0;
  m.values(1, 0) = 3.0;
  m.values(2, 0) = 1.0;
  m.values(3, 0) = 3.0;
  for (int i = 0; i < 4; ++i) m.values(i, 1) = 7.0;  // constant column

  const FeatureMatrix n = normalize_features(m);
  CHECK(n.values(0, 0) == 0.0);
  CHECK(n.values(1, 0) == 1.0);
  CHECK(n.values.minCoeff() >= 0.0);
  CHECK(n.values.maxCoeff() <= 1.0);
  CHECK(n.constant_columns[1]);
  CHECK(n.values.col(1).cwiseAbs().maxCoeff() == 0.0);

  // re-normalizing is the identity
  const FeatureMatrix nn = normalize_features(n);
  CHECK((nn.values - n.values).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-12));

  m.values(2, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH(normalize_features(m),
                    Catch::Matchers::ContainsSubstring("sample 'c'"));
}

TEST_CASE("group histograms") {
  FeatureMatrix m = tiny_matrix();
  const FeatureMatrix n = normalize_features(m);
  const auto groups = group_histograms(n, 20);
  REQUIRE(groups.size() == 2);
  for (const GroupSummary& gs : groups) {
    CHECK(gs.count == 2);
    for (const auto& h : gs.histograms) {
      double total = 0.0;
      for (const double v : h) total += v;
      CHECK(total == Approx(1.0).margin(1e-9));
    }
  }

  // identical samples give a Dirac histogram
  FeatureMatrix dirac = tiny_matrix();
  dirac.labels = {"g", "g", "g", "g"};
  for (int i = 1; i < 4; ++i) dirac.values.row(i) = dirac.values.row(0);
  const auto dg = group_histograms(normalize_features(dirac), 20);
  for (const auto& h : dg[0].histograms)
    CHECK(*std::max_element(h.begin(), h.end()) == Approx(1.0));
}

TEST_CASE("wasserstein1 closed form") {
  CHECK(wasserstein1({0.5, 0.5}, {0.5, 0.5}) == 0.0);
  // 2-bin (1,0) vs (0,1): all mass moves one bin-center gap of 0.5
  CHECK(wasserstein1({1.0, 0.0}, {0.0, 1.0}) == Approx(0.5));
  CHECK_THROWS_AS(wasserstein1({1.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("wasserstein1 matches the exhaustive LP oracle and is a metric") {
  Rng rng(42);
  for (const int bins : {2, 3, 5}) {
    for (int trial = 0; trial < 60; ++trial) {
      const auto a = random_histogram(rng, bins);
      const auto b = random_histogram(rng, bins);
      const auto c = random_histogram(rng, bins);
      const double ab = wasserstein1(a, b);
      CHECK(ab == Approx(lp_wasserstein1(a, b)).margin(1e-9));
      // metric axioms
      CHECK(ab >= 0.0);
      CHECK(ab == Approx(wasserstein1(b, a)).margin(1e-12));
      CHECK(wasserstein1(a, a) == 0.0);
      CHECK(wasserstein1(a, c) <= ab + wasserstein1(b, c) + 1e-12);
    }
  }
}

TEST_CASE("spearman correlation") {
  FeatureMatrix m;
  m.ids = {"a", "b", "c", "d", "e"};
  m.values.resize(5, 3);
  for (int i = 0; i < 5; ++i) {
    m.values(i, 0) = i + 1.0;
    m.values(i, 1) = std::exp(i + 1.0);  // monotone transform -> rho 1
    m.values(i, 2) = 5.0 - i;            // strictly decreasing -> rho -1
  }
  const CorrelationMatrix r = spearman_matrix(m);
  CHECK(r.values(0, 0) == 1.0);
  CHECK(r.values(0, 1) == Approx(1.0).epsilon(1e-12));
  CHECK(r.values(0, 2) == Approx(-1.0).epsilon(1e-12));
  CHECK((r.values - r.values.transpose()).cwiseAbs().maxCoeff() == 0.0);

  FeatureMatrix small;
  small.values.resize(2, 2);
  small.values.setZero();
  CHECK_THROWS_AS(spearman_matrix(small), std::invalid_argument);
}

TEST_CASE("morphological distance") {
  Rng rng(7);
  const int nf = 19, bins = 20;

  GroupSummary p, q;
  p.group = "p";
  q.group = "q";
  p.count = q.count = 5;
  for (int f = 0; f < nf; ++f) {
    p.histograms.push_back(random_histogram(rng, bins));
    q.histograms.push_back(random_histogram(rng, bins));
  }

  SECTION("identical groups are at distance zero") {
    CorrelationMatrix r;
    r.values = Eigen::MatrixXd::Identity(nf, nf);
    CHECK(morphological_distance(p, p, r) == Approx(0.0).margin(1e-12));
  }

  SECTION("R = I reduces to the root of summed squared W1") {
    CorrelationMatrix r;
    r.values = Eigen::MatrixXd::Identity(nf, nf);
    double sum = 0.0;
    for (int f = 0; f < nf; ++f) {
      const double w = wasserstein1(p.histograms[f], q.histograms[f]);
      sum += w * w;
    }
    CHECK(morphological_distance(p, q, r) == Approx(std::sqrt(sum)).margin(1e-9));
  }

  SECTION("2-feature toy with perfectly correlated features") {
    GroupSummary a, b;
    a.count = b.count = 1;
    a.histograms = {{1.0, 0.0}, {1.0, 0.0}};
    b.histograms = {{0.0, 1.0}, {0.0, 1.0}};  // both features at W1 = 0.5
    CorrelationMatrix r;
    r.values = Eigen::MatrixXd::Ones(2, 2);
    // d = (0.5, 0.5): d'Rd = 1, penalty term = (1/4)*0.5 -> MD^2 = 0.875
    // matches the hand evaluation with d=(1,1) scaled by the bin gap
    CHECK(morphological_distance(a, b, r) == Approx(std::sqrt(0.875)).epsilon(1e-12));
  }

  SECTION("symmetry on random summaries") {
    const CorrelationMatrix r = [&] {
      CorrelationMatrix c;
      c.values = Eigen::MatrixXd::Identity(nf, nf);
      for (int i = 0; i < nf; ++i)
        for (int j = i + 1; j < nf; ++j)
          c.values(i, j) = c.values(j, i) = rng.uniform(-1, 1);
      return c;
    }();
    CHECK(morphological_distance(p, q, r) ==
          Approx(morphological_distance(q, p, r)).margin(1e-12));
  }
}

TEST_CASE("adjusted rand index") {
  const std::vector<int> a = {0, 0, 1, 1, 2, 2};
  CHECK(adjusted_rand_index(a, a) == Approx(1.0));

  const std::vector<int> relabeled = {5, 5, 9, 9, 7, 7};
  CHECK(adjusted_rand_index(a, relabeled) == Approx(1.0));

  // one cluster against any partition collapses to 0
  const std::vector<int> one(6, 0);
  CHECK(adjusted_rand_index(one, a) == Approx(0.0).margin(1e-12));

  CHECK_THROWS_AS(adjusted_rand_index(a, std::vector<int>{0, 1}),
                  std::invalid_argument);
}

TEST_CASE("independent random partitions have near-zero mean ARI") {
  Rng rng(2024);
  double mean = 0.0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> a(40), b(40);
    for (int i = 0; i < 40; ++i) {
      a[i] = static_cast<int>(rng.uniform_int(4));
      b[i] = static_cast<int>(rng.uniform_int(4));
    }
    mean += adjusted_rand_index(a, b);
  }
  mean /= trials;
  CHECK(std::abs(mean) < 0.02);
}
