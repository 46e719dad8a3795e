#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "helpers.hpp"
#include "sgmorph/features/directional.hpp"

using namespace sgmorph;
using namespace sgmorph::testing;
using Catch::Approx;

namespace {

DirectionalDistribution from_angles(const std::vector<double>& angles,
                                    const std::vector<double>& weights) {
  DirectionalDistribution d;
  d.dim = 2;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    d.directions.push_back(
        canonical_direction({std::cos(angles[i]), std::sin(angles[i]), 0}));
    d.weights.push_back(weights[i]);
    d.total_weight += weights[i];
  }
  return d;
}

DirectionalDistribution from_vectors(const std::vector<Vec3>& dirs,
                                     const std::vector<double>& weights) {
  DirectionalDistribution d;
  d.dim = 3;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    d.directions.push_back(canonical_direction(normalized(dirs[i])));
    d.weights.push_back(weights[i]);
    d.total_weight += weights[i];
  }
  return d;
}

}  // namespace

TEST_CASE("directional distribution canonicalizes and weighs segments") {
  ShapeGraph g;
  g.dim = 2;
  g.nodes = {{0, 0, 0}, {0, -2, 0}};
  g.edges = {{0, 1}};
  g.branches = {{{0, 0, 0}, {0, -2, 0}}};
  const DirectionalDistribution d = directional_distribution(g);
  REQUIRE(d.directions.size() == 1);
  CHECK(d.directions[0].x == Approx(0.0).margin(1e-15));
  CHECK(d.directions[0].y == Approx(1.0));
  CHECK(d.weights[0] == Approx(2.0));

  const DirectionalDistribution rev =
      directional_distribution(reversed_branches(g));
  CHECK(rev.directions[0].y == Approx(1.0));
  CHECK(rev.weights[0] == Approx(2.0));
}

TEST_CASE("L-branch contributes two unit-weight directions") {
  ShapeGraph g;
  g.dim = 2;
  g.nodes = {{0, 0, 0}, {1, 1, 0}};
  g.edges = {{0, 1}};
  g.branches = {{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}};
  const DirectionalDistribution d = directional_distribution(g);
  REQUIRE(d.directions.size() == 2);
  CHECK(d.directions[0].x == Approx(1.0));
  CHECK(d.directions[1].y == Approx(1.0));
  CHECK(d.weights[0] == Approx(1.0));
  CHECK(d.weights[1] == Approx(1.0));
}

TEST_CASE("circular mean and std in 2D") {
  SECTION("aligned mass has zero spread") {
    const auto stats =
        circular_mean_std_2d(from_angles({k_pi / 4, k_pi / 4}, {1.0, 3.0}));
    CHECK(stats.mean_angle == Approx(k_pi / 4).epsilon(1e-12));
    CHECK(stats.sigma == Approx(0.0).margin(1e-6));
  }

  SECTION("orthogonal equal masses are isotropic after doubling") {
    const auto stats = circular_mean_std_2d(from_angles({0.0, k_pi / 2}, {1.0, 1.0}));
    CHECK(stats.sigma == Approx(std::sqrt(-2.0 * std::log(1e-12))).epsilon(1e-9));
    CHECK(stats.mean_angle == 0.0);  // reported by convention
  }

  SECTION("sigma is invariant under planar rotation") {
    Rng rng(5);
    const std::vector<double> angles = {0.1, 0.9, 2.2, 2.9};
    const std::vector<double> weights = {1.0, 0.5, 2.0, 0.7};
    const double sigma0 = circular_mean_std_2d(from_angles(angles, weights)).sigma;
    for (int trial = 0; trial < 10; ++trial) {
      const double a = rng.uniform(0, 2 * k_pi);
      std::vector<double> rotated;
      for (const double t : angles) rotated.push_back(t + a);
      CHECK(circular_mean_std_2d(from_angles(rotated, weights)).sigma ==
            Approx(sigma0).epsilon(1e-9));
    }
  }
}

TEST_CASE("projective mean and std in 3D") {
  SECTION("aligned mass") {
    const auto stats = projective_mean_std_3d(
        from_vectors({{0, 0, 1}, {0, 0, -1}}, {1.0, 2.0}));
    CHECK(stats.mean.z == Approx(1.0));
    CHECK(stats.sigma == Approx(0.0).margin(1e-9));
    CHECK(stats.unique_mean);
  }

  SECTION("isotropic axes: sigma = sqrt(2/3), mean non-unique") {
    const auto stats = projective_mean_std_3d(
        from_vectors({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {1.0, 1.0, 1.0}));
    CHECK(stats.sigma == Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
    CHECK_FALSE(stats.unique_mean);
  }

  SECTION("sigma invariant under 3D rotation") {
    Rng rng(9);
    const std::vector<Vec3> dirs = {{1, 0.2, 0.1}, {0.3, 1, 0}, {0.2, 0.4, 1}};
    const std::vector<double> weights = {1.0, 2.0, 0.5};
    const double sigma0 = projective_mean_std_3d(from_vectors(dirs, weights)).sigma;
    for (int trial = 0; trial < 10; ++trial) {
      const Mat3 rot = random_rotation(rng, 3);
      std::vector<Vec3> rotated;
      for (const Vec3& u : dirs) rotated.push_back(rotate_point(rot, u));
      CHECK(projective_mean_std_3d(from_vectors(rotated, weights)).sigma ==
            Approx(sigma0).epsilon(1e-9));
    }
  }
}

TEST_CASE("quantile vector") {
  SECTION("all mass at the mean gives (1,0,0,0)") {
    const auto q2d = quantile_vector(from_angles({1.1, 1.1}, {1.0, 2.0}));
    CHECK(q2d[0] == Approx(1.0));
    const auto q3d =
        quantile_vector(from_vectors({{0.3, -0.4, 1.0}, {0.3, -0.4, 1.0}}, {1, 1}));
    CHECK(q3d[0] == Approx(1.0));
  }

  SECTION("2D uniform over [0,pi) gives quarters") {
    std::vector<double> angles, weights;
    const int n = 1800;
    for (int i = 0; i < n; ++i) {
      angles.push_back(k_pi * (i + 0.5) / n);
      weights.push_back(1.0);
    }
    const auto q = quantile_vector(from_angles(angles, weights));
    for (int i = 0; i < 4; ++i) CHECK(q[i] == Approx(0.25).margin(1e-9));
  }

  SECTION("3D uniform over the half sphere gives quarters") {
    // equal-area z bands (Archimedes) with golden-angle azimuths
    std::vector<Vec3> dirs;
    std::vector<double> weights;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double z = (i + 0.5) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = 2.39996322972865332 * i;
      dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
      weights.push_back(1.0);
    }
    const auto q = quantile_vector(from_vectors(dirs, weights));
    for (int i = 0; i < 4; ++i) CHECK(q[i] == Approx(0.25).margin(0.02));
  }

  SECTION("quantiles sum to 1 and are rotation invariant") {
    Rng rng(21);
    std::vector<Vec3> dirs;
    std::vector<double> weights;
    for (int i = 0; i < 30; ++i) {
      dirs.push_back({rng.normal(), rng.normal(), rng.normal(0, 0.3)});
      weights.push_back(rng.uniform(0.1, 2.0));
    }
    const auto q0 = quantile_vector(from_vectors(dirs, weights));
    CHECK(q0[0] + q0[1] + q0[2] + q0[3] == Approx(1.0).margin(1e-12));
    for (int trial = 0; trial < 5; ++trial) {
      const Mat3 rot = random_rotation(rng, 3);
      std::vector<Vec3> rotated;
      for (const Vec3& u : dirs) rotated.push_back(rotate_point(rot, u));
      const auto q = quantile_vector(from_vectors(rotated, weights));
      for (int i = 0; i < 4; ++i) CHECK(q[i] == Approx(q0[i]).margin(1e-9));
    }
  }
}

TEST_CASE("directional histogram") {
  SECTION("all mass at angle 0 lands in the first world-frame bin") {
    const auto hist = directional_histogram(from_angles({0.0, 0.0}, {1, 1}));
    CHECK(hist.mass[0] == Approx(1.0));
  }

  SECTION("mass split equally across all 18 bins") {
    std::vector<double> angles, weights;
    for (int k = 0; k < k_bins_2d; ++k) {
      angles.push_back((k + 0.5) * k_pi / k_bins_2d);
      weights.push_back(1.0);
    }
    const auto hist = directional_histogram(from_angles(angles, weights));
    for (const double p : hist.mass) CHECK(p == Approx(1.0 / 18.0).epsilon(1e-12));
  }

  SECTION("total mass is preserved") {
    Rng rng(33);
    std::vector<double> angles, weights;
    for (int i = 0; i < 57; ++i) {
      angles.push_back(rng.uniform(0, k_pi));
      weights.push_back(rng.uniform(0.01, 3.0));
    }
    for (const bool centered : {false, true}) {
      const auto hist = directional_histogram(from_angles(angles, weights), centered);
      double total = 0.0;
      for (const double p : hist.mass) total += p;
      CHECK(total == Approx(1.0).margin(1e-9));
    }
  }

  SECTION("3D histogram has 128 bins and preserves mass") {
    Rng rng(34);
    std::vector<Vec3> dirs;
    std::vector<double> weights;
    for (int i = 0; i < 64; ++i) {
      dirs.push_back({rng.normal(), rng.normal(), rng.normal()});
      weights.push_back(rng.uniform(0.1, 1.0));
    }
    const auto hist = directional_histogram(from_vectors(dirs, weights), true);
    CHECK(hist.mass.size() == 128);
    double total = 0.0;
    for (const double p : hist.mass) total += p;
    CHECK(total == Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("entropy and orientation order") {
  SECTION("point mass: zero entropy, full order") {
    const auto hist = directional_histogram(from_angles({0.4}, {2.0}), true);
    CHECK(directional_entropy(hist) == Approx(0.0).margin(1e-12));
    CHECK(orientation_order(hist) == Approx(1.0));
  }

  SECTION("uniform 18 bins: ln 18, zero order") {
    DirectionalHistogram hist;
    hist.dim = 2;
    hist.mass.assign(18, 1.0 / 18.0);
    CHECK(directional_entropy(hist) == Approx(std::log(18.0)).epsilon(1e-12));
    CHECK(orientation_order(hist) == Approx(0.0).margin(1e-12));
  }

  SECTION("uniform 128 bins (3D): ln 128") {
    DirectionalHistogram hist;
    hist.dim = 3;
    hist.mass.assign(128, 1.0 / 128.0);
    CHECK(directional_entropy(hist) == Approx(std::log(128.0)).epsilon(1e-12));
  }

  SECTION("order identity phi = 1 - (H/lnN)^2 on random histograms") {
    Rng rng(60);
    for (int trial = 0; trial < 20; ++trial) {
      DirectionalHistogram hist;
      hist.dim = 2;
      double total = 0.0;
      for (int k = 0; k < 18; ++k) {
        hist.mass.push_back(rng.uniform(0.0, 1.0));
        total += hist.mass.back();
      }
      for (double& m : hist.mass) m /= total;
      const double h = directional_entropy(hist);
      CHECK(orientation_order(hist) ==
            Approx(1.0 - std::pow(h / std::log(18.0), 2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("centered entropy is rotation invariant") {
  Rng rng(77);
  SECTION("2D") {
    std::vector<double> angles, weights;
    for (int i = 0; i < 40; ++i) {
      angles.push_back(rng.normal(1.0, 0.4));
      weights.push_back(rng.uniform(0.1, 2.0));
    }
    const double h0 = directional_entropy(
        directional_histogram(from_angles(angles, weights), true));
    for (int trial = 0; trial < 8; ++trial) {
      const double a = rng.uniform(0, 2 * k_pi);
      std::vector<double> rotated;
      for (const double t : angles) rotated.push_back(t + a);
      const double h = directional_entropy(
          directional_histogram(from_angles(rotated, weights), true));
      CHECK(h == Approx(h0).epsilon(1e-9));
    }
  }
  SECTION("3D") {
    std::vector<Vec3> dirs;
    std::vector<double> weights;
    for (int i = 0; i < 50; ++i) {
      dirs.push_back({rng.normal(0.0, 0.3), rng.normal(0.0, 0.8), rng.normal(1.0, 0.4)});
      weights.push_back(rng.uniform(0.1, 2.0));
    }
    const double h0 = directional_entropy(
        directional_histogram(from_vectors(dirs, weights), true));
    for (int trial = 0; trial < 8; ++trial) {
      const Mat3 rot = random_rotation(rng, 3);
      std::vector<Vec3> rotated;
      for (const Vec3& u : dirs) rotated.push_back(rotate_point(rot, u));
      const double h = directional_entropy(
          directional_histogram(from_vectors(rotated, weights), true));
      CHECK(h == Approx(h0).epsilon(1e-9));
    }
  }
}
