#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "sgmorph/core/error.hpp"
#include "sgmorph/core/shape_graph.hpp"

namespace sgmorph {

inline constexpr double k_pi = 3.14159265358979323846;

/// Canonical representative of an unoriented direction: the sign is flipped
/// so that the last nonzero coordinate is positive. In 2D this puts the
/// angle in [0, pi).
inline Vec3 canonical_direction(Vec3 u) {
  if (u.z != 0.0) return u.z > 0.0 ? u : -u;
  if (u.y != 0.0) return u.y > 0.0 ? u : -u;
  return u.x >= 0.0 ? u : -u;
}

/// Weighted set of unoriented segment directions: one canonical unit vector
/// per polyline segment, weighted by its length.
struct DirectionalDistribution {
  int dim = 2;
  std::vector<Vec3> directions;
  std::vector<double> weights;
  double total_weight = 0.0;
};

inline DirectionalDistribution directional_distribution(const ShapeGraph& g) {
  DirectionalDistribution dist;
  dist.dim = g.dim;
  for (const Polyline& b : g.branches)
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      const Vec3 d = b[k + 1] - b[k];
      const double len = norm(d);
      if (!(len > 0.0)) continue;
      dist.directions.push_back(canonical_direction(d * (1.0 / len)));
      dist.weights.push_back(len);
      dist.total_weight += len;
    }
  if (dist.directions.empty())
    throw undefined_feature_error("directional_distribution",
                                  "graph has no positive-length segments");
  return dist;
}

struct CircularStats {
  double mean_angle = 0.0;  // in [0, pi)
  double sigma = 0.0;
};

/// Circular mean and standard deviation of a 2D unoriented distribution via
/// the angle-doubling map; the resultant norm is clamped to [1e-12, 1] so
/// that isotropic inputs give a finite sigma.
inline CircularStats circular_mean_std_2d(const DirectionalDistribution& dist) {
  if (!(dist.total_weight > 0.0))
    throw undefined_feature_error("directional_std", "zero total weight");
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < dist.directions.size(); ++i) {
    const double theta = std::atan2(dist.directions[i].y, dist.directions[i].x);
    cx += dist.weights[i] * std::cos(2.0 * theta);
    cy += dist.weights[i] * std::sin(2.0 * theta);
  }
  cx /= dist.total_weight;
  cy /= dist.total_weight;
  const double r = std::clamp(std::sqrt(cx * cx + cy * cy), 1e-12, 1.0);
  CircularStats out;
  out.sigma = std::sqrt(-2.0 * std::log(r));
  if (std::sqrt(cx * cx + cy * cy) <= 1e-12) {
    out.mean_angle = 0.0;  // mean undefined for isotropic input
  } else {
    double half = std::atan2(cy, cx) / 2.0;  // in (-pi/2, pi/2]
    if (half < 0.0) half += k_pi;
    out.mean_angle = half == k_pi ? 0.0 : half;
  }
  return out;
}

struct ProjectiveStats {
  Vec3 mean;           // canonical representative of the top eigenvector
  double sigma = 0.0;  // sqrt(1 - lambda_max) of the normalized second moment
  bool unique_mean = true;
  Vec3 second_axis;  // remaining eigenframe, for azimuth binning
  Vec3 third_axis;
};

/// Mean direction and dispersion of a 3D unoriented distribution from the
/// weight-normalized second-moment matrix M (Tr M = 1): the mean is the top
/// eigenvector and sigma = sqrt(Tr M - lambda_max). Normalizing by the total
/// weight makes sigma scale-invariant, matching the 2D feature.
inline ProjectiveStats projective_mean_std_3d(const DirectionalDistribution& dist) {
  if (!(dist.total_weight > 0.0))
    throw undefined_feature_error("directional_std", "zero total weight");
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < dist.directions.size(); ++i) {
    const Vec3& u = dist.directions[i];
    const double w = dist.weights[i] / dist.total_weight;
    const Eigen::Vector3d v(u.x, u.y, u.z);
    m += w * v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m);
  const Eigen::Vector3d evals = solver.eigenvalues();  // ascending
  const Eigen::Matrix3d evecs = solver.eigenvectors();

  ProjectiveStats out;
  const auto column = [&](int c) {
    return canonical_direction({evecs(0, c), evecs(1, c), evecs(2, c)});
  };
  out.mean = column(2);
  out.second_axis = column(1);
  out.third_axis = column(0);
  out.sigma = std::sqrt(std::max(0.0, 1.0 - evals[2]));
  out.unique_mean = (evals[2] - evals[1]) > 1e-9;
  return out;
}

/// Angle in [0, pi) after rotating the distribution so its circular mean
/// sits at pi/2.
inline double centered_angle_2d(const Vec3& u, double mean_angle) {
  const double theta = std::atan2(u.y, u.x);
  double c = std::fmod(theta - mean_angle + k_pi / 2.0, k_pi);
  if (c < 0.0) c += k_pi;
  if (c >= k_pi) c = 0.0;
  return c;
}

/// Mass fractions of four nested angular regions around the mean direction.
/// 2D: the intervals [3pi/8,5pi/8), [pi/4,3pi/8)+[5pi/8,3pi/4),
/// [pi/8,pi/4)+[3pi/4,7pi/8), [0,pi/8)+[7pi/8,pi) after centering the mean
/// at pi/2. 3D: equal-area polar bands cos(theta) in (3/4,1], (1/2,3/4],
/// (1/4,1/2], [0,1/4] around the projective mean.
inline std::array<double, 4> quantile_vector(const DirectionalDistribution& dist) {
  if (!(dist.total_weight > 0.0))
    throw undefined_feature_error("quantile_vector", "zero total weight");
  std::array<double, 4> q = {0.0, 0.0, 0.0, 0.0};
  if (dist.dim == 2) {
    const CircularStats stats = circular_mean_std_2d(dist);
    static constexpr int octant_to_q[8] = {3, 2, 1, 0, 0, 1, 2, 3};
    for (std::size_t i = 0; i < dist.directions.size(); ++i) {
      const double c = centered_angle_2d(dist.directions[i], stats.mean_angle);
      const int octant = std::clamp(static_cast<int>(c / (k_pi / 8.0)), 0, 7);
      q[octant_to_q[octant]] += dist.weights[i];
    }
  } else {
    const ProjectiveStats stats = projective_mean_std_3d(dist);
    for (std::size_t i = 0; i < dist.directions.size(); ++i) {
      const double z = std::abs(dot(dist.directions[i], stats.mean));
      const int band = z > 0.75 ? 0 : (z > 0.5 ? 1 : (z > 0.25 ? 2 : 3));
      q[band] += dist.weights[i];
    }
  }
  for (double& v : q) v /= dist.total_weight;
  return q;
}

/// Histogram over RP^(d-1): 18 equal angular bins of [0,pi) in 2D, 8 polar
/// bands x 16 azimuth sectors of the upper half sphere in 3D (128 bins).
struct DirectionalHistogram {
  int dim = 2;
  std::vector<double> mass;  // sums to 1
};

inline constexpr int k_bins_2d = 18;
inline constexpr int k_polar_bands_3d = 8;
inline constexpr int k_azimuth_sectors_3d = 16;

/// Bins the distribution. With `centered` the distribution is first aligned
/// to an intrinsic frame (2D: circular mean at pi/2; 3D: eigenframe of the
/// second-moment matrix with the mean as pole), which makes the bin masses
/// independent of the graph's orientation in space; the feature pipeline
/// computes entropy on the centered histogram. Without it, bins live in
/// world coordinates (the convention used for plot dumps).
inline DirectionalHistogram directional_histogram(const DirectionalDistribution& dist,
                                                  bool centered = false) {
  if (!(dist.total_weight > 0.0))
    throw undefined_feature_error("directional_histogram", "zero total weight");
  DirectionalHistogram hist;
  hist.dim = dist.dim;
  if (dist.dim == 2) {
    hist.mass.assign(k_bins_2d, 0.0);
    const double mean = centered ? circular_mean_std_2d(dist).mean_angle : 0.0;
    for (std::size_t i = 0; i < dist.directions.size(); ++i) {
      double theta;
      if (centered) {
        theta = centered_angle_2d(dist.directions[i], mean);
      } else {
        theta = std::atan2(dist.directions[i].y, dist.directions[i].x);
        if (theta < 0.0) theta += k_pi;
        if (theta >= k_pi) theta = 0.0;
      }
      const int bin = std::clamp(static_cast<int>(theta / (k_pi / k_bins_2d)), 0,
                                 k_bins_2d - 1);
      hist.mass[bin] += dist.weights[i];
    }
  } else {
    hist.mass.assign(k_polar_bands_3d * k_azimuth_sectors_3d, 0.0);
    Vec3 pole{0, 0, 1}, ax{1, 0, 0}, ay{0, 1, 0};
    if (centered) {
      const ProjectiveStats stats = projective_mean_std_3d(dist);
      pole = stats.mean;
      ax = stats.second_axis;
      ay = stats.third_axis;
    }
    for (std::size_t i = 0; i < dist.directions.size(); ++i) {
      Vec3 f{dot(dist.directions[i], ax), dot(dist.directions[i], ay),
             dot(dist.directions[i], pole)};
      f = canonical_direction(f);  // fold to the upper half sphere
      const double z = std::clamp(f.z, 0.0, 1.0);
      const int band =
          std::clamp(static_cast<int>(z * k_polar_bands_3d), 0, k_polar_bands_3d - 1);
      double phi = std::atan2(f.y, f.x);
      if (phi < 0.0) phi += 2.0 * k_pi;
      const int sector = std::clamp(
          static_cast<int>(phi / (2.0 * k_pi / k_azimuth_sectors_3d)), 0,
          k_azimuth_sectors_3d - 1);
      hist.mass[band * k_azimuth_sectors_3d + sector] += dist.weights[i];
    }
  }
  for (double& m : hist.mass) m /= dist.total_weight;
  return hist;
}

/// Shannon entropy (natural log) of the bin masses.
inline double directional_entropy(const DirectionalHistogram& hist) {
  double h = 0.0;
  for (const double p : hist.mass)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

/// phi = 1 - (H / log N)^2, from 1 (perfect alignment) down to 0 (uniform).
inline double orientation_order(const DirectionalHistogram& hist) {
  const double hmax = std::log(static_cast<double>(hist.mass.size()));
  const double ratio = directional_entropy(hist) / hmax;
  return 1.0 - ratio * ratio;
}

}  // namespace sgmorph
