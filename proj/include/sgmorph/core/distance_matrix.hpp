#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sgmorph {

/// Symmetric nonnegative matrix with zero diagonal; rows/cols follow `ids`.
struct DistanceMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;
};

}  // namespace sgmorph
