#pragma once

#include <stdexcept>
#include <string>

namespace sgmorph {

/// Raised when a feature is not defined for the given graph (e.g. no edges,
/// too few nodes). Carries the canonical feature name when known.
class undefined_feature_error : public std::runtime_error {
 public:
  undefined_feature_error(std::string feature, const std::string& what)
      : std::runtime_error(feature.empty() ? what : feature + ": " + what),
        feature_(std::move(feature)) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

/// Convex hull of the branch points is lower-dimensional, so branch density
/// has no finite value. Callers may treat the feature as missing.
class degenerate_hull_error : public undefined_feature_error {
 public:
  explicit degenerate_hull_error(const std::string& what)
      : undefined_feature_error("branch_density", what) {}
};

/// Malformed input text (SWC, JSON, PGM...). Carries a line number when the
/// format is line-oriented.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what, long line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what
                                     : what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Structurally inconsistent input (forward parent references, dangling ids).
class structure_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sgmorph
