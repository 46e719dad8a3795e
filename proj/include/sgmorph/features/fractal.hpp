#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sgmorph/core/error.hpp"
#include "sgmorph/core/shape_graph.hpp"

namespace sgmorph {

/// Occupied-box counts across dyadic box sizes plus the fitted log-log slope.
/// Sizes are stored in world units, descending (largest box first).
struct BoxCountSeries {
  std::vector<double> box_sizes;
  std::vector<long long> counts;
  double slope = 0.0;
  double intercept = 0.0;
  int fit_first = 0;  // index range of sizes used by the fit
  int fit_last = 0;
  long long occupied_cells = 0;
};

namespace detail {

/// Dense d-dimensional bitmap with per-axis cell counts (cells are cubes).
struct RasterGrid {
  int dim = 2;
  std::array<int, 3> n = {1, 1, 1};
  std::vector<std::uint8_t> cells;

  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * n[1] + iy) * n[0] + ix;
  }
};

/// Marks every cell whose interior the segment passes through. Crossing
/// parameters with the grid planes are collected per axis; each interval
/// between consecutive crossings lies in exactly one cell, identified by its
/// midpoint. Stable under subdivision and reversal of the segment.
inline void mark_segment(RasterGrid& grid, const Vec3& a, const Vec3& b) {
  std::vector<double> ts;
  ts.push_back(0.0);
  ts.push_back(1.0);
  for (int axis = 0; axis < grid.dim; ++axis) {
    const double p0 = a[axis], p1 = b[axis];
    const double lo = std::min(p0, p1), hi = std::max(p0, p1);
    for (double k = std::ceil(lo); k <= std::floor(hi); k += 1.0) {
      if (p1 != p0) {
        const double t = (k - p0) / (p1 - p0);
        if (t > 0.0 && t < 1.0) ts.push_back(t);
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double t = (ts[i] + ts[i + 1]) / 2.0;
    int idx[3] = {0, 0, 0};
    for (int axis = 0; axis < grid.dim; ++axis) {
      const double c = a[axis] + t * (b[axis] - a[axis]);
      idx[axis] = std::clamp(static_cast<int>(std::floor(c)), 0, grid.n[axis] - 1);
    }
    grid.cells[grid.index(idx[0], idx[1], idx[2])] = 1;
  }
}

/// Halves the grid resolution, a coarse cell being occupied iff any of its
/// children is.
inline RasterGrid coarsen(const RasterGrid& g) {
  RasterGrid out;
  out.dim = g.dim;
  for (int k = 0; k < 3; ++k) out.n[k] = std::max(1, (g.n[k] + 1) / 2);
  out.cells.assign(static_cast<std::size_t>(out.n[0]) * out.n[1] * out.n[2], 0);
  for (int iz = 0; iz < g.n[2]; ++iz)
    for (int iy = 0; iy < g.n[1]; ++iy)
      for (int ix = 0; ix < g.n[0]; ++ix)
        if (g.cells[g.index(ix, iy, iz)])
          out.cells[out.index(ix / 2, iy / 2, iz / 2)] = 1;
  return out;
}

inline long long count_occupied(const RasterGrid& g) {
  long long c = 0;
  for (const std::uint8_t v : g.cells) c += v;
  return c;
}

}  // namespace detail

/// Rasterizes all branches over the graph's own bounding box at `grid_cells`
/// cubic cells along the longest axis (1024 in 2D, 256 in 3D by default) and
/// counts occupied boxes at dyadic sizes.
inline BoxCountSeries box_count(const ShapeGraph& g, int grid_cells = 0) {
  if (g.edges.empty())
    throw undefined_feature_error("fractal_dimension", "graph has no edges");
  const int levels_cells = grid_cells > 0 ? grid_cells : (g.dim == 2 ? 1024 : 256);

  Vec3 lo = g.branches[0][0], hi = lo;
  for (const Polyline& b : g.branches)
    for (const Vec3& p : b)
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
  double max_extent = 0.0;
  for (int k = 0; k < g.dim; ++k) max_extent = std::max(max_extent, hi[k] - lo[k]);
  if (!(max_extent > 0.0))
    throw undefined_feature_error("fractal_dimension",
                                  "bounding box has no positive extent");
  const double cell = max_extent / levels_cells;

  detail::RasterGrid grid;
  grid.dim = g.dim;
  for (int k = 0; k < g.dim; ++k) {
    const double extent = hi[k] - lo[k];
    grid.n[k] = std::clamp(static_cast<int>(std::ceil(extent / cell)), 1, levels_cells);
  }
  grid.cells.assign(static_cast<std::size_t>(grid.n[0]) * grid.n[1] * grid.n[2], 0);

  for (const Polyline& b : g.branches)
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      Vec3 p0 = b[k], p1 = b[k + 1];
      for (int axis = 0; axis < g.dim; ++axis) {
        p0[axis] = (p0[axis] - lo[axis]) / cell;
        p1[axis] = (p1[axis] - lo[axis]) / cell;
      }
      detail::mark_segment(grid, p0, p1);
    }

  BoxCountSeries series;
  series.occupied_cells = detail::count_occupied(grid);
  std::vector<std::pair<double, long long>> fine_first;  // (size, count), ascending size
  detail::RasterGrid level = grid;
  double size = cell;
  while (true) {
    fine_first.emplace_back(size, detail::count_occupied(level));
    if (level.n[0] <= 1 && level.n[1] <= 1 && level.n[2] <= 1) break;
    level = detail::coarsen(level);
    size *= 2.0;
  }
  for (auto it = fine_first.rbegin(); it != fine_first.rend(); ++it) {
    series.box_sizes.push_back(it->first);
    series.counts.push_back(it->second);
  }
  return series;
}

namespace detail {

struct LogLogPoint {
  double x;  // log(1/D)
  double y;  // log N
};

inline std::pair<double, double> least_squares(const std::vector<LogLogPoint>& pts,
                                               int first, int last) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = last - first + 1;
  for (int i = first; i <= last; ++i) {
    sx += pts[i].x;
    sy += pts[i].y;
    sxx += pts[i].x * pts[i].x;
    sxy += pts[i].x * pts[i].y;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  const double intercept = (sy - slope * sx) / n;
  return {slope, intercept};
}

}  // namespace detail

/// Box-counting dimension: slope of log N(D) against log(1/D), fitted over
/// the linear region of the usable sizes (those with 1 < N(D) < occupied
/// cells). The linear region is the longest consecutive window of at least 4
/// sizes whose pairwise local slopes stay within 0.25 of each other,
/// preferring coarser boxes on ties; if no window qualifies, all usable
/// sizes are fitted. The result is clamped to [0, dim].
inline double fractal_dimension_from_series(BoxCountSeries& series, int dim) {
  // Counts are monotone in D, so the usable sizes form one consecutive run.
  // The abscissa uses exact dyadic steps (sizes halve per level) rather than
  // log of the world-unit size: same slope, but bit-stable under translation.
  std::vector<detail::LogLogPoint> pts;  // coarse -> fine
  std::vector<int> level_of_point;
  for (std::size_t i = 0; i < series.box_sizes.size(); ++i) {
    const long long n = series.counts[i];
    if (n > 1 && n < series.occupied_cells) {
      pts.push_back({static_cast<double>(i) * std::log(2.0),
                     std::log(static_cast<double>(n))});
      level_of_point.push_back(static_cast<int>(i));
    } else if (!pts.empty()) {
      break;
    }
  }
  if (pts.size() < 4)
    throw undefined_feature_error("fractal_dimension",
                                  "fewer than 4 usable box sizes for the fit");

  const int npts = static_cast<int>(pts.size());
  std::vector<double> local(npts - 1);
  for (int i = 0; i + 1 < npts; ++i)
    local[i] = (pts[i + 1].y - pts[i].y) / (pts[i + 1].x - pts[i].x);

  constexpr double inf = std::numeric_limits<double>::infinity();
  int best_first = -1, best_last = -1;
  for (int i = 0; i < npts; ++i) {
    double mn = inf, mx = -inf;
    for (int j = i + 1; j < npts; ++j) {
      mn = std::min(mn, local[j - 1]);
      mx = std::max(mx, local[j - 1]);
      if (mx - mn > 0.25) break;
      if (j - i + 1 >= 4 && (best_first < 0 || j - i > best_last - best_first)) {
        best_first = i;
        best_last = j;
      }
    }
  }
  if (best_first < 0) {
    best_first = 0;
    best_last = npts - 1;
  }

  const auto [slope, intercept] = detail::least_squares(pts, best_first, best_last);
  series.slope = slope;
  series.intercept = intercept;
  series.fit_first = level_of_point[best_first];
  series.fit_last = level_of_point[best_last];
  return std::clamp(slope, 0.0, static_cast<double>(dim));
}

inline double fractal_dimension(const ShapeGraph& g, int grid_cells = 0) {
  BoxCountSeries series = box_count(g, grid_cells);
  return fractal_dimension_from_series(series, g.dim);
}

}  // namespace sgmorph
