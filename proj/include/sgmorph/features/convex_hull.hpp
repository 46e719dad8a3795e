#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "sgmorph/core/vec.hpp"

namespace sgmorph {

/// Area of the 2D convex hull (monotone chain + shoelace). Collinear or
/// empty inputs give 0.
inline double hull_area_2d(std::vector<Vec3> pts) {
  if (pts.size() < 3) return 0.0;
  std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec3& a, const Vec3& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return 0.0;

  const auto turn = [](const Vec3& o, const Vec3& a, const Vec3& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec3> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : 0);

  double area2 = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec3& a = hull[i];
    const Vec3& b = hull[(i + 1) % hull.size()];
    area2 += a.x * b.y - b.x * a.y;
  }
  return std::abs(area2) / 2.0;
}

namespace detail {

struct HullFace {
  int a, b, c;
  Vec3 normal;    // outward, not normalized
  double offset;  // dot(normal, vertex a)
  bool alive = true;
};

inline double face_dist(const HullFace& f, const Vec3& p) {
  return dot(f.normal, p) - f.offset;
}

}  // namespace detail

/// Volume of the 3D convex hull via incremental insertion (quickhull-style
/// visibility walk, one pass over the points). Degenerate (coplanar or
/// lower-dimensional) inputs give 0.
inline double hull_volume_3d(const std::vector<Vec3>& input) {
  using detail::HullFace;
  if (input.size() < 4) return 0.0;

  Vec3 lo = input[0], hi = input[0];
  for (const Vec3& p : input)
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  const double diag = distance(lo, hi);
  if (!(diag > 0.0)) return 0.0;
  const double eps = 1e-9 * diag;

  // Initial simplex: most distant pair along the longest axis, then the
  // point farthest from that line, then from that plane.
  const std::size_t n = input.size();
  std::size_t i0 = 0, i1 = 0;
  {
    double best = -1.0;
    for (int k = 0; k < 3; ++k) {
      std::size_t mn = 0, mx = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (input[i][k] < input[mn][k]) mn = i;
        if (input[i][k] > input[mx][k]) mx = i;
      }
      const double d = std::abs(input[mx][k] - input[mn][k]);
      if (d > best) {
        best = d;
        i0 = mn;
        i1 = mx;
      }
    }
  }
  if (distance(input[i0], input[i1]) <= eps) return 0.0;

  std::size_t i2 = n;
  {
    const Vec3 dir = normalized(input[i1] - input[i0]);
    double best = eps;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 rel = input[i] - input[i0];
      const double d = norm(rel - dot(rel, dir) * dir);
      if (d > best) {
        best = d;
        i2 = i;
      }
    }
  }
  if (i2 == n) return 0.0;  // all collinear

  std::size_t i3 = n;
  {
    const Vec3 nrm = cross(input[i1] - input[i0], input[i2] - input[i0]);
    const double nn = norm(nrm);
    if (!(nn > 0.0)) return 0.0;
    double best = eps;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::abs(dot(nrm, input[i] - input[i0])) / nn;
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
  }
  if (i3 == n) return 0.0;  // all coplanar

  const Vec3 interior = (input[i0] + input[i1] + input[i2] + input[i3]) * 0.25;
  std::vector<HullFace> faces;
  const auto add_face = [&](int a, int b, int c) {
    HullFace f{a, b, c, {}, 0.0};
    f.normal = cross(input[b] - input[a], input[c] - input[a]);
    f.offset = dot(f.normal, input[a]);
    if (detail::face_dist(f, interior) > 0.0) {  // flip to outward
      std::swap(f.b, f.c);
      f.normal = -f.normal;
      f.offset = -f.offset;
    }
    faces.push_back(f);
  };
  add_face(static_cast<int>(i0), static_cast<int>(i1), static_cast<int>(i2));
  add_face(static_cast<int>(i0), static_cast<int>(i1), static_cast<int>(i3));
  add_face(static_cast<int>(i0), static_cast<int>(i2), static_cast<int>(i3));
  add_face(static_cast<int>(i1), static_cast<int>(i2), static_cast<int>(i3));

  // Insert remaining points, farthest from the interior first: large updates
  // happen early, which keeps later visibility tests well-conditioned.
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = squared_norm(input[a] - interior);
    const double db = squared_norm(input[b] - interior);
    return da > db || (da == db && a < b);
  });

  std::vector<int> visible;
  for (const std::size_t pi : order) {
    const Vec3& p = input[pi];
    visible.clear();
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
      if (!faces[fi].alive) continue;
      const double scale = norm(faces[fi].normal);
      if (detail::face_dist(faces[fi], p) > eps * std::max(scale, 1e-300))
        visible.push_back(static_cast<int>(fi));
    }
    if (visible.empty()) continue;

    // Horizon = undirected edges appearing in exactly one visible face
    // (orientation of the replacement faces comes from the interior test,
    // so windings need not be globally consistent).
    std::map<std::pair<int, int>, int> edge_count;
    for (const int fi : visible) {
      const HullFace& f = faces[fi];
      const int vs[3] = {f.a, f.b, f.c};
      for (int k = 0; k < 3; ++k) {
        const auto key = std::minmax(vs[k], vs[(k + 1) % 3]);
        edge_count[{key.first, key.second}]++;
      }
      faces[fi].alive = false;
    }
    for (const auto& [edge, cnt] : edge_count)
      if (cnt == 1) add_face(edge.first, edge.second, static_cast<int>(pi));
  }

  double vol6 = 0.0;
  for (const HullFace& f : faces) {
    if (!f.alive) continue;
    vol6 += dot(input[f.a] - interior,
                cross(input[f.b] - interior, input[f.c] - interior));
  }
  return std::abs(vol6) / 6.0;
}

}  // namespace sgmorph
