#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "sgmorph/core/error.hpp"
#include "sgmorph/core/shape_graph.hpp"
#include "sgmorph/ingest/build.hpp"

namespace sgmorph {

/// Binary occupancy grid (row-major); nonzero = foreground, pixel units.
struct SkeletonMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  bool at(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height &&
           pixels[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool on = true) {
    pixels[static_cast<std::size_t>(y) * width + x] = on ? 1 : 0;
  }
};

namespace detail {

inline constexpr int k_dx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
inline constexpr int k_dy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

/// 8-connectivity with redundant diagonal links removed (m-adjacency): a
/// diagonal step counts only when neither shared orthogonal neighbor is
/// foreground. Components match plain 8-connectivity, but pixel degrees
/// stay meaningful next to junctions (a plus-shaped crossing keeps exactly
/// one degree-4 pixel instead of a cluster).
inline bool m_adjacent(const SkeletonMask& mask, int x, int y, int k) {
  const int nx = x + k_dx[k], ny = y + k_dy[k];
  if (!mask.at(nx, ny)) return false;
  if (k_dx[k] == 0 || k_dy[k] == 0) return true;
  return !mask.at(nx, y) && !mask.at(x, ny);
}

/// 8-connected component labels over foreground pixels (-1 = background).
inline std::vector<int> mask_components(const SkeletonMask& mask, int* count = nullptr) {
  std::vector<int> label(static_cast<std::size_t>(mask.width) * mask.height, -1);
  int components = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y) || label[y * static_cast<std::size_t>(mask.width) + x] >= 0)
        continue;
      const int c = components++;
      stack.push_back({x, y});
      label[y * static_cast<std::size_t>(mask.width) + x] = c;
      while (!stack.empty()) {
        const auto [px, py] = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          const int nx = px + k_dx[k], ny = py + k_dy[k];
          if (!mask.at(nx, ny)) continue;
          auto& l = label[ny * static_cast<std::size_t>(mask.width) + nx];
          if (l < 0) {
            l = c;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  if (count) *count = components;
  return label;
}

}  // namespace detail

/// Removes 8-connected foreground components with fewer than `min_pixels`
/// pixels ("fewer than" is strict: components of exactly min_pixels stay).
inline SkeletonMask prune_fragments(const SkeletonMask& mask, int min_pixels = 6) {
  int count = 0;
  const std::vector<int> label = detail::mask_components(mask, &count);
  std::vector<long long> sizes(count, 0);
  for (const int l : label)
    if (l >= 0) ++sizes[l];
  SkeletonMask out = mask;
  for (std::size_t i = 0; i < label.size(); ++i)
    if (label[i] >= 0 && sizes[label[i]] < min_pixels) out.pixels[i] = 0;
  return out;
}

/// Converts a 1-pixel-wide skeleton into a shape graph with 8-connectivity:
/// nodes are pixels of degree != 2, branches the maximal degree-2 chains
/// between them, recorded as polylines of pixel centers. A pure cycle
/// (every pixel degree 2) is anchored at its first pixel in scan order and
/// cut into three arcs, which keeps the graph free of self-loops and
/// parallel edges.
inline ShapeGraph skeleton_to_graph(const SkeletonMask& mask,
                                    std::vector<std::string>* warnings = nullptr) {
  ShapeGraph g;
  g.dim = 2;
  long long foreground = 0;
  for (const auto p : mask.pixels) foreground += p != 0;
  if (foreground == 0) throw parse_error("skeleton mask has no foreground pixels");

  const auto pixel_index = [&](int x, int y) {
    return static_cast<std::size_t>(y) * mask.width + x;
  };
  const auto center = [](int x, int y) {
    return Vec3{static_cast<double>(x), static_cast<double>(y), 0.0};
  };

  std::vector<int> degree(static_cast<std::size_t>(mask.width) * mask.height, 0);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      int d = 0;
      for (int k = 0; k < 8; ++k) d += detail::m_adjacent(mask, x, y, k);
      degree[pixel_index(x, y)] = d;
    }

  std::vector<int> node_of(static_cast<std::size_t>(mask.width) * mask.height, -1);
  const auto make_node = [&](int x, int y) {
    int& id = node_of[pixel_index(x, y)];
    if (id < 0) {
      id = static_cast<int>(g.nodes.size());
      g.nodes.push_back(center(x, y));
    }
    return id;
  };
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.at(x, y) && degree[pixel_index(x, y)] != 2) make_node(x, y);

  // chains between nodes
  std::vector<bool> step_used(static_cast<std::size_t>(mask.width) * mask.height * 8,
                              false);
  const auto use_step = [&](int x, int y, int k) {
    step_used[pixel_index(x, y) * 8 + k] = true;
    const int nx = x + detail::k_dx[k], ny = y + detail::k_dy[k];
    step_used[pixel_index(nx, ny) * 8 + (7 - k)] = true;  // reverse direction
  };
  const auto step_is_used = [&](int x, int y, int k) {
    return step_used[pixel_index(x, y) * 8 + k];
  };

  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (node_of[pixel_index(x, y)] < 0 || !mask.at(x, y)) continue;
      for (int k = 0; k < 8; ++k) {
        if (step_is_used(x, y, k)) continue;
        if (!detail::m_adjacent(mask, x, y, k)) continue;
        const int sx = x + detail::k_dx[k], sy = y + detail::k_dy[k];
        Polyline poly = {center(x, y)};
        use_step(x, y, k);
        int px = x, py = y, cx = sx, cy = sy;
        while (node_of[pixel_index(cx, cy)] < 0) {
          poly.push_back(center(cx, cy));
          int next_k = -1;
          for (int k2 = 0; k2 < 8; ++k2) {
            if (!detail::m_adjacent(mask, cx, cy, k2)) continue;
            const int nx = cx + detail::k_dx[k2], ny = cy + detail::k_dy[k2];
            if (nx == px && ny == py) continue;
            next_k = k2;
            break;
          }
          if (next_k < 0) break;  // dead end: degree bookkeeping says impossible
          use_step(cx, cy, next_k);
          px = cx;
          py = cy;
          cx += detail::k_dx[next_k];
          cy += detail::k_dy[next_k];
        }
        poly.push_back(center(cx, cy));
        g.edges.push_back({node_of[pixel_index(x, y)], node_of[pixel_index(cx, cy)]});
        g.branches.push_back(std::move(poly));
      }
    }

  // pure cycles: no degree!=2 pixel anywhere on the component
  std::vector<bool> in_graph(static_cast<std::size_t>(mask.width) * mask.height, false);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      bool touched = node_of[pixel_index(x, y)] >= 0;
      for (int k = 0; k < 8 && !touched; ++k) touched = step_is_used(x, y, k);
      in_graph[pixel_index(x, y)] = touched;
    }
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y) || in_graph[pixel_index(x, y)]) continue;
      // walk the full cycle from its scan-order anchor
      std::vector<std::pair<int, int>> cycle = {{x, y}};
      in_graph[pixel_index(x, y)] = true;
      int px = -1, py = -1, cx = x, cy = y;
      while (true) {
        int next_k = -1;
        for (int k2 = 0; k2 < 8; ++k2) {
          if (!detail::m_adjacent(mask, cx, cy, k2)) continue;
          const int nx = cx + detail::k_dx[k2], ny = cy + detail::k_dy[k2];
          if (nx == px && ny == py) continue;
          if (nx == x && ny == y && cycle.size() > 2) {
            next_k = -2;  // closed
            break;
          }
          if (in_graph[pixel_index(nx, ny)]) continue;
          next_k = k2;
          break;
        }
        if (next_k < 0) break;
        px = cx;
        py = cy;
        cx += detail::k_dx[next_k];
        cy += detail::k_dy[next_k];
        in_graph[pixel_index(cx, cy)] = true;
        cycle.push_back({cx, cy});
      }
      const std::size_t n = cycle.size();
      if (n < 3) continue;  // cannot happen for genuine degree-2 cycles
      const std::size_t cuts[3] = {0, n / 3, 2 * n / 3};
      int ids[3];
      for (int c = 0; c < 3; ++c) ids[c] = make_node(cycle[cuts[c]].first, cycle[cuts[c]].second);
      for (int c = 0; c < 3; ++c) {
        const std::size_t from = cuts[c];
        const std::size_t to = cuts[(c + 1) % 3];
        Polyline poly;
        for (std::size_t i = from; i != to; i = (i + 1) % n)
          poly.push_back(center(cycle[i].first, cycle[i].second));
        poly.push_back(center(cycle[to].first, cycle[to].second));
        g.edges.push_back({ids[c], ids[(c + 1) % 3]});
        g.branches.push_back(std::move(poly));
      }
    }

  normalize_multi_edges(g, warnings);
  return g;
}

}  // namespace sgmorph
