#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmorph/core/rng.hpp"
#include "sgmorph/core/shape_graph.hpp"
#include "sgmorph/features/directional.hpp"

namespace sgmorph {

namespace detail {

inline void rotate_translate_2d(ShapeGraph& g, double angle, Vec3 t) {
  const double c = std::cos(angle), s = std::sin(angle);
  const auto apply_pt = [&](Vec3& p) {
    const double x = c * p.x - s * p.y + t.x;
    const double y = s * p.x + c * p.y + t.y;
    p = {x, y, 0.0};
  };
  for (Vec3& p : g.nodes) apply_pt(p);
  for (Polyline& b : g.branches)
    for (Vec3& p : b) apply_pt(p);
}

inline bool edge_exists(const ShapeGraph& g, int u, int v) {
  for (const Edge& e : g.edges)
    if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return true;
  return false;
}

/// Curved branch by a heading random walk; returns the polyline from `from`
/// and the final heading. The caller owns node bookkeeping.
inline Polyline wander_2d(Rng& rng, Vec3 from, double heading, double length,
                          double step, double drift, double* heading_out = nullptr) {
  Polyline poly = {from};
  double walked = 0.0;
  while (walked < length) {
    heading += rng.normal(0.0, drift);
    const double ds = std::min(step, length - walked);
    poly.push_back(poly.back() + Vec3{ds * std::cos(heading), ds * std::sin(heading), 0});
    walked += ds;
  }
  if (heading_out) *heading_out = heading;
  return poly;
}

}  // namespace detail

/// Jittered lattice of mostly straight streets: low circuity, two dominant
/// directions, dense edge set.
inline ShapeGraph synth_grid(std::uint64_t seed, const std::string& id = "grid") {
  Rng rng(seed);
  ShapeGraph g;
  g.dim = 2;
  g.id = id;
  g.label = "grid";
  const int nx = 6 + static_cast<int>(rng.uniform_int(4));
  const int ny = 6 + static_cast<int>(rng.uniform_int(4));
  const double jitter = 0.05;
  const double y_spacing = 1.3;  // anisotropy pins the dominant street family
  std::vector<int> node_at(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      node_at[j * nx + i] = static_cast<int>(g.nodes.size());
      g.nodes.push_back({i + rng.uniform(-jitter, jitter),
                         j * y_spacing + rng.uniform(-jitter, jitter), 0});
    }
  const auto add_street = [&](int u, int v) {
    const Vec3 a = g.nodes[u], b = g.nodes[v];
    const Vec3 dir = b - a;
    const Vec3 perp = normalized(Vec3{-dir.y, dir.x, 0});
    const double amp = rng.uniform(0.002, 0.02);
    Polyline poly = {a};
    for (int k = 1; k < 4; ++k) {
      const double t = k / 4.0;
      poly.push_back(a + dir * t + perp * (amp * std::sin(2 * k_pi * t)));
    }
    poly.push_back(b);
    g.edges.push_back({u, v});
    g.branches.push_back(std::move(poly));
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (i + 1 < nx) add_street(node_at[j * nx + i], node_at[j * nx + i + 1]);
      if (j + 1 < ny) add_street(node_at[j * nx + i], node_at[(j + 1) * nx + i]);
    }

  // thin out some streets, keeping the network connected
  std::vector<std::size_t> order(g.edges.size());
  for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
  rng.shuffle(order);
  const std::size_t target_removals = order.size() / 10;
  std::vector<bool> keep_edge(g.edges.size(), true);
  std::size_t removed = 0;
  const auto rebuild = [&] {
    ShapeGraph trial = g;
    trial.edges.clear();
    trial.branches.clear();
    for (std::size_t k = 0; k < g.edges.size(); ++k)
      if (keep_edge[k]) {
        trial.edges.push_back(g.edges[k]);
        trial.branches.push_back(g.branches[k]);
      }
    return trial;
  };
  for (const std::size_t e : order) {
    if (removed >= target_removals) break;
    keep_edge[e] = false;
    if (is_connected(rebuild()))
      ++removed;
    else
      keep_edge[e] = true;
  }
  g = rebuild();

  detail::rotate_translate_2d(g, rng.uniform(0, 2 * k_pi),
                              {rng.uniform(-5, 5), rng.uniform(-5, 5), 0});
  return g;
}

/// Random curved tree with a few loop closures: high circuity, isotropic
/// directions, sparse edge set.
inline ShapeGraph synth_organic(std::uint64_t seed, const std::string& id = "organic") {
  Rng rng(seed);
  ShapeGraph g;
  g.dim = 2;
  g.id = id;
  g.label = "organic";
  g.nodes.push_back({0, 0, 0});

  struct Tip {
    int node;
    double heading;
  };
  std::vector<Tip> frontier;
  const int seeds = 3;
  for (int s = 0; s < seeds; ++s)
    frontier.push_back({0, rng.uniform(0, 2 * k_pi)});
  const int target_edges = 26 + static_cast<int>(rng.uniform_int(18));
  const double drift = rng.uniform(0.38, 0.46);

  while (!frontier.empty() && static_cast<int>(g.edges.size()) < target_edges) {
    const std::size_t pick = rng.uniform_int(frontier.size());
    const Tip tip = frontier[pick];
    frontier.erase(frontier.begin() + pick);
    double heading_out = tip.heading;
    const Polyline poly =
        detail::wander_2d(rng, g.nodes[tip.node], tip.heading,
                          rng.uniform(1.4, 2.2), 0.12, drift, &heading_out);
    const int leaf = static_cast<int>(g.nodes.size());
    g.nodes.push_back(poly.back());
    g.edges.push_back({tip.node, leaf});
    g.branches.push_back(poly);
    const int children = rng.uniform() < 0.75 ? 2 : 1;
    for (int c = 0; c < children; ++c)
      frontier.push_back(
          {leaf, heading_out + (c == 0 ? 1 : -1) * rng.uniform(0.35, 1.1)});
  }

  // a couple of loop closures between nearby leaves
  int loops = static_cast<int>(rng.uniform_int(3));
  for (int attempt = 0; attempt < 40 && loops > 0; ++attempt) {
    const int u = static_cast<int>(rng.uniform_int(g.nodes.size()));
    const int v = static_cast<int>(rng.uniform_int(g.nodes.size()));
    if (u == v || detail::edge_exists(g, u, v)) continue;
    const double d = distance(g.nodes[u], g.nodes[v]);
    if (d > 0.8 || d < 1e-6) continue;
    const double heading =
        std::atan2(g.nodes[v].y - g.nodes[u].y, g.nodes[v].x - g.nodes[u].x) +
        rng.uniform(-0.5, 0.5);
    Polyline arc = detail::wander_2d(rng, g.nodes[u], heading, d * 1.2, 0.1, 0.2);
    arc.push_back(g.nodes[v]);
    g.edges.push_back({u, v});
    g.branches.push_back(std::move(arc));
    --loops;
  }
  return g;
}

/// Grid core with organic outgrowths: intermediate everything.
inline ShapeGraph synth_hybrid(std::uint64_t seed, const std::string& id = "hybrid") {
  Rng rng(seed);
  ShapeGraph g;
  g.dim = 2;
  g.id = id;
  g.label = "hybrid";
  const int nx = 5 + static_cast<int>(rng.uniform_int(2));
  const int ny = 5 + static_cast<int>(rng.uniform_int(2));
  std::vector<int> node_at(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      node_at[j * nx + i] = static_cast<int>(g.nodes.size());
      g.nodes.push_back({i + rng.uniform(-0.08, 0.08), j + rng.uniform(-0.08, 0.08), 0});
    }
  const auto add_street = [&](int u, int v) {
    const Vec3 a = g.nodes[u], b = g.nodes[v];
    const Vec3 dir = b - a;
    const Vec3 perp = normalized(Vec3{-dir.y, dir.x, 0});
    const double amp = rng.uniform(0.06, 0.11);
    Polyline poly = {a};
    for (int k = 1; k < 6; ++k) {
      const double t = k / 6.0;
      poly.push_back(a + dir * t + perp * (amp * std::sin(2 * k_pi * t)));
    }
    poly.push_back(b);
    g.edges.push_back({u, v});
    g.branches.push_back(std::move(poly));
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (i + 1 < nx) add_street(node_at[j * nx + i], node_at[j * nx + i + 1]);
      if (j + 1 < ny) add_street(node_at[j * nx + i], node_at[(j + 1) * nx + i]);
    }

  // organic outgrowths from boundary intersections
  std::vector<int> boundary;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1)
        boundary.push_back(node_at[j * nx + i]);
  rng.shuffle(boundary);
  const std::size_t grow_from = boundary.size() / 2;
  for (std::size_t b = 0; b < grow_from; ++b) {
    int at = boundary[b];
    const int segments = 1 + static_cast<int>(rng.uniform_int(2));
    double heading = rng.uniform(0, 2 * k_pi);
    for (int s = 0; s < segments; ++s) {
      const Polyline poly = detail::wander_2d(rng, g.nodes[at], heading,
                                              rng.uniform(0.5, 0.9), 0.12,
                                              rng.uniform(0.16, 0.22), &heading);
      const int leaf = static_cast<int>(g.nodes.size());
      g.nodes.push_back(poly.back());
      g.edges.push_back({at, leaf});
      g.branches.push_back(poly);
      at = leaf;
      heading += rng.uniform(-0.6, 0.6);
    }
  }
  detail::rotate_translate_2d(g, rng.uniform(0, 2 * k_pi),
                              {rng.uniform(-5, 5), rng.uniform(-5, 5), 0});
  return g;
}

/// Random 3D branching tree with curved branches.
inline ShapeGraph synth_tree3d(std::uint64_t seed, const std::string& id = "tree3d") {
  Rng rng(seed);
  ShapeGraph g;
  g.dim = 3;
  g.id = id;
  g.label = "tree3d";
  g.nodes.push_back({0, 0, 0});

  struct Tip {
    int node;
    Vec3 heading;
    int depth;
  };
  const auto random_unit = [&]() {
    Vec3 v{rng.normal(), rng.normal(), rng.normal()};
    while (norm(v) < 1e-6) v = {rng.normal(), rng.normal(), rng.normal()};
    return normalized(v);
  };
  std::vector<Tip> frontier = {{0, random_unit(), 0}};
  const int target_edges = 18 + static_cast<int>(rng.uniform_int(22));
  const int max_depth = 5;

  while (!frontier.empty() && static_cast<int>(g.edges.size()) < target_edges) {
    const std::size_t pick = rng.uniform_int(frontier.size());
    Tip tip = frontier[pick];
    frontier.erase(frontier.begin() + pick);

    Polyline poly = {g.nodes[tip.node]};
    Vec3 heading = tip.heading;
    const double length = rng.uniform(0.8, 2.0);
    double walked = 0.0;
    while (walked < length) {
      heading = normalized(heading + Vec3{rng.normal(0, 0.18), rng.normal(0, 0.18),
                                          rng.normal(0, 0.18)});
      const double ds = std::min(0.12, length - walked);
      poly.push_back(poly.back() + heading * ds);
      walked += ds;
    }
    const int leaf = static_cast<int>(g.nodes.size());
    g.nodes.push_back(poly.back());
    g.edges.push_back({tip.node, leaf});
    g.branches.push_back(std::move(poly));

    if (tip.depth + 1 < max_depth) {
      const int children = rng.uniform() < 0.7 ? 2 : 1;
      for (int c = 0; c < children; ++c) {
        const Vec3 offset = random_unit();
        frontier.push_back(
            {leaf, normalized(heading + offset * rng.uniform(0.3, 0.8)), tip.depth + 1});
      }
    }
  }
  return g;
}

/// Seeded generator dispatch. Sample i uses an rng derived from (seed, i).
inline ShapeGraph synth_graph(const std::string& kind, std::uint64_t seed, int index) {
  const std::uint64_t sample_seed = Rng(seed).derive(index).next();
  const std::string id = kind + "_" + std::to_string(index);
  if (kind == "grid") return synth_grid(sample_seed, id);
  if (kind == "organic") return synth_organic(sample_seed, id);
  if (kind == "hybrid") return synth_hybrid(sample_seed, id);
  if (kind == "tree3d") return synth_tree3d(sample_seed, id);
  throw std::invalid_argument("unknown synth kind '" + kind + "'");
}

}  // namespace sgmorph
