#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "sgmorph/core/shape_graph.hpp"
#include "sgmorph/ingest/build.hpp"

namespace sgmorph {

namespace detail {

/// Node index at branch point k of edge e, splitting the branch there when
/// the point is interior.
inline int node_at_branch_point(ShapeGraph& g, std::size_t e, std::size_t k) {
  if (k == 0) return g.edges[e].u;
  if (k + 1 == g.branches[e].size()) return g.edges[e].v;
  return split_branch_at(g, e, k);
}

}  // namespace detail

/// Astrocyte-style component cleanup. Component size is its total branch
/// length. Components below `ratio` of the largest are deleted; every other
/// non-largest component is merged into the largest with a straight bridge
/// branch between the closest pair of polyline points when that distance is
/// at most `reconnect_dist`, and deleted otherwise. The result is connected
/// (or empty when the input was).
inline ShapeGraph clean_components(const ShapeGraph& input, double ratio = 0.05,
                                   double reconnect_dist = 6.0,
                                   std::vector<std::string>* warnings = nullptr) {
  if (input.nodes.empty()) return input;
  const Components comps = connected_components(input);
  if (comps.count <= 1) return input;

  std::vector<double> size(comps.count, 0.0);
  for (std::size_t e = 0; e < input.edges.size(); ++e)
    size[comps.label[input.edges[e].u]] += branch_length(input, e);
  int largest = 0;
  for (int c = 1; c < comps.count; ++c)
    if (size[c] > size[largest]) largest = c;

  std::vector<bool> keep_comp(comps.count, false);
  keep_comp[largest] = true;
  for (int c = 0; c < comps.count; ++c) {
    if (c == largest) continue;
    if (size[c] >= ratio * size[largest])
      keep_comp[c] = true;
    else if (warnings)
      warnings->push_back("removed component of relative size " +
                          std::to_string(size[largest] > 0 ? size[c] / size[largest] : 0.0));
  }

  // Work graph: the largest component; candidates merged in one at a time.
  std::vector<bool> keep_node(input.nodes.size());
  for (std::size_t i = 0; i < input.nodes.size(); ++i)
    keep_node[i] = comps.label[i] == largest;
  ShapeGraph merged = induced_subgraph(input, keep_node);

  for (int c = 0; c < comps.count; ++c) {
    if (c == largest || !keep_comp[c]) continue;
    for (std::size_t i = 0; i < input.nodes.size(); ++i)
      keep_node[i] = comps.label[i] == c;
    const ShapeGraph part = induced_subgraph(input, keep_node);

    // closest pair over all polyline points, largest side first
    double best = std::numeric_limits<double>::infinity();
    std::size_t main_e = 0, main_k = 0, part_e = 0, part_k = 0;
    bool main_is_node = false, part_is_node = false;
    std::size_t main_node = 0, part_node = 0;
    const auto scan = [&](const ShapeGraph& a, const ShapeGraph& b) {
      for (std::size_t ea = 0; ea < a.branches.size(); ++ea)
        for (std::size_t ka = 0; ka < a.branches[ea].size(); ++ka)
          for (std::size_t eb = 0; eb < b.branches.size(); ++eb)
            for (std::size_t kb = 0; kb < b.branches[eb].size(); ++kb) {
              const double d = distance(a.branches[ea][ka], b.branches[eb][kb]);
              if (d < best) {
                best = d;
                main_e = ea;
                main_k = ka;
                part_e = eb;
                part_k = kb;
              }
            }
    };
    scan(merged, part);
    // isolated nodes carry no branches; cover them too
    for (std::size_t ia = 0; ia < merged.nodes.size(); ++ia)
      for (std::size_t eb = 0; eb < part.branches.size(); ++eb)
        for (std::size_t kb = 0; kb < part.branches[eb].size(); ++kb) {
          const double d = distance(merged.nodes[ia], part.branches[eb][kb]);
          if (d < best) {
            best = d;
            main_is_node = true;
            main_node = ia;
            part_e = eb;
            part_k = kb;
          }
        }
    for (std::size_t ib = 0; ib < part.nodes.size(); ++ib)
      for (std::size_t ea = 0; ea < merged.branches.size(); ++ea)
        for (std::size_t ka = 0; ka < merged.branches[ea].size(); ++ka) {
          const double d = distance(part.nodes[ib], merged.branches[ea][ka]);
          if (d < best) {
            best = d;
            part_is_node = true;
            part_node = ib;
            main_is_node = false;
            main_e = ea;
            main_k = ka;
          }
        }

    if (best > reconnect_dist) {
      if (warnings)
        warnings->push_back("discarded component at distance " + std::to_string(best));
      continue;
    }

    const int attach_main = main_is_node
                                ? static_cast<int>(main_node)
                                : detail::node_at_branch_point(merged, main_e, main_k);
    // splice the part into the merged graph
    const int offset = static_cast<int>(merged.nodes.size());
    merged.nodes.insert(merged.nodes.end(), part.nodes.begin(), part.nodes.end());
    for (std::size_t e = 0; e < part.edges.size(); ++e) {
      merged.edges.push_back({part.edges[e].u + offset, part.edges[e].v + offset});
      merged.branches.push_back(part.branches[e]);
    }
    const int attach_part =
        part_is_node ? offset + static_cast<int>(part_node)
                     : detail::node_at_branch_point(
                           merged, merged.branches.size() - part.edges.size() + part_e,
                           part_k);

    if (best > 1e-12) {
      merged.edges.push_back({attach_main, attach_part});
      merged.branches.push_back(
          {merged.nodes[attach_main], merged.nodes[attach_part]});
    } else {
      // coincident points: collapse into a single node
      for (Edge& e : merged.edges) {
        if (e.u == attach_part) e.u = attach_main;
        if (e.v == attach_part) e.v = attach_main;
      }
    }
  }

  normalize_multi_edges(merged, warnings);
  drop_isolated_nodes(merged);
  return merged;
}

}  // namespace sgmorph
