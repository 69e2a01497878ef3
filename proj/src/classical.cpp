#include "icd/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icd {

double tc_score(const WeightedGraph& g) {
  return 1.0 - tc_min_split_threshold(g);
}

namespace {

// Component count among the surviving nodes of the strictly-thresholded
// subgraph.
int surviving_component_count(const WeightedGraph& g,
                              const std::vector<int>& survivors, double t) {
  std::vector<int> position(g.node_count, -1);
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    position[survivors[i]] = static_cast<int>(i);
  }
  UnionFind uf(static_cast<int>(survivors.size()));
  for (const Edge& e : g.edges) {
    if (e.w > t && position[e.u] >= 0 && position[e.v] >= 0) {
      uf.unite(position[e.u], position[e.v]);
    }
  }
  return uf.set_count();
}

}  // namespace

double kcore_score(const WeightedGraph& g, int k,
                   const std::vector<double>& extra_grid) {
  if (k < 1) throw std::invalid_argument("kcore_score: k must be >= 1");

  // Sweep thresholds upward; the core only changes when t crosses an edge
  // weight, so the grid of distinct weights (plus 0) is exhaustive. Edges are
  // kept strictly above t, so grid value t probes the filtration just past t.
  std::vector<double> grid{0.0};
  for (const Edge& e : g.edges) grid.push_back(e.w);
  grid.insert(grid.end(), extra_grid.begin(), extra_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  for (double t : grid) {
    const std::vector<int> core = k_core(g, k, t, EdgeKeep::kStrictlyAbove);
    if (static_cast<int>(core.size()) < g.node_count) return 1.0 - t;
    if (surviving_component_count(g, core, t) >= 2) return 1.0 - t;
  }
  // Unreachable for k >= 1: past the largest weight every node is degree 0.
  return 0.0;
}

const std::vector<std::string>& SuperPartFeatures::names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"node_count", "mean_edge",
                                  "min_edge",   "max_edge",
                                  "std_edge",   "mean_external_edge_at_t0"};
    for (double t : kFeatureGrid) {
      n.push_back("components_at_" + std::to_string(t).substr(0, 3));
    }
    for (double t : kFeatureGrid) {
      n.push_back("frac_below_" + std::to_string(t).substr(0, 3));
    }
    return n;
  }();
  return names;
}

SuperPartFeatures superpart_featurize(const WeightedGraph& g) {
  if (g.edges.empty()) {
    throw std::invalid_argument(
        "superpart_featurize: edgeless graph has no mean edge");
  }
  const double m = static_cast<double>(g.edges.size());

  double sum = 0.0, min_w = 1.0, max_w = 0.0;
  for (const Edge& e : g.edges) {
    sum += e.w;
    min_w = std::min(min_w, e.w);
    max_w = std::max(max_w, e.w);
  }
  const double mean = sum / m;
  double var = 0.0;
  for (const Edge& e : g.edges) var += (e.w - mean) * (e.w - mean);
  var /= m;  // population variance

  // Mean of the edges transitive closure removes at the fixed threshold,
  // i.e. edges with w < t0 under the keep-w>=t convention. 0 if none.
  double external_sum = 0.0;
  int external_count = 0;
  for (const Edge& e : g.edges) {
    if (e.w < kExternalEdgeThreshold) {
      external_sum += e.w;
      ++external_count;
    }
  }

  SuperPartFeatures f;
  f.values[0] = static_cast<double>(g.node_count);
  f.values[1] = mean;
  f.values[2] = min_w;
  f.values[3] = max_w;
  f.values[4] = std::sqrt(var);
  f.values[5] = external_count > 0 ? external_sum / external_count : 0.0;
  int slot = 6;
  for (double t : kFeatureGrid) {
    f.values[slot++] =
        static_cast<double>(components_at_threshold(g, t).cluster_count);
  }
  for (double t : kFeatureGrid) {
    int below = 0;
    for (const Edge& e : g.edges) {
      if (e.w < t) ++below;
    }
    f.values[slot++] = static_cast<double>(below) / m;
  }
  return f;
}

}  // namespace icd
