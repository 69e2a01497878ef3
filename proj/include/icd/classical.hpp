#pragma once

#include <array>
#include <string>
#include <vector>

#include "icd/graph.hpp"

namespace icd {

// Transitive-closure score: 1 - tc_min_split_threshold(g). Higher means the
// cluster breaks apart at a lower edge filter, i.e. more likely inconsistent.
double tc_score(const WeightedGraph& g);

// K-core score: 1 - t*, where t* is the smallest threshold in the grid
// {0} + distinct edge weights at which the k-core of the subgraph with
// edges strictly above t* loses nodes or splits into several components.
// extra_grid points may be added for testing; they never change the result
// unless they introduce new filtrations.
double kcore_score(const WeightedGraph& g, int k,
                   const std::vector<double>& extra_grid = {});

// Threshold grid shared by the featurizer slots below.
inline constexpr std::array<double, 9> kFeatureGrid = {0.1, 0.2, 0.3, 0.4, 0.5,
                                                       0.6, 0.7, 0.8, 0.9};
// Fixed threshold for the mean-external-edge slot.
inline constexpr double kExternalEdgeThreshold = 0.5;

inline constexpr int kSuperPartFeatureCount = 6 + 2 * static_cast<int>(kFeatureGrid.size());

// Fixed-length summary of a weighted graph, the input of the forest scorer.
// Layout (24 slots): node_count, mean_edge, min_edge, max_edge, std_edge,
// mean_external_edge_at_t0, then the component count at each grid threshold,
// then the fraction of edges below each grid threshold.
struct SuperPartFeatures {
  std::array<double, kSuperPartFeatureCount> values{};

  static const std::vector<std::string>& names();
};

// Deterministic featurization. Throws std::invalid_argument on an edgeless
// graph (mean edge undefined).
SuperPartFeatures superpart_featurize(const WeightedGraph& g);

}  // namespace icd
