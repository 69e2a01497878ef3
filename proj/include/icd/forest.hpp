#pragma once

#include <cstdint>
#include <vector>

namespace icd {

struct ForestConfig {
  int tree_count = 200;
  int max_depth = 0;  // 0 = unlimited
  int min_samples_leaf = 1;
  int features_per_split = 0;  // 0 = ceil(sqrt(feature_count))
  std::uint64_t seed = 0;
};

// One node of a CART tree. Leaves have feature == -1 and carry the class-1
// fraction of the training rows that reached them.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct RandomForestModel {
  ForestConfig config;
  int feature_count = 0;
  std::vector<DecisionTree> trees;
};

// Bagged CART trees split on Gini impurity with a random feature subset per
// split. Deterministic given config.seed: tree i draws from the substream
// (seed, i), so a concurrent trainer produces the same forest as this
// sequential one. Requires >= 2 rows, labels in {0,1} and both classes
// present.
RandomForestModel forest_fit(const std::vector<std::vector<double>>& features,
                             const std::vector<int>& labels,
                             const ForestConfig& config);

// Mean leaf class-1 fraction across trees; always in [0, 1]. Throws on a
// feature-length mismatch.
double forest_score(const RandomForestModel& model,
                    const std::vector<double>& features);

}  // namespace icd
