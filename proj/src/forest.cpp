#include "icd/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "icd/rng.hpp"

namespace icd {

namespace {

struct TreeBuilder {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  int feature_count;
  int max_depth;
  int min_samples_leaf;
  int features_per_split;
  Rng& rng;
  std::vector<TreeNode> nodes;

  int make_leaf(const std::vector<int>& rows) {
    double positives = 0.0;
    for (int r : rows) positives += y[static_cast<std::size_t>(r)];
    TreeNode leaf;
    leaf.value = positives / static_cast<double>(rows.size());
    nodes.push_back(leaf);
    return static_cast<int>(nodes.size()) - 1;
  }

  // Gini impurity of a binary split, weighted by side sizes. Lower is better.
  static double split_cost(int n_left, int pos_left, int n_right,
                           int pos_right) {
    auto gini = [](int n, int pos) {
      const double p = static_cast<double>(pos) / n;
      return 1.0 - p * p - (1.0 - p) * (1.0 - p);
    };
    return (n_left * gini(n_left, pos_left) +
            n_right * gini(n_right, pos_right)) /
           static_cast<double>(n_left + n_right);
  }

  int build(std::vector<int>& rows, int depth) {
    int positives = 0;
    for (int r : rows) positives += y[static_cast<std::size_t>(r)];
    const int n = static_cast<int>(rows.size());
    const bool pure = positives == 0 || positives == n;
    if (pure || n < 2 * min_samples_leaf ||
        (max_depth > 0 && depth >= max_depth)) {
      return make_leaf(rows);
    }

    // Random feature subset, sampled without replacement.
    std::vector<int> candidates(static_cast<std::size_t>(feature_count));
    std::iota(candidates.begin(), candidates.end(), 0);
    for (int i = 0; i < features_per_split; ++i) {
      const int j =
          i + static_cast<int>(rng.uniform_int(
                  static_cast<std::uint64_t>(feature_count - i)));
      std::swap(candidates[static_cast<std::size_t>(i)],
                candidates[static_cast<std::size_t>(j)]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_cost = 2.0;  // above any attainable Gini
    std::vector<std::pair<double, int>> column(static_cast<std::size_t>(n));
    for (int ci = 0; ci < features_per_split; ++ci) {
      const int f = candidates[static_cast<std::size_t>(ci)];
      for (int i = 0; i < n; ++i) {
        const int r = rows[static_cast<std::size_t>(i)];
        column[static_cast<std::size_t>(i)] = {
            x[static_cast<std::size_t>(r)][static_cast<std::size_t>(f)],
            y[static_cast<std::size_t>(r)]};
      }
      std::sort(column.begin(), column.end());

      // Scan boundaries between distinct values; threshold is the midpoint.
      int pos_left = 0;
      for (int i = 0; i < n - 1; ++i) {
        pos_left += column[static_cast<std::size_t>(i)].second;
        if (column[static_cast<std::size_t>(i)].first ==
            column[static_cast<std::size_t>(i + 1)].first) {
          continue;
        }
        const int n_left = i + 1;
        const int n_right = n - n_left;
        if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;
        const double cost =
            split_cost(n_left, pos_left, n_right, positives - pos_left);
        if (cost < best_cost) {
          best_cost = cost;
          best_feature = f;
          best_threshold = 0.5 * (column[static_cast<std::size_t>(i)].first +
                                  column[static_cast<std::size_t>(i + 1)].first);
        }
      }
    }
    if (best_feature < 0) return make_leaf(rows);  // all candidates constant

    std::vector<int> left_rows, right_rows;
    for (int r : rows) {
      const double v =
          x[static_cast<std::size_t>(r)][static_cast<std::size_t>(best_feature)];
      (v < best_threshold ? left_rows : right_rows).push_back(r);
    }
    if (left_rows.empty() || right_rows.empty()) return make_leaf(rows);

    TreeNode split;
    split.feature = best_feature;
    split.threshold = best_threshold;
    const int index = static_cast<int>(nodes.size());
    nodes.push_back(split);
    const int left = build(left_rows, depth + 1);
    const int right = build(right_rows, depth + 1);
    nodes[static_cast<std::size_t>(index)].left = left;
    nodes[static_cast<std::size_t>(index)].right = right;
    return index;
  }
};

}  // namespace

RandomForestModel forest_fit(const std::vector<std::vector<double>>& features,
                             const std::vector<int>& labels,
                             const ForestConfig& config) {
  if (features.size() != labels.size() || features.size() < 2) {
    throw std::invalid_argument(
        "forest_fit: need matching features/labels with at least 2 rows");
  }
  const int positives = std::accumulate(labels.begin(), labels.end(), 0);
  if (positives == 0 || positives == static_cast<int>(labels.size())) {
    throw std::invalid_argument("forest_fit: both classes must be present");
  }
  if (config.tree_count < 1) {
    throw std::invalid_argument("forest_fit: tree_count must be >= 1");
  }
  const int feature_count = static_cast<int>(features[0].size());
  for (const auto& row : features) {
    if (static_cast<int>(row.size()) != feature_count) {
      throw std::invalid_argument("forest_fit: ragged feature matrix");
    }
  }

  RandomForestModel model;
  model.config = config;
  model.feature_count = feature_count;
  if (model.config.features_per_split <= 0) {
    model.config.features_per_split =
        static_cast<int>(std::ceil(std::sqrt(feature_count)));
  }
  model.config.features_per_split =
      std::min(model.config.features_per_split, feature_count);

  const int n = static_cast<int>(features.size());
  model.trees.resize(static_cast<std::size_t>(config.tree_count));
  for (int tree = 0; tree < config.tree_count; ++tree) {
    // Per-tree substream: the forest is identical whether trees are built
    // sequentially or concurrently.
    Rng rng(Rng::substream(config.seed, static_cast<std::uint64_t>(tree)));
    std::vector<int> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      rows[static_cast<std::size_t>(i)] =
          static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    }
    TreeBuilder builder{features,
                        labels,
                        feature_count,
                        model.config.max_depth,
                        model.config.min_samples_leaf,
                        model.config.features_per_split,
                        rng,
                        {}};
    builder.build(rows, 0);
    model.trees[static_cast<std::size_t>(tree)].nodes =
        std::move(builder.nodes);
  }
  return model;
}

double forest_score(const RandomForestModel& model,
                    const std::vector<double>& features) {
  if (static_cast<int>(features.size()) != model.feature_count) {
    throw std::invalid_argument("forest_score: feature length mismatch");
  }
  double total = 0.0;
  for (const DecisionTree& tree : model.trees) {
    int at = 0;
    while (tree.nodes[static_cast<std::size_t>(at)].feature >= 0) {
      const TreeNode& node = tree.nodes[static_cast<std::size_t>(at)];
      at = features[static_cast<std::size_t>(node.feature)] < node.threshold
               ? node.left
               : node.right;
    }
    total += tree.nodes[static_cast<std::size_t>(at)].value;
  }
  return total / static_cast<double>(model.trees.size());
}

}  // namespace icd
