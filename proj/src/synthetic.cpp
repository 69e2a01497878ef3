#include "icd/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace icd {

void SyntheticSpec::validate() const {
  if (size_min < 1 || size_min > size_max) {
    throw std::invalid_argument("synthetic: need 1 <= size_min <= size_max");
  }
  if (!(p_second >= 0.0 && p_second <= 1.0)) {
    throw std::invalid_argument("synthetic: p_second must be in [0,1]");
  }
  if (!(beta_within.first > 0.0 && beta_within.second > 0.0 &&
        beta_between.first > 0.0 && beta_between.second > 0.0)) {
    throw std::invalid_argument("synthetic: Beta shapes must be > 0");
  }
  if (n_graphs < 1) {
    throw std::invalid_argument("synthetic: n_graphs must be positive");
  }
}

LabeledExample generate_example(const SyntheticSpec& spec, Rng& rng) {
  const int n = spec.size_min +
                static_cast<int>(rng.uniform_int(
                    static_cast<std::uint64_t>(spec.size_max - spec.size_min + 1)));

  // Family per node, then edge weights in canonical (u, v) order; this draw
  // order is part of the determinism contract.
  std::vector<int> family(n);
  for (int v = 0; v < n; ++v) {
    family[v] = rng.uniform() < spec.p_second ? 1 : 0;
  }

  LabeledExample ex;
  ex.graph.node_count = n;
  ex.graph.edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const auto& shape =
          family[u] == family[v] ? spec.beta_within : spec.beta_between;
      ex.graph.edges.push_back({u, v, rng.beta(shape.first, shape.second)});
    }
  }

  const int second_count = std::accumulate(family.begin(), family.end(), 0);
  const bool both_present = second_count > 0 && second_count < n;
  ex.label = both_present ? 1 : 0;
  ex.truth = both_present ? canonical_partition(family)
                          : canonical_partition(std::vector<int>(n, 0));
  return ex;
}

Dataset generate_dataset(const SyntheticSpec& spec) {
  spec.validate();
  if (spec.n_graphs < 10) {
    throw std::invalid_argument(
        "synthetic: need at least 10 graphs to form a 60/20/20 split");
  }

  Rng rng(spec.seed);
  Dataset ds;
  ds.examples.reserve(static_cast<std::size_t>(spec.n_graphs));
  for (int i = 0; i < spec.n_graphs; ++i) {
    LabeledExample ex = generate_example(spec, rng);
    ex.id = "g" + std::to_string(i);
    ds.examples.push_back(std::move(ex));
  }

  // Shuffled 60/20/20 split from the same stream.
  std::vector<int> order(static_cast<std::size_t>(spec.n_graphs));
  std::iota(order.begin(), order.end(), 0);
  for (int i = spec.n_graphs - 1; i > 0; --i) {
    const int j = static_cast<int>(
        rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(j)]);
  }
  const int n_train = spec.n_graphs * 6 / 10;
  const int n_val = spec.n_graphs * 2 / 10;
  ds.train_idx.assign(order.begin(), order.begin() + n_train);
  ds.val_idx.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  ds.test_idx.assign(order.begin() + n_train + n_val, order.end());
  return ds;
}

}  // namespace icd
