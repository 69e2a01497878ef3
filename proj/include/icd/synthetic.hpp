#pragma once

#include <cstdint>
#include <utility>

#include "icd/dataset.hpp"
#include "icd/rng.hpp"

namespace icd {

// Weighted stochastic block model over complete graphs: each node joins the
// second family with probability p_second, within-family edge weights come
// from Beta(beta_within), between-family weights from Beta(beta_between).
struct SyntheticSpec {
  int size_min = 5;
  int size_max = 15;
  double p_second = 0.03;
  std::pair<double, double> beta_within{4.0, 1.0};
  std::pair<double, double> beta_between{1.0, 4.0};
  int n_graphs = 1000;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

// One draw. The graph is complete, the label is 1 iff both families are
// non-empty, and truth records the family assignment (collapsed to a single
// cluster when one family is empty).
LabeledExample generate_example(const SyntheticSpec& spec, Rng& rng);

// Deterministic given spec.seed: n_graphs examples from a single RNG stream,
// then a shuffled 60/20/20 train/val/test split. Requires n_graphs >= 10.
Dataset generate_dataset(const SyntheticSpec& spec);

}  // namespace icd
