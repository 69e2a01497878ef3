#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icd/graph.hpp"

namespace icd {

// A graph plus its binary inconsistency label (1 = should be partitioned)
// and, when known, the ground-truth node partition.
struct LabeledExample {
  std::string id;
  WeightedGraph graph;
  std::optional<int> label;  // 0 or 1
  std::optional<Partition> truth;
};

enum class Split { kTrain, kVal, kTest };

std::string split_name(Split s);
Split parse_split(const std::string& name);

// In-memory dataset: examples in file order plus index lists per split.
// `header` keeps the provenance JSON (generator spec or source name, rng
// identifier, class counts, split sizes) so written files are self-describing.
struct Dataset {
  std::vector<LabeledExample> examples;
  std::vector<int> train_idx;
  std::vector<int> val_idx;
  std::vector<int> test_idx;
  std::string header;  // serialized JSON object

  const std::vector<int>& split_indices(Split s) const;
  std::vector<int> labels_of(const std::vector<int>& idx) const;
};

}  // namespace icd
