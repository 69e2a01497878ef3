#include "icd/dataset.hpp"

#include <stdexcept>

namespace icd {

std::string split_name(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  throw std::logic_error("split_name: unknown split");
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw std::invalid_argument("unknown split \"" + name +
                              "\" (expected train, val or test)");
}

const std::vector<int>& Dataset::split_indices(Split s) const {
  switch (s) {
    case Split::kTrain:
      return train_idx;
    case Split::kVal:
      return val_idx;
    case Split::kTest:
      return test_idx;
  }
  throw std::logic_error("split_indices: unknown split");
}

std::vector<int> Dataset::labels_of(const std::vector<int>& idx) const {
  std::vector<int> labels;
  labels.reserve(idx.size());
  for (int i : idx) {
    const auto& ex = examples.at(static_cast<std::size_t>(i));
    if (!ex.label.has_value()) {
      throw std::invalid_argument("example " + ex.id + " has no label");
    }
    labels.push_back(*ex.label);
  }
  return labels;
}

}  // namespace icd
