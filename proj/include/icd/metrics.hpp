#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "icd/dataset.hpp"

namespace icd {

// F1 of the predictions (score >= threshold). Defined as 0 when there are no
// positive predictions or no positive labels.
double f1_at(const std::vector<double>& scores, const std::vector<int>& labels,
             double threshold);

struct ThresholdChoice {
  double threshold = 0.0;
  double f1 = 0.0;
};

// Maximizes F1 over the midpoints between adjacent distinct scores plus the
// extreme scores themselves; ties break toward the higher threshold.
// Requires both classes present.
ThresholdChoice best_threshold(const std::vector<double>& scores,
                               const std::vector<int>& labels);

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Points sorted by descending threshold, one per distinct score (ties flip
// together). auc uses the step rule: sum of precision * recall-increment.
struct PrCurve {
  std::vector<PrPoint> points;
  double auc = 0.0;
};

// Requires at least one positive label.
PrCurve pr_curve(const std::vector<double>& scores,
                 const std::vector<int>& labels);

using Scorer = std::function<double(const WeightedGraph&)>;

struct ScoredExample {
  std::string id;
  double score = 0.0;
  int label = 0;
};

struct EvalReport {
  std::string scorer_name;
  std::uint64_t seed = 0;
  double chosen_threshold = 0.0;
  double validation_f1 = 0.0;
  double test_f1 = 0.0;
  double test_pr_auc = 0.0;
  std::vector<ScoredExample> val_scores;
  std::vector<ScoredExample> test_scores;
};

// The evaluation protocol: pick the threshold maximizing F1 on the validation
// split, then report F1 at that threshold and PR-AUC on the test split.
EvalReport evaluate_scorer(const Scorer& scorer, const Dataset& dataset,
                           const std::string& scorer_name = "",
                           std::uint64_t seed = 0);

// Same protocol on precomputed per-example scores (keys are example ids).
EvalReport evaluate_scores(
    const std::vector<std::pair<std::string, double>>& id_scores,
    const Dataset& dataset, const std::string& scorer_name = "",
    std::uint64_t seed = 0);

struct MultiSeedReport {
  std::vector<double> per_seed_f1;
  double mean_f1 = 0.0;
  double std_error = 0.0;  // sample std / sqrt(n_seeds)
};

// Builds a fresh dataset per seed via make_dataset(seed), trains/obtains a
// scorer via make_scorer(dataset, seed) and aggregates test F1 across seeds.
// Seeds run concurrently (at most `threads`; 0 = hardware default) and are
// reduced in seed order, so results do not depend on scheduling.
MultiSeedReport multi_seed_report(
    const std::function<Dataset(std::uint64_t)>& make_dataset,
    const std::function<Scorer(const Dataset&, std::uint64_t)>& make_scorer,
    int n_seeds, std::uint64_t base_seed, int threads = 0);

}  // namespace icd
