#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icd/dataset.hpp"
#include "icd/forest.hpp"
#include "icd/gnn.hpp"
#include "icd/metrics.hpp"
#include "icd/synthetic.hpp"

namespace icd {

inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Datasets (JSON Lines: one header object, then one object per graph)
// ---------------------------------------------------------------------------

// Builds the header JSON for a generated dataset (spec, rng id, class counts,
// split sizes).
std::string dataset_header(const SyntheticSpec& spec, const Dataset& dataset);
// Header for externally sourced datasets.
std::string dataset_header(const std::string& source, const Dataset& dataset);

void save_dataset(const Dataset& dataset, const std::string& path);

// Errors carry the 1-based line number for malformed lines and the graph id
// for invariant violations. An empty file fails with "missing header".
Dataset load_dataset(const std::string& path);

// ---------------------------------------------------------------------------
// Model checkpoints (versioned JSON; round-trip reproduces predictions
// bitwise)
// ---------------------------------------------------------------------------

struct GnnCheckpoint {
  GnnConfig config;
  GnnParameters params;
  std::vector<EpochStats> history;
};

void save_gnn_checkpoint(const GnnCheckpoint& ckpt, const std::string& path);
GnnCheckpoint load_gnn_checkpoint(const std::string& path);

struct ForestCheckpoint {
  RandomForestModel model;
  std::vector<std::string> feature_names;
};

void save_forest_checkpoint(const ForestCheckpoint& ckpt,
                            const std::string& path);
ForestCheckpoint load_forest_checkpoint(const std::string& path);

// Reads just the "kind" field ("gnn" or "superpart") so callers can dispatch.
std::string checkpoint_kind(const std::string& path);

// ---------------------------------------------------------------------------
// IC-Stratified loader
// ---------------------------------------------------------------------------

// Expected distribution format (JSON Lines, one candidate family per line):
//   {"id": "...", "nodes": ["a", "b", ...],
//    "edges": [["a", "b", 0.93], ...], "partition": [0, 0, 1, ...]}
// Node names may be strings or integers; "partition" aligns with "nodes".
// The label is 1 iff the ground-truth partitioning has >= 2 clusters. The
// training file is split 80/20 into train/val, shuffled by `seed`.
Dataset load_ic_stratified(const std::string& train_path,
                           const std::string& test_path, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Scores, PR curves, reports
// ---------------------------------------------------------------------------

// CSV with exact header "id,score,label". Config metadata goes to
// <path>.meta.json.
void save_scores_csv(const std::vector<ScoredExample>& scores,
                     const std::string& path, const std::string& meta_json);
std::vector<ScoredExample> load_scores_csv(const std::string& path);

// CSV with exact header "threshold,precision,recall".
void save_pr_csv(const PrCurve& curve, const std::string& path,
                 const std::string& meta_json);

std::string report_to_json(const EvalReport& report,
                           const std::string& invocation_json);
void save_report(const EvalReport& report, const std::string& path,
                 const std::string& invocation_json);
EvalReport load_report(const std::string& path);

}  // namespace icd
