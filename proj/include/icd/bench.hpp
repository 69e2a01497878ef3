#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "icd/gnn.hpp"
#include "icd/metrics.hpp"
#include "icd/synthetic.hpp"

namespace icd {

// Methods the benchmark grid knows how to run.
enum class Method { kTc, kKcore, kSuperPart, kGcnE, kMagGcn };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct BenchRow {
  std::string name;
  std::pair<double, double> beta_within;
  std::pair<double, double> beta_between;
};

struct BenchConfig {
  std::vector<BenchRow> rows;
  std::vector<Method> methods = {Method::kTc, Method::kKcore,
                                 Method::kSuperPart, Method::kGcnE,
                                 Method::kMagGcn};
  int n_graphs = 1000;
  int n_seeds = 5;
  std::uint64_t base_seed = 1;
  int size_min = 5;
  int size_max = 15;
  double p_second = 0.03;
  GnnConfig gnn;  // seed/variant overwritten per run
  int threads = 0;  // 0 = hardware default
};

BenchConfig parse_bench_config(const std::string& json_text);

struct BenchCell {
  MultiSeedReport report;
};

struct BenchResult {
  BenchConfig config;
  // results[row][method_index] aligned with config.rows x config.methods.
  std::vector<std::vector<BenchCell>> results;
};

// Builds a scorer for one dataset: trains where the method needs it. The
// k-core method selects k in [3, 9] by validation F1.
Scorer make_method_scorer(Method method, const Dataset& dataset,
                          const GnnConfig& gnn_base, std::uint64_t seed);

// Runs the full generate/train/evaluate pipeline for every (row, method,
// seed). (row, seed) pairs run concurrently; reduction order is fixed.
BenchResult run_benchmark(const BenchConfig& config);

// Markdown table, one row per BenchRow, cells "mean (stderr)".
std::string benchmark_markdown(const BenchResult& result);

}  // namespace icd
