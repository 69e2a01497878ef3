// Command-line front end: generate synthetic datasets, train and apply
// cluster scorers, evaluate with the validation-threshold protocol, export
// PR curves and run the benchmark grid.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "icd/bench.hpp"
#include "icd/classical.hpp"
#include "icd/dataset_io.hpp"
#include "icd/forest.hpp"
#include "icd/gnn.hpp"
#include "icd/metrics.hpp"
#include "icd/synthetic.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct GenArgs {
  std::string out;
  int n_graphs = 1000;
  std::uint64_t seed = 1;
  int size_min = 5;
  int size_max = 15;
  double p_second = 0.03;
  std::vector<double> beta_within{4.0, 1.0};
  std::vector<double> beta_between{1.0, 4.0};
};

struct TrainArgs {
  std::string dataset;
  std::string out;
  std::string model = "mag";
  std::uint64_t seed = 0;
  icd::GnnConfig gnn;
  icd::ForestConfig forest;
};

struct ScoreArgs {
  std::string dataset;
  std::string out;
  std::string checkpoint;
  std::string baseline;
  std::string split = "test";
  int k = 3;
};

struct EvalArgs {
  std::string dataset;
  std::string out;
  std::string checkpoint;
  std::string baseline;
  std::string scores;
  int k = 0;  // 0 = select on validation
  std::uint64_t seed = 0;
};

struct PrArgs {
  std::string scores;
  std::string out;
};

struct BenchArgs {
  std::string config;
  std::string out;
  int threads = 0;
};

icd::SyntheticSpec spec_from_args(const GenArgs& args) {
  icd::SyntheticSpec spec;
  spec.size_min = args.size_min;
  spec.size_max = args.size_max;
  spec.p_second = args.p_second;
  spec.beta_within = {args.beta_within[0], args.beta_within[1]};
  spec.beta_between = {args.beta_between[0], args.beta_between[1]};
  spec.n_graphs = args.n_graphs;
  spec.seed = args.seed;
  return spec;
}

int run_gen(const GenArgs& args) {
  icd::SyntheticSpec spec = spec_from_args(args);
  icd::Dataset ds = icd::generate_dataset(spec);
  ds.header = icd::dataset_header(spec, ds);
  icd::save_dataset(ds, args.out);
  std::cout << "wrote " << ds.examples.size() << " graphs to " << args.out
            << "\n";
  return kExitOk;
}

int run_train(TrainArgs& args) {
  const icd::Dataset ds = icd::load_dataset(args.dataset);
  if (args.model == "mag" || args.model == "gcne") {
    args.gnn.variant = icd::parse_variant(args.model);
    args.gnn.seed = args.seed;
    const icd::TrainResult result = icd::train(ds, args.gnn);
    icd::save_gnn_checkpoint({args.gnn, result.params, result.history},
                             args.out);
    std::cout << "best validation PR-AUC " << result.best_val_pr_auc
              << " at epoch " << result.best_epoch << "; checkpoint written to "
              << args.out << "\n";
  } else if (args.model == "superpart") {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i : ds.train_idx) {
      const auto& ex = ds.examples[static_cast<std::size_t>(i)];
      const icd::SuperPartFeatures f = icd::superpart_featurize(ex.graph);
      rows.emplace_back(f.values.begin(), f.values.end());
      if (!ex.label.has_value()) {
        throw std::runtime_error("example " + ex.id + " has no label");
      }
      labels.push_back(*ex.label);
    }
    args.forest.seed = args.seed;
    icd::RandomForestModel model = icd::forest_fit(rows, labels, args.forest);
    icd::save_forest_checkpoint({std::move(model), icd::SuperPartFeatures::names()},
                                args.out);
    std::cout << "forest of " << args.forest.tree_count
              << " trees written to " << args.out << "\n";
  } else {
    throw CLI::ValidationError("--model must be mag, gcne or superpart");
  }
  return kExitOk;
}

icd::Scorer scorer_from_model(const std::string& checkpoint_path,
                              const std::string& baseline, int k) {
  if (!checkpoint_path.empty()) {
    const std::string kind = icd::checkpoint_kind(checkpoint_path);
    if (kind == "gnn") {
      auto ckpt = std::make_shared<icd::GnnCheckpoint>(
          icd::load_gnn_checkpoint(checkpoint_path));
      return [ckpt](const icd::WeightedGraph& g) {
        return icd::predict(ckpt->params, ckpt->config, g);
      };
    }
    if (kind == "superpart") {
      auto ckpt = std::make_shared<icd::ForestCheckpoint>(
          icd::load_forest_checkpoint(checkpoint_path));
      return [ckpt](const icd::WeightedGraph& g) {
        const icd::SuperPartFeatures f = icd::superpart_featurize(g);
        return icd::forest_score(ckpt->model, {f.values.begin(), f.values.end()});
      };
    }
    throw std::runtime_error(checkpoint_path + ": unrecognized checkpoint kind");
  }
  if (baseline == "tc") {
    return [](const icd::WeightedGraph& g) { return icd::tc_score(g); };
  }
  if (baseline == "kcore") {
    return [k](const icd::WeightedGraph& g) { return icd::kcore_score(g, k); };
  }
  throw CLI::ValidationError("need --checkpoint or --baseline tc|kcore");
}

int run_score(const ScoreArgs& args) {
  const icd::Dataset ds = icd::load_dataset(args.dataset);
  const icd::Scorer scorer =
      scorer_from_model(args.checkpoint, args.baseline, args.k);

  std::vector<int> indices;
  if (args.split == "all") {
    for (std::size_t i = 0; i < ds.examples.size(); ++i) {
      indices.push_back(static_cast<int>(i));
    }
  } else {
    indices = ds.split_indices(icd::parse_split(args.split));
  }
  std::vector<icd::ScoredExample> scores;
  scores.reserve(indices.size());
  for (int i : indices) {
    const auto& ex = ds.examples[static_cast<std::size_t>(i)];
    scores.push_back({ex.id, scorer(ex.graph), ex.label.value_or(0)});
  }
  const json meta{{"command", "score"},
                  {"dataset", args.dataset},
                  {"split", args.split},
                  {"checkpoint", args.checkpoint},
                  {"baseline", args.baseline},
                  {"k", args.k}};
  icd::save_scores_csv(scores, args.out, meta.dump());
  std::cout << "wrote " << scores.size() << " scores to " << args.out << "\n";
  return kExitOk;
}

int run_eval(const EvalArgs& args) {
  const icd::Dataset ds = icd::load_dataset(args.dataset);
  icd::EvalReport report;
  std::string scorer_name;

  if (!args.scores.empty()) {
    const std::vector<icd::ScoredExample> rows = icd::load_scores_csv(args.scores);
    std::vector<std::pair<std::string, double>> id_scores;
    id_scores.reserve(rows.size());
    for (const auto& r : rows) id_scores.push_back({r.id, r.score});
    scorer_name = "scores:" + args.scores;
    report = icd::evaluate_scores(id_scores, ds, scorer_name, args.seed);
  } else if (args.baseline == "kcore" && args.k == 0) {
    // Tunable k: pick the k in [3, 9] with the best validation F1.
    const std::vector<int> val_labels = ds.labels_of(ds.val_idx);
    int best_k = 3;
    double best_f1 = -1.0;
    for (int k = 3; k <= 9; ++k) {
      std::vector<double> scores;
      for (int i : ds.val_idx) {
        scores.push_back(
            icd::kcore_score(ds.examples[static_cast<std::size_t>(i)].graph, k));
      }
      const double f1 = icd::best_threshold(scores, val_labels).f1;
      if (f1 > best_f1) {
        best_f1 = f1;
        best_k = k;
      }
    }
    scorer_name = "kcore(k=" + std::to_string(best_k) + ")";
    report = icd::evaluate_scorer(scorer_from_model("", "kcore", best_k), ds,
                                  scorer_name, args.seed);
  } else {
    const int k = args.k == 0 ? 3 : args.k;
    const icd::Scorer scorer = scorer_from_model(args.checkpoint, args.baseline, k);
    scorer_name = !args.checkpoint.empty() ? args.checkpoint : args.baseline;
    report = icd::evaluate_scorer(scorer, ds, scorer_name, args.seed);
  }

  const json invocation{{"command", "eval"},
                        {"dataset", args.dataset},
                        {"checkpoint", args.checkpoint},
                        {"baseline", args.baseline},
                        {"scores", args.scores},
                        {"k", args.k},
                        {"seed", args.seed}};
  icd::save_report(report, args.out, invocation.dump());
  std::cout << "test F1 " << report.test_f1 << " (threshold "
            << report.chosen_threshold << ", validation F1 "
            << report.validation_f1 << ", test PR-AUC " << report.test_pr_auc
            << "); report written to " << args.out << "\n";
  return kExitOk;
}

int run_pr(const PrArgs& args) {
  const std::vector<icd::ScoredExample> rows = icd::load_scores_csv(args.scores);
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& r : rows) {
    scores.push_back(r.score);
    labels.push_back(r.label);
  }
  const icd::PrCurve curve = icd::pr_curve(scores, labels);
  const json meta{{"command", "pr"}, {"scores", args.scores}, {"auc", curve.auc}};
  icd::save_pr_csv(curve, args.out, meta.dump());
  std::cout << "PR-AUC " << curve.auc << "; curve written to " << args.out << "\n";
  return kExitOk;
}

int run_bench(const BenchArgs& args) {
  icd::BenchConfig config = icd::parse_bench_config(read_file(args.config));
  if (args.threads > 0) config.threads = args.threads;
  const icd::BenchResult result = icd::run_benchmark(config);
  const std::string table = icd::benchmark_markdown(result);
  if (args.out.empty()) {
    std::cout << table;
  } else {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + args.out);
    out << table;
    std::cout << "benchmark table written to " << args.out << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inconsistent-cluster detection on weighted similarity graphs"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("--out", gen_args.out, "Output dataset (JSON Lines)")->required();
  gen->add_option("--n", gen_args.n_graphs, "Number of graphs");
  gen->add_option("--seed", gen_args.seed, "RNG seed");
  gen->add_option("--size-min", gen_args.size_min, "Smallest graph size");
  gen->add_option("--size-max", gen_args.size_max, "Largest graph size");
  gen->add_option("--p-second", gen_args.p_second,
                  "Probability a node joins the second family");
  gen->add_option("--beta-within", gen_args.beta_within,
                  "Within-family Beta shape parameters")
      ->expected(2)
      ->delimiter(',');
  gen->add_option("--beta-between", gen_args.beta_between,
                  "Between-family Beta shape parameters")
      ->expected(2)
      ->delimiter(',');

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train a scorer on a dataset");
  train->add_option("--dataset", train_args.dataset, "Dataset path")->required();
  train->add_option("--out", train_args.out, "Checkpoint path")->required();
  train->add_option("--model", train_args.model, "mag, gcne or superpart");
  train->add_option("--seed", train_args.seed, "Training seed");
  train->add_option("--hidden", train_args.gnn.hidden_dim, "GNN hidden width");
  train->add_option("--steps", train_args.gnn.steps, "Message-passing rounds");
  train->add_option("--lr", train_args.gnn.learning_rate, "Learning rate");
  train->add_option("--epochs", train_args.gnn.epochs, "Max epochs");
  train->add_option("--batch", train_args.gnn.batch_size, "Minibatch size");
  train->add_option("--patience", train_args.gnn.early_stop_patience,
                    "Early-stop patience (epochs)");
  train->add_option("--trees", train_args.forest.tree_count, "Forest size");
  train->add_option("--max-depth", train_args.forest.max_depth,
                    "Tree depth limit (0 = unlimited)");
  train->add_option("--min-leaf", train_args.forest.min_samples_leaf,
                    "Minimum samples per leaf");
  train->add_option("--features-per-split", train_args.forest.features_per_split,
                    "Features tried per split (0 = sqrt)");

  ScoreArgs score_args;
  CLI::App* score = app.add_subcommand("score", "Score graphs in a dataset");
  score->add_option("--dataset", score_args.dataset, "Dataset path")->required();
  score->add_option("--out", score_args.out, "Output CSV")->required();
  score->add_option("--checkpoint", score_args.checkpoint, "Model checkpoint");
  score->add_option("--baseline", score_args.baseline, "tc or kcore");
  score->add_option("--split", score_args.split, "train, val, test or all");
  score->add_option("--k", score_args.k, "k for the k-core baseline");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Evaluate a scorer (threshold from validation, F1 on test)");
  eval->add_option("--dataset", eval_args.dataset, "Dataset path")->required();
  eval->add_option("--out", eval_args.out, "Report JSON path")->required();
  eval->add_option("--checkpoint", eval_args.checkpoint, "Model checkpoint");
  eval->add_option("--baseline", eval_args.baseline, "tc or kcore");
  eval->add_option("--scores", eval_args.scores,
                   "Precomputed score CSV (must cover val and test)");
  eval->add_option("--k", eval_args.k,
                   "k for the k-core baseline (0 = select on validation)");
  eval->add_option("--seed", eval_args.seed, "Seed recorded in the report");

  PrArgs pr_args;
  CLI::App* pr = app.add_subcommand("pr", "Precision-recall curve from scores");
  pr->add_option("--scores", pr_args.scores, "Score CSV")->required();
  pr->add_option("--out", pr_args.out, "Output CSV")->required();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Run the benchmark grid");
  bench->add_option("--config", bench_args.config, "Benchmark config JSON")
      ->required();
  bench->add_option("--out", bench_args.out, "Output markdown (default stdout)");
  bench->add_option("--threads", bench_args.threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return run_gen(gen_args);
    if (train->parsed()) return run_train(train_args);
    if (score->parsed()) return run_score(score_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (pr->parsed()) return run_pr(pr_args);
    if (bench->parsed()) return run_bench(bench_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
