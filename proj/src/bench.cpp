#include "icd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "icd/classical.hpp"
#include "icd/forest.hpp"

namespace icd {

using json = nlohmann::json;

std::string method_name(Method m) {
  switch (m) {
    case Method::kTc:
      return "tc";
    case Method::kKcore:
      return "kcore";
    case Method::kSuperPart:
      return "superpart";
    case Method::kGcnE:
      return "gcne";
    case Method::kMagGcn:
      return "mag";
  }
  throw std::logic_error("method_name: unknown method");
}

Method parse_method(const std::string& name) {
  if (name == "tc") return Method::kTc;
  if (name == "kcore") return Method::kKcore;
  if (name == "superpart") return Method::kSuperPart;
  if (name == "gcne") return Method::kGcnE;
  if (name == "mag") return Method::kMagGcn;
  throw std::invalid_argument("unknown method \"" + name + "\"");
}

namespace {

std::pair<double, double> pair_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("bench: Beta parameters must be [alpha, beta]");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

BenchConfig parse_bench_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bench: malformed config: ") + e.what());
  }
  BenchConfig config;
  for (const auto& row : j.at("rows")) {
    BenchRow r;
    r.beta_within = pair_from_json(row.at("beta_within"));
    r.beta_between = pair_from_json(row.at("beta_between"));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "Beta(%g,%g) / Beta(%g,%g)",
                  r.beta_between.first, r.beta_between.second,
                  r.beta_within.first, r.beta_within.second);
    r.name = row.value("name", std::string(buf));
    config.rows.push_back(std::move(r));
  }
  if (j.contains("methods")) {
    config.methods.clear();
    for (const auto& m : j["methods"]) {
      config.methods.push_back(parse_method(m.get<std::string>()));
    }
  }
  config.n_graphs = j.value("n_graphs", config.n_graphs);
  config.n_seeds = j.value("n_seeds", config.n_seeds);
  config.base_seed = j.value("base_seed", config.base_seed);
  config.size_min = j.value("size_min", config.size_min);
  config.size_max = j.value("size_max", config.size_max);
  config.p_second = j.value("p_second", config.p_second);
  config.threads = j.value("threads", config.threads);
  if (j.contains("gnn")) {
    const json& g = j["gnn"];
    config.gnn.hidden_dim = g.value("hidden_dim", config.gnn.hidden_dim);
    config.gnn.steps = g.value("steps", config.gnn.steps);
    config.gnn.learning_rate = g.value("learning_rate", config.gnn.learning_rate);
    config.gnn.epochs = g.value("epochs", config.gnn.epochs);
    config.gnn.batch_size = g.value("batch_size", config.gnn.batch_size);
    config.gnn.early_stop_patience =
        g.value("early_stop_patience", config.gnn.early_stop_patience);
  }
  if (config.rows.empty()) throw std::invalid_argument("bench: no rows");
  return config;
}

Scorer make_method_scorer(Method method, const Dataset& dataset,
                          const GnnConfig& gnn_base, std::uint64_t seed) {
  switch (method) {
    case Method::kTc:
      return [](const WeightedGraph& g) { return tc_score(g); };

    case Method::kKcore: {
      // k in [3, 9] picked by validation F1, lower k on ties.
      const std::vector<int> val_labels = dataset.labels_of(dataset.val_idx);
      int best_k = 3;
      double best_f1 = -1.0;
      for (int k = 3; k <= 9; ++k) {
        std::vector<double> scores;
        scores.reserve(dataset.val_idx.size());
        for (int i : dataset.val_idx) {
          scores.push_back(
              kcore_score(dataset.examples[static_cast<std::size_t>(i)].graph, k));
        }
        const double f1 = best_threshold(scores, val_labels).f1;
        if (f1 > best_f1) {
          best_f1 = f1;
          best_k = k;
        }
      }
      return [best_k](const WeightedGraph& g) { return kcore_score(g, best_k); };
    }

    case Method::kSuperPart: {
      std::vector<std::vector<double>> rows;
      std::vector<int> labels;
      for (int i : dataset.train_idx) {
        const auto& ex = dataset.examples[static_cast<std::size_t>(i)];
        const SuperPartFeatures f = superpart_featurize(ex.graph);
        rows.emplace_back(f.values.begin(), f.values.end());
        labels.push_back(ex.label.value());
      }
      ForestConfig config;
      config.seed = seed;
      auto model = std::make_shared<RandomForestModel>(
          forest_fit(rows, labels, config));
      return [model](const WeightedGraph& g) {
        const SuperPartFeatures f = superpart_featurize(g);
        return forest_score(*model, {f.values.begin(), f.values.end()});
      };
    }

    case Method::kGcnE:
    case Method::kMagGcn: {
      GnnConfig config = gnn_base;
      config.variant =
          method == Method::kMagGcn ? GnnVariant::kMag : GnnVariant::kMeanOnly;
      config.seed = seed;
      auto trained = std::make_shared<TrainResult>(train(dataset, config));
      return [trained, config](const WeightedGraph& g) {
        return predict(trained->params, config, g);
      };
    }
  }
  throw std::logic_error("make_method_scorer: unknown method");
}

BenchResult run_benchmark(const BenchConfig& config) {
  BenchResult result;
  result.config = config;
  result.results.assign(
      config.rows.size(),
      std::vector<BenchCell>(config.methods.size()));

  // One task per (row, seed): the dataset is generated once and scored by
  // every method. Tasks are independent; reduction order is fixed by index.
  struct Task {
    std::size_t row;
    int seed_index;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < config.rows.size(); ++r) {
    for (int s = 0; s < config.n_seeds; ++s) tasks.push_back({r, s});
  }
  // per_task_f1[task][method]
  std::vector<std::vector<double>> per_task_f1(
      tasks.size(), std::vector<double>(config.methods.size(), 0.0));
  std::vector<std::exception_ptr> errors(tasks.size());

  auto run_task = [&](std::size_t task_index) {
    try {
      const Task& task = tasks[task_index];
      const BenchRow& row = config.rows[task.row];
      SyntheticSpec spec;
      spec.size_min = config.size_min;
      spec.size_max = config.size_max;
      spec.p_second = config.p_second;
      spec.beta_within = row.beta_within;
      spec.beta_between = row.beta_between;
      spec.n_graphs = config.n_graphs;
      spec.seed = config.base_seed + static_cast<std::uint64_t>(task.seed_index);
      const Dataset dataset = generate_dataset(spec);
      for (std::size_t m = 0; m < config.methods.size(); ++m) {
        const Scorer scorer =
            make_method_scorer(config.methods[m], dataset, config.gnn, spec.seed);
        per_task_f1[task_index][m] =
            evaluate_scorer(scorer, dataset, method_name(config.methods[m]),
                            spec.seed)
                .test_f1;
      }
    } catch (...) {
      errors[task_index] = std::current_exception();
    }
  };

  int workers = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size();
             i = next.fetch_add(1)) {
          run_task(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  for (std::size_t r = 0; r < config.rows.size(); ++r) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      MultiSeedReport& rep = result.results[r][m].report;
      rep.per_seed_f1.resize(static_cast<std::size_t>(config.n_seeds));
      for (int s = 0; s < config.n_seeds; ++s) {
        rep.per_seed_f1[static_cast<std::size_t>(s)] =
            per_task_f1[r * static_cast<std::size_t>(config.n_seeds) +
                        static_cast<std::size_t>(s)][m];
      }
      double sum = 0.0;
      for (double f1 : rep.per_seed_f1) sum += f1;
      rep.mean_f1 = sum / config.n_seeds;
      double var = 0.0;
      for (double f1 : rep.per_seed_f1) {
        var += (f1 - rep.mean_f1) * (f1 - rep.mean_f1);
      }
      if (config.n_seeds > 1) {
        var /= (config.n_seeds - 1);
        rep.std_error = std::sqrt(var / config.n_seeds);
      }
    }
  }
  return result;
}

std::string benchmark_markdown(const BenchResult& result) {
  static const char* kHeader[] = {"TC", "K-Core", "SuperPart", "GCN-E",
                                  "MAG-GCN"};
  std::string out = "| Dataset |";
  for (Method m : result.config.methods) {
    out += " ";
    out += kHeader[static_cast<int>(m)];
    out += " |";
  }
  out += "\n|---|";
  for (std::size_t i = 0; i < result.config.methods.size(); ++i) out += "---|";
  out += "\n";
  for (std::size_t r = 0; r < result.config.rows.size(); ++r) {
    out += "| " + result.config.rows[r].name + " |";
    for (std::size_t m = 0; m < result.config.methods.size(); ++m) {
      const MultiSeedReport& rep = result.results[r][m].report;
      char buf[64];
      std::snprintf(buf, sizeof(buf), " %.3f (%.3f) |", rep.mean_f1,
                    rep.std_error);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace icd
