#include "icd/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "icd/rng.hpp"

namespace icd {

using json = nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// 17 significant digits: enough to reproduce any double exactly.
std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json partition_to_json(const Partition& p) {
  return json(p.assignment);
}

Partition partition_from_json(const json& j, int node_count,
                              const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != node_count) {
    throw std::runtime_error(where + ": truth must list one cluster id per node");
  }
  std::vector<int> ids;
  ids.reserve(j.size());
  for (const auto& v : j) ids.push_back(v.get<int>());
  int max_id = -1;
  for (int id : ids) {
    if (id < 0) throw std::runtime_error(where + ": negative cluster id");
    max_id = std::max(max_id, id);
  }
  std::vector<bool> used(static_cast<std::size_t>(max_id) + 1, false);
  for (int id : ids) used[static_cast<std::size_t>(id)] = true;
  for (bool u : used) {
    if (!u) throw std::runtime_error(where + ": cluster ids must be 0..k-1, all used");
  }
  Partition p;
  p.assignment = std::move(ids);
  p.cluster_count = max_id + 1;
  return p;
}

json class_counts(const Dataset& ds) {
  int negatives = 0, positives = 0, unlabeled = 0;
  for (const auto& ex : ds.examples) {
    if (!ex.label.has_value()) {
      ++unlabeled;
    } else if (*ex.label == 1) {
      ++positives;
    } else {
      ++negatives;
    }
  }
  json j{{"negative", negatives}, {"positive", positives}};
  if (unlabeled > 0) j["unlabeled"] = unlabeled;
  return j;
}

json split_sizes(const Dataset& ds) {
  return json{{"train", ds.train_idx.size()},
              {"val", ds.val_idx.size()},
              {"test", ds.test_idx.size()}};
}

json spec_to_json(const SyntheticSpec& spec) {
  return json{{"size_min", spec.size_min},
              {"size_max", spec.size_max},
              {"p_second", spec.p_second},
              {"beta_within", {spec.beta_within.first, spec.beta_within.second}},
              {"beta_between", {spec.beta_between.first, spec.beta_between.second}},
              {"n_graphs", spec.n_graphs},
              {"seed", spec.seed}};
}

}  // namespace

std::string dataset_header(const SyntheticSpec& spec, const Dataset& dataset) {
  json j{{"format_version", kFormatVersion},
         {"kind", "icd-dataset"},
         {"generator", spec_to_json(spec)},
         {"rng", std::string(Rng::name())},
         {"class_counts", class_counts(dataset)},
         {"split_sizes", split_sizes(dataset)}};
  return j.dump();
}

std::string dataset_header(const std::string& source, const Dataset& dataset) {
  json j{{"format_version", kFormatVersion},
         {"kind", "icd-dataset"},
         {"source", source},
         {"class_counts", class_counts(dataset)},
         {"split_sizes", split_sizes(dataset)}};
  return j.dump();
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  if (dataset.header.empty()) {
    throw std::invalid_argument("save_dataset: dataset header not set");
  }
  std::vector<std::string> split_of(dataset.examples.size());
  for (int i : dataset.train_idx) split_of[static_cast<std::size_t>(i)] = "train";
  for (int i : dataset.val_idx) split_of[static_cast<std::size_t>(i)] = "val";
  for (int i : dataset.test_idx) split_of[static_cast<std::size_t>(i)] = "test";

  std::ostringstream out;
  out << dataset.header << "\n";
  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    const LabeledExample& ex = dataset.examples[i];
    if (split_of[i].empty()) {
      throw std::invalid_argument("save_dataset: example " + ex.id +
                                  " belongs to no split");
    }
    json edges = json::array();
    for (const Edge& e : ex.graph.edges) {
      edges.push_back(json::array({e.u, e.v, e.w}));
    }
    json line{{"id", ex.id},
              {"nodes", ex.graph.node_count},
              {"edges", std::move(edges)},
              {"label", ex.label.has_value() ? json(*ex.label) : json()},
              {"truth", ex.truth.has_value() ? partition_to_json(*ex.truth) : json()},
              {"split", split_of[i]}};
    out << line.dump() << "\n";
  }
  write_file(path, out.str());
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);

  Dataset ds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ": " + where + ": malformed JSON: " + e.what());
    }
    if (line_no == 1) {
      if (!j.is_object() || !j.contains("format_version")) {
        throw std::runtime_error(path + ": " + where + ": missing header");
      }
      if (j["format_version"].get<int>() != kFormatVersion) {
        throw std::runtime_error(path + ": unrecognized format_version");
      }
      ds.header = line;
      continue;
    }
    try {
      LabeledExample ex;
      ex.id = j.at("id").get<std::string>();
      ex.graph.node_count = j.at("nodes").get<int>();
      for (const auto& e : j.at("edges")) {
        ex.graph.edges.push_back(
            {e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
      }
      try {
        ex.graph.validate();
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error("graph " + ex.id + ": " + e.what());
      }
      if (!j.at("label").is_null()) ex.label = j.at("label").get<int>();
      if (!j.at("truth").is_null()) {
        ex.truth = partition_from_json(j.at("truth"), ex.graph.node_count,
                                       "graph " + ex.id);
        if (ex.label.has_value() &&
            *ex.label != (ex.truth->cluster_count >= 2 ? 1 : 0)) {
          throw std::runtime_error("graph " + ex.id +
                                   ": label contradicts truth partition");
        }
      }
      const Split split = parse_split(j.at("split").get<std::string>());
      const int index = static_cast<int>(ds.examples.size());
      switch (split) {
        case Split::kTrain:
          ds.train_idx.push_back(index);
          break;
        case Split::kVal:
          ds.val_idx.push_back(index);
          break;
        case Split::kTest:
          ds.test_idx.push_back(index);
          break;
      }
      ds.examples.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ": " + where + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": " + where + ": " + e.what());
    }
  }
  if (line_no == 0) throw std::runtime_error(path + ": missing header");
  return ds;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {

json gnn_config_to_json(const GnnConfig& c) {
  return json{{"hidden_dim", c.hidden_dim},
              {"steps", c.steps},
              {"variant", variant_name(c.variant)},
              {"learning_rate", c.learning_rate},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"early_stop_patience", c.early_stop_patience},
              {"seed", c.seed}};
}

GnnConfig gnn_config_from_json(const json& j) {
  GnnConfig c;
  c.hidden_dim = j.at("hidden_dim").get<int>();
  c.steps = j.at("steps").get<int>();
  c.variant = parse_variant(j.at("variant").get<std::string>());
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.early_stop_patience = j.at("early_stop_patience").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void save_gnn_checkpoint(const GnnCheckpoint& ckpt, const std::string& path) {
  json history = json::array();
  for (const EpochStats& s : ckpt.history) {
    history.push_back(json{{"epoch", s.epoch},
                           {"train_loss", s.train_loss},
                           {"val_pr_auc", s.val_pr_auc}});
  }
  json j{{"format_version", kFormatVersion},
         {"kind", "gnn"},
         {"variant", variant_name(ckpt.config.variant)},
         {"config", gnn_config_to_json(ckpt.config)},
         {"parameters",
          json{{"step_weight", ckpt.params.step_weight},
               {"step_bias", ckpt.params.step_bias},
               {"readout_weight", ckpt.params.readout_weight},
               {"readout_bias", ckpt.params.readout_bias},
               {"readout_out", ckpt.params.readout_out},
               {"readout_out_bias", ckpt.params.readout_out_bias}}},
         {"training_history", std::move(history)}};
  write_file(path, j.dump() + "\n");
}

GnnCheckpoint load_gnn_checkpoint(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": malformed checkpoint: " + e.what());
  }
  if (j.value("kind", "") != "gnn") {
    throw std::runtime_error(path + ": not a gnn checkpoint");
  }
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw std::runtime_error(path + ": unrecognized format_version");
  }
  GnnCheckpoint ckpt;
  ckpt.config = gnn_config_from_json(j.at("config"));
  const json& p = j.at("parameters");
  ckpt.params.step_weight = p.at("step_weight").get<std::vector<std::vector<double>>>();
  ckpt.params.step_bias = p.at("step_bias").get<std::vector<std::vector<double>>>();
  ckpt.params.readout_weight = p.at("readout_weight").get<std::vector<double>>();
  ckpt.params.readout_bias = p.at("readout_bias").get<std::vector<double>>();
  ckpt.params.readout_out = p.at("readout_out").get<std::vector<double>>();
  ckpt.params.readout_out_bias = p.at("readout_out_bias").get<double>();
  ckpt.params.validate_shapes(ckpt.config);
  for (const auto& s : j.at("training_history")) {
    ckpt.history.push_back({s.at("epoch").get<int>(),
                            s.at("train_loss").get<double>(),
                            s.at("val_pr_auc").get<double>()});
  }
  return ckpt;
}

void save_forest_checkpoint(const ForestCheckpoint& ckpt,
                            const std::string& path) {
  json trees = json::array();
  for (const DecisionTree& tree : ckpt.model.trees) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes) {
      nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
    }
    trees.push_back(std::move(nodes));
  }
  json j{{"format_version", kFormatVersion},
         {"kind", "superpart"},
         {"config",
          json{{"tree_count", ckpt.model.config.tree_count},
               {"max_depth", ckpt.model.config.max_depth},
               {"min_samples_leaf", ckpt.model.config.min_samples_leaf},
               {"features_per_split", ckpt.model.config.features_per_split},
               {"seed", ckpt.model.config.seed}}},
         {"feature_count", ckpt.model.feature_count},
         {"feature_names", ckpt.feature_names},
         {"threshold_grid", kFeatureGrid},
         {"external_edge_threshold", kExternalEdgeThreshold},
         {"trees", std::move(trees)}};
  write_file(path, j.dump() + "\n");
}

ForestCheckpoint load_forest_checkpoint(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": malformed checkpoint: " + e.what());
  }
  if (j.value("kind", "") != "superpart") {
    throw std::runtime_error(path + ": not a superpart checkpoint");
  }
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw std::runtime_error(path + ": unrecognized format_version");
  }
  ForestCheckpoint ckpt;
  const json& c = j.at("config");
  ckpt.model.config.tree_count = c.at("tree_count").get<int>();
  ckpt.model.config.max_depth = c.at("max_depth").get<int>();
  ckpt.model.config.min_samples_leaf = c.at("min_samples_leaf").get<int>();
  ckpt.model.config.features_per_split = c.at("features_per_split").get<int>();
  ckpt.model.config.seed = c.at("seed").get<std::uint64_t>();
  ckpt.model.feature_count = j.at("feature_count").get<int>();
  ckpt.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  for (const auto& tree_json : j.at("trees")) {
    DecisionTree tree;
    for (const auto& n : tree_json) {
      tree.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(),
                            n.at(2).get<int>(), n.at(3).get<int>(),
                            n.at(4).get<double>()});
    }
    ckpt.model.trees.push_back(std::move(tree));
  }
  return ckpt;
}

std::string checkpoint_kind(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": malformed checkpoint: " + e.what());
  }
  return j.value("kind", "");
}

// ---------------------------------------------------------------------------
// IC-Stratified
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kIcSchemaHint =
    "expected JSON Lines, one family per line: {\"id\": str, \"nodes\": "
    "[name, ...], \"edges\": [[name, name, weight], ...], \"partition\": "
    "[int, ...]}";

std::string node_key(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw std::runtime_error("node names must be strings or integers");
}

std::vector<LabeledExample> load_ic_file(const std::string& path,
                                         const std::string& id_prefix) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::vector<LabeledExample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ": line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      throw std::runtime_error(where + ": not JSON; " + kIcSchemaHint);
    }
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges") ||
        !j.contains("partition")) {
      throw std::runtime_error(where + ": unrecognized record; " + kIcSchemaHint);
    }
    try {
      LabeledExample ex;
      ex.id = j.contains("id") && j["id"].is_string()
                  ? j["id"].get<std::string>()
                  : id_prefix + std::to_string(line_no);

      std::vector<std::string> names;
      for (const auto& v : j["nodes"]) names.push_back(node_key(v));
      auto index_of = [&names, &where](const std::string& key) {
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (names[i] == key) return static_cast<int>(i);
        }
        throw std::runtime_error(where + ": edge endpoint \"" + key +
                                 "\" not in nodes");
      };

      ex.graph.node_count = static_cast<int>(names.size());
      for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3) {
          throw std::runtime_error(where + ": bad edge; " + kIcSchemaHint);
        }
        int u = index_of(node_key(e[0]));
        int v = index_of(node_key(e[1]));
        if (u > v) std::swap(u, v);
        ex.graph.edges.push_back({u, v, e[2].get<double>()});
      }
      ex.graph.validate();

      const Partition truth =
          partition_from_json(j["partition"], ex.graph.node_count, where);
      ex.truth = truth;
      ex.label = truth.cluster_count >= 2 ? 1 : 0;
      out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw std::runtime_error(where + ": " + e.what() + "; " + kIcSchemaHint);
    }
  }
  if (out.empty()) {
    throw std::runtime_error(path + ": no records; " + kIcSchemaHint);
  }
  return out;
}

}  // namespace

Dataset load_ic_stratified(const std::string& train_path,
                           const std::string& test_path, std::uint64_t seed) {
  Dataset ds;
  ds.examples = load_ic_file(train_path, "train-");
  const int n_train_file = static_cast<int>(ds.examples.size());
  std::vector<LabeledExample> test = load_ic_file(test_path, "test-");
  for (auto& ex : test) ds.examples.push_back(std::move(ex));

  // 80/20 train/val split of the training file, shuffled by seed.
  std::vector<int> order(static_cast<std::size_t>(n_train_file));
  for (int i = 0; i < n_train_file; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_int(i);
    std::swap(order[i - 1], order[j]);
  }
  const int n_train = n_train_file * 8 / 10;
  ds.train_idx.assign(order.begin(), order.begin() + n_train);
  ds.val_idx.assign(order.begin() + n_train, order.end());
  for (int i = n_train_file; i < static_cast<int>(ds.examples.size()); ++i) {
    ds.test_idx.push_back(i);
  }
  ds.header = dataset_header("ic-stratified", ds);
  return ds;
}

// ---------------------------------------------------------------------------
// Scores, PR curves, reports
// ---------------------------------------------------------------------------

void save_scores_csv(const std::vector<ScoredExample>& scores,
                     const std::string& path, const std::string& meta_json) {
  std::ostringstream out;
  out << "id,score,label\n";
  for (const ScoredExample& s : scores) {
    out << s.id << "," << format_double(s.score) << "," << s.label << "\n";
  }
  write_file(path, out.str());
  if (!meta_json.empty()) write_file(path + ".meta.json", meta_json + "\n");
}

std::vector<ScoredExample> load_scores_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "id,score,label") {
    throw std::runtime_error(path + ": expected header id,score,label");
  }
  std::vector<ScoredExample> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.rfind(',');
    if (c1 == std::string::npos || c2 == c1) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected id,score,label");
    }
    ScoredExample s;
    s.id = line.substr(0, c1);
    s.score = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    s.label = std::stoi(line.substr(c2 + 1));
    out.push_back(std::move(s));
  }
  return out;
}

void save_pr_csv(const PrCurve& curve, const std::string& path,
                 const std::string& meta_json) {
  std::ostringstream out;
  out << "threshold,precision,recall\n";
  for (const PrPoint& p : curve.points) {
    out << format_double(p.threshold) << "," << format_double(p.precision)
        << "," << format_double(p.recall) << "\n";
  }
  write_file(path, out.str());
  if (!meta_json.empty()) write_file(path + ".meta.json", meta_json + "\n");
}

namespace {

json scored_to_json(const std::vector<ScoredExample>& xs) {
  json arr = json::array();
  for (const ScoredExample& x : xs) {
    arr.push_back(json{{"id", x.id}, {"score", x.score}, {"label", x.label}});
  }
  return arr;
}

std::vector<ScoredExample> scored_from_json(const json& arr) {
  std::vector<ScoredExample> out;
  for (const auto& x : arr) {
    out.push_back({x.at("id").get<std::string>(), x.at("score").get<double>(),
                   x.at("label").get<int>()});
  }
  return out;
}

}  // namespace

std::string report_to_json(const EvalReport& report,
                           const std::string& invocation_json) {
  json j{{"format_version", kFormatVersion},
         {"kind", "eval_report"},
         {"scorer", report.scorer_name},
         {"seed", report.seed},
         {"chosen_threshold", report.chosen_threshold},
         {"validation_f1", report.validation_f1},
         {"test_f1", report.test_f1},
         {"test_pr_auc", report.test_pr_auc},
         {"protocol",
          json{{"threshold_rule", "max F1 on validation; ties toward higher threshold"},
               {"prediction_rule", "score >= threshold"},
               {"pr_auc_rule", "step (rectangular); tied scores flip together"}}},
         {"scores", json{{"val", scored_to_json(report.val_scores)},
                         {"test", scored_to_json(report.test_scores)}}}};
  if (!invocation_json.empty()) {
    j["invocation"] = json::parse(invocation_json);
  }
  return j.dump();
}

void save_report(const EvalReport& report, const std::string& path,
                 const std::string& invocation_json) {
  write_file(path, report_to_json(report, invocation_json) + "\n");
}

EvalReport load_report(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": malformed report: " + e.what());
  }
  if (j.value("kind", "") != "eval_report") {
    throw std::runtime_error(path + ": not an eval report");
  }
  EvalReport r;
  r.scorer_name = j.at("scorer").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.chosen_threshold = j.at("chosen_threshold").get<double>();
  r.validation_f1 = j.at("validation_f1").get<double>();
  r.test_f1 = j.at("test_f1").get<double>();
  r.test_pr_auc = j.at("test_pr_auc").get<double>();
  r.val_scores = scored_from_json(j.at("scores").at("val"));
  r.test_scores = scored_from_json(j.at("scores").at("test"));
  return r;
}

}  // namespace icd
