#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icd/dataset.hpp"
#include "icd/graph.hpp"

namespace icd {

enum class GnnVariant {
  kMag,      // message = (MEAN(h_w ++ e_vw), MAX(e_vw), MIN(e_vw))
  kMeanOnly  // message = MEAN(h_w ++ e_vw)
};

std::string variant_name(GnnVariant v);
GnnVariant parse_variant(const std::string& name);

struct GnnConfig {
  int hidden_dim = 16;
  int steps = 3;
  GnnVariant variant = GnnVariant::kMag;
  double learning_rate = 3e-3;
  int epochs = 200;
  int batch_size = 32;
  int early_stop_patience = 20;  // epochs without validation PR-AUC gain
  std::uint64_t seed = 0;

  int message_dim() const {
    return variant == GnnVariant::kMag ? hidden_dim + 3 : hidden_dim + 1;
  }
  // Update input is h_v ++ m_v.
  int update_in_dim() const { return hidden_dim + message_dim(); }

  void validate() const;  // throws std::invalid_argument on bad shape fields
  // Learning rates outside [1e-3, 1e-2] are allowed but flagged so callers
  // can warn.
  bool lr_outside_default_range() const;
};

// All trainable weights. Per step t: a d x (d+m) update matrix (row-major)
// and a d bias; readout is a two-layer head on the mean-pooled state.
struct GnnParameters {
  std::vector<std::vector<double>> step_weight;  // [T][d * (d+m)]
  std::vector<std::vector<double>> step_bias;    // [T][d]
  std::vector<double> readout_weight;            // d * d, row-major
  std::vector<double> readout_bias;              // d
  std::vector<double> readout_out;               // d
  double readout_out_bias = 0.0;

  void validate_shapes(const GnnConfig& config) const;
  // Pointers to every scalar in a fixed canonical order (step weights and
  // biases, then readout). Used by the optimizer and gradient checks.
  std::vector<double*> flat_view();
  std::vector<const double*> flat_view() const;
};

// Symmetric uniform init scaled by fan-in; biases start at zero.
GnnParameters init_parameters(const GnnConfig& config);

// Everything the backward pass needs from one forward evaluation.
struct ForwardTrace {
  std::vector<std::vector<double>> hidden;    // [T+1][n*d], hidden[0] = 0
  std::vector<std::vector<double>> messages;  // [T][n*m]
  std::vector<std::vector<double>> preact;    // [T][n*d], before ReLU
  std::vector<double> pooled;                 // d
  std::vector<double> readout_pre;            // d, before ReLU
  double logit = 0.0;
  double probability = 0.0;
};

// One aggregation, exposed for unit tests. neighbor_states are d-vectors and
// must pair up with neighbor_edge_weights; an empty neighborhood yields an
// all-zeros message of the variant's length.
std::vector<double> message(GnnVariant variant, int hidden_dim,
                            const std::vector<std::vector<double>>& neighbor_states,
                            const std::vector<double>& neighbor_edge_weights);

// Zero-initialized node states, `steps` rounds of message passing and update,
// mean pooling, two-layer readout, sigmoid. Throws std::runtime_error naming
// the step if a non-finite value appears.
ForwardTrace forward(const GnnParameters& params, const GnnConfig& config,
                     const WeightedGraph& g);

double predict(const GnnParameters& params, const GnnConfig& config,
               const WeightedGraph& g);

// Mean binary cross-entropy over the batch, computed from the logit, plus
// exact reverse-mode gradients with the same shape as the parameters.
// Examples must carry labels.
std::pair<double, GnnParameters> loss_and_gradients(
    const GnnParameters& params, const GnnConfig& config,
    const std::vector<const LabeledExample*>& batch);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_pr_auc = 0.0;
};

struct TrainResult {
  GnnParameters params;  // snapshot at the best validation PR-AUC
  std::vector<EpochStats> history;
  int best_epoch = 0;
  double best_val_pr_auc = 0.0;
};

// Minibatch Adam (0.9, 0.999, 1e-8) with per-epoch validation PR-AUC and
// early stopping. Deterministic given config.seed. Requires non-empty train
// and validation splits, both classes in train and a positive in validation.
TrainResult train(const Dataset& dataset, const GnnConfig& config);

}  // namespace icd
