#include "icd/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "icd/metrics.hpp"
#include "icd/rng.hpp"

namespace icd {

std::string variant_name(GnnVariant v) {
  return v == GnnVariant::kMag ? "mag" : "gcne";
}

GnnVariant parse_variant(const std::string& name) {
  if (name == "mag") return GnnVariant::kMag;
  if (name == "gcne") return GnnVariant::kMeanOnly;
  throw std::invalid_argument("unknown variant \"" + name +
                              "\" (expected mag or gcne)");
}

void GnnConfig::validate() const {
  if (hidden_dim < 1) throw std::invalid_argument("gnn: hidden_dim must be >= 1");
  if (steps < 1) throw std::invalid_argument("gnn: steps must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("gnn: learning_rate must be > 0");
  }
  if (epochs < 1) throw std::invalid_argument("gnn: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("gnn: batch_size must be >= 1");
  if (early_stop_patience < 1) {
    throw std::invalid_argument("gnn: early_stop_patience must be >= 1");
  }
}

bool GnnConfig::lr_outside_default_range() const {
  return learning_rate < 1e-3 || learning_rate > 1e-2;
}

void GnnParameters::validate_shapes(const GnnConfig& config) const {
  const std::size_t t = static_cast<std::size_t>(config.steps);
  const std::size_t d = static_cast<std::size_t>(config.hidden_dim);
  const std::size_t in = static_cast<std::size_t>(config.update_in_dim());
  if (step_weight.size() != t || step_bias.size() != t) {
    throw std::invalid_argument("gnn: parameter step count mismatch");
  }
  for (std::size_t s = 0; s < t; ++s) {
    if (step_weight[s].size() != d * in || step_bias[s].size() != d) {
      throw std::invalid_argument("gnn: update shape mismatch at step " +
                                  std::to_string(s));
    }
  }
  if (readout_weight.size() != d * d || readout_bias.size() != d ||
      readout_out.size() != d) {
    throw std::invalid_argument("gnn: readout shape mismatch");
  }
}

std::vector<double*> GnnParameters::flat_view() {
  std::vector<double*> view;
  for (std::size_t t = 0; t < step_weight.size(); ++t) {
    for (double& x : step_weight[t]) view.push_back(&x);
    for (double& x : step_bias[t]) view.push_back(&x);
  }
  for (double& x : readout_weight) view.push_back(&x);
  for (double& x : readout_bias) view.push_back(&x);
  for (double& x : readout_out) view.push_back(&x);
  view.push_back(&readout_out_bias);
  return view;
}

std::vector<const double*> GnnParameters::flat_view() const {
  auto mutable_view = const_cast<GnnParameters*>(this)->flat_view();
  return {mutable_view.begin(), mutable_view.end()};
}

namespace {

GnnParameters zero_parameters(const GnnConfig& config) {
  const std::size_t d = static_cast<std::size_t>(config.hidden_dim);
  const std::size_t in = static_cast<std::size_t>(config.update_in_dim());
  GnnParameters p;
  p.step_weight.assign(static_cast<std::size_t>(config.steps),
                       std::vector<double>(d * in, 0.0));
  p.step_bias.assign(static_cast<std::size_t>(config.steps),
                     std::vector<double>(d, 0.0));
  p.readout_weight.assign(d * d, 0.0);
  p.readout_bias.assign(d, 0.0);
  p.readout_out.assign(d, 0.0);
  p.readout_out_bias = 0.0;
  return p;
}

// Flattened neighbor lists in ascending neighbor order; aggregation sums run
// in this canonical order.
struct GraphView {
  int n = 0;
  std::vector<int> offset;
  std::vector<int> nbr;
  std::vector<double> weight;
};

GraphView make_view(const WeightedGraph& g) {
  GraphView view;
  view.n = g.node_count;
  const auto adj = g.adjacency();
  view.offset.resize(static_cast<std::size_t>(g.node_count) + 1, 0);
  for (int v = 0; v < g.node_count; ++v) {
    view.offset[static_cast<std::size_t>(v) + 1] =
        view.offset[static_cast<std::size_t>(v)] +
        static_cast<int>(adj[static_cast<std::size_t>(v)].size());
  }
  view.nbr.reserve(view.offset.back());
  view.weight.reserve(view.offset.back());
  for (int v = 0; v < g.node_count; ++v) {
    for (const auto& [w, e] : adj[static_cast<std::size_t>(v)]) {
      view.nbr.push_back(w);
      view.weight.push_back(e);
    }
  }
  return view;
}

void compute_messages(GnnVariant variant, int d, const GraphView& view,
                      const std::vector<double>& h, std::vector<double>& out) {
  const int mdim = variant == GnnVariant::kMag ? d + 3 : d + 1;
  std::fill(out.begin(), out.end(), 0.0);
  for (int v = 0; v < view.n; ++v) {
    double* m = out.data() + static_cast<std::size_t>(v) * mdim;
    const int begin = view.offset[static_cast<std::size_t>(v)];
    const int end = view.offset[static_cast<std::size_t>(v) + 1];
    const int count = end - begin;
    if (count == 0) continue;  // empty neighborhood keeps the zero message
    double max_e = view.weight[static_cast<std::size_t>(begin)];
    double min_e = max_e;
    for (int j = begin; j < end; ++j) {
      const double* hw =
          h.data() + static_cast<std::size_t>(view.nbr[static_cast<std::size_t>(j)]) * d;
      for (int i = 0; i < d; ++i) m[i] += hw[i];
      const double e = view.weight[static_cast<std::size_t>(j)];
      m[d] += e;
      max_e = std::max(max_e, e);
      min_e = std::min(min_e, e);
    }
    const double inv = 1.0 / count;
    for (int i = 0; i <= d; ++i) m[i] *= inv;
    if (variant == GnnVariant::kMag) {
      m[d + 1] = max_e;
      m[d + 2] = min_e;
    }
  }
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

ForwardTrace run_forward(const GnnParameters& params, const GnnConfig& config,
                         const GraphView& view) {
  const int d = config.hidden_dim;
  const int mdim = config.message_dim();
  const int in_dim = config.update_in_dim();
  const int n = view.n;

  ForwardTrace trace;
  trace.hidden.assign(static_cast<std::size_t>(config.steps) + 1,
                      std::vector<double>(static_cast<std::size_t>(n) * d, 0.0));
  trace.messages.assign(static_cast<std::size_t>(config.steps),
                        std::vector<double>(static_cast<std::size_t>(n) * mdim, 0.0));
  trace.preact.assign(static_cast<std::size_t>(config.steps),
                      std::vector<double>(static_cast<std::size_t>(n) * d, 0.0));

  for (int t = 0; t < config.steps; ++t) {
    const std::vector<double>& h = trace.hidden[static_cast<std::size_t>(t)];
    std::vector<double>& m = trace.messages[static_cast<std::size_t>(t)];
    std::vector<double>& z = trace.preact[static_cast<std::size_t>(t)];
    std::vector<double>& h_next = trace.hidden[static_cast<std::size_t>(t) + 1];
    compute_messages(config.variant, d, view, h, m);

    const std::vector<double>& weight =
        params.step_weight[static_cast<std::size_t>(t)];
    const std::vector<double>& bias =
        params.step_bias[static_cast<std::size_t>(t)];
    for (int v = 0; v < n; ++v) {
      const double* hv = h.data() + static_cast<std::size_t>(v) * d;
      const double* mv = m.data() + static_cast<std::size_t>(v) * mdim;
      double* zv = z.data() + static_cast<std::size_t>(v) * d;
      double* hn = h_next.data() + static_cast<std::size_t>(v) * d;
      for (int i = 0; i < d; ++i) {
        const double* row = weight.data() + static_cast<std::size_t>(i) * in_dim;
        double acc = bias[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) acc += row[j] * hv[j];
        for (int j = 0; j < mdim; ++j) acc += row[d + j] * mv[j];
        zv[i] = acc;
        hn[i] = acc > 0.0 ? acc : 0.0;
      }
    }
    for (double x : h_next) {
      if (!std::isfinite(x)) {
        throw std::runtime_error(
            "gnn forward: non-finite hidden state at message-passing step " +
            std::to_string(t));
      }
    }
  }

  trace.pooled.assign(static_cast<std::size_t>(d), 0.0);
  const std::vector<double>& h_last = trace.hidden.back();
  for (int v = 0; v < n; ++v) {
    for (int i = 0; i < d; ++i) {
      trace.pooled[static_cast<std::size_t>(i)] +=
          h_last[static_cast<std::size_t>(v) * d + i];
    }
  }
  for (int i = 0; i < d; ++i) trace.pooled[static_cast<std::size_t>(i)] /= n;

  trace.readout_pre.assign(static_cast<std::size_t>(d), 0.0);
  double logit = params.readout_out_bias;
  for (int i = 0; i < d; ++i) {
    const double* row = params.readout_weight.data() + static_cast<std::size_t>(i) * d;
    double acc = params.readout_bias[static_cast<std::size_t>(i)];
    for (int j = 0; j < d; ++j) acc += row[j] * trace.pooled[static_cast<std::size_t>(j)];
    trace.readout_pre[static_cast<std::size_t>(i)] = acc;
    logit += params.readout_out[static_cast<std::size_t>(i)] * (acc > 0.0 ? acc : 0.0);
  }
  if (!std::isfinite(logit)) {
    throw std::runtime_error("gnn forward: non-finite value at readout");
  }
  trace.logit = logit;
  trace.probability = sigmoid(logit);
  return trace;
}

// Accumulates one example's gradients. d_logit = dLoss/dlogit. Gradients for
// the max/min message slots stop here: they depend only on edge weights,
// which are inputs, not parameters (a tie would route to the lowest neighbor
// index if edge gradients were ever needed).
void run_backward(const GnnParameters& params, const GnnConfig& config,
                  const GraphView& view, const ForwardTrace& trace,
                  double d_logit, GnnParameters& grads) {
  const int d = config.hidden_dim;
  const int mdim = config.message_dim();
  const int in_dim = config.update_in_dim();
  const int n = view.n;

  // Readout head.
  std::vector<double> g_pooled(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    const double pre = trace.readout_pre[static_cast<std::size_t>(i)];
    const double act = pre > 0.0 ? pre : 0.0;
    grads.readout_out[static_cast<std::size_t>(i)] += d_logit * act;
    const double g_pre =
        pre > 0.0 ? d_logit * params.readout_out[static_cast<std::size_t>(i)] : 0.0;
    if (g_pre != 0.0) {
      grads.readout_bias[static_cast<std::size_t>(i)] += g_pre;
      double* w_row = grads.readout_weight.data() + static_cast<std::size_t>(i) * d;
      const double* r_row =
          params.readout_weight.data() + static_cast<std::size_t>(i) * d;
      for (int j = 0; j < d; ++j) {
        w_row[j] += g_pre * trace.pooled[static_cast<std::size_t>(j)];
        g_pooled[static_cast<std::size_t>(j)] += g_pre * r_row[j];
      }
    }
  }
  grads.readout_out_bias += d_logit;

  // Mean pooling spreads the gradient evenly over nodes.
  std::vector<double> g_h(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v) {
    for (int i = 0; i < d; ++i) {
      g_h[static_cast<std::size_t>(v) * d + i] =
          g_pooled[static_cast<std::size_t>(i)] / n;
    }
  }

  std::vector<double> g_h_prev(static_cast<std::size_t>(n) * d);
  std::vector<double> g_z(static_cast<std::size_t>(d));
  std::vector<double> g_m(static_cast<std::size_t>(mdim));
  for (int t = config.steps - 1; t >= 0; --t) {
    const std::vector<double>& h = trace.hidden[static_cast<std::size_t>(t)];
    const std::vector<double>& m = trace.messages[static_cast<std::size_t>(t)];
    const std::vector<double>& z = trace.preact[static_cast<std::size_t>(t)];
    const std::vector<double>& weight =
        params.step_weight[static_cast<std::size_t>(t)];
    std::vector<double>& g_weight =
        grads.step_weight[static_cast<std::size_t>(t)];
    std::vector<double>& g_bias = grads.step_bias[static_cast<std::size_t>(t)];
    std::fill(g_h_prev.begin(), g_h_prev.end(), 0.0);

    for (int v = 0; v < n; ++v) {
      const double* hv = h.data() + static_cast<std::size_t>(v) * d;
      const double* mv = m.data() + static_cast<std::size_t>(v) * mdim;
      const double* zv = z.data() + static_cast<std::size_t>(v) * d;
      // ReLU subgradient at 0 is 0.
      for (int i = 0; i < d; ++i) {
        g_z[static_cast<std::size_t>(i)] =
            zv[i] > 0.0 ? g_h[static_cast<std::size_t>(v) * d + i] : 0.0;
      }
      std::fill(g_m.begin(), g_m.end(), 0.0);
      double* g_h_prev_v = g_h_prev.data() + static_cast<std::size_t>(v) * d;
      for (int i = 0; i < d; ++i) {
        const double gz = g_z[static_cast<std::size_t>(i)];
        if (gz == 0.0) continue;
        g_bias[static_cast<std::size_t>(i)] += gz;
        double* gw_row = g_weight.data() + static_cast<std::size_t>(i) * in_dim;
        const double* w_row = weight.data() + static_cast<std::size_t>(i) * in_dim;
        for (int j = 0; j < d; ++j) {
          gw_row[j] += gz * hv[j];
          g_h_prev_v[j] += gz * w_row[j];
        }
        for (int j = 0; j < mdim; ++j) {
          gw_row[d + j] += gz * mv[j];
          g_m[static_cast<std::size_t>(j)] += gz * w_row[d + j];
        }
      }

      // Mean aggregation: each neighbor's hidden state received weight 1/L.
      const int begin = view.offset[static_cast<std::size_t>(v)];
      const int end = view.offset[static_cast<std::size_t>(v) + 1];
      const int count = end - begin;
      if (count == 0) continue;
      const double inv = 1.0 / count;
      for (int j = begin; j < end; ++j) {
        double* g_h_prev_w =
            g_h_prev.data() +
            static_cast<std::size_t>(view.nbr[static_cast<std::size_t>(j)]) * d;
        for (int i = 0; i < d; ++i) {
          g_h_prev_w[i] += g_m[static_cast<std::size_t>(i)] * inv;
        }
      }
    }
    std::swap(g_h, g_h_prev);
  }
  // hidden[0] is the zero constant; its gradient is discarded.
}

// Numerically stable binary cross-entropy from the logit.
double bce_from_logit(double logit, int label) {
  const double z = logit;
  const double y = static_cast<double>(label);
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

GnnParameters init_parameters(const GnnConfig& config) {
  config.validate();
  Rng rng(config.seed);
  GnnParameters p = zero_parameters(config);
  auto fill_uniform = [&rng](std::vector<double>& w, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& x : w) x = (2.0 * rng.uniform() - 1.0) * bound;
  };
  for (std::size_t t = 0; t < p.step_weight.size(); ++t) {
    fill_uniform(p.step_weight[t], config.update_in_dim());
  }
  fill_uniform(p.readout_weight, config.hidden_dim);
  fill_uniform(p.readout_out, config.hidden_dim);
  return p;
}

std::vector<double> message(GnnVariant variant, int hidden_dim,
                            const std::vector<std::vector<double>>& neighbor_states,
                            const std::vector<double>& neighbor_edge_weights) {
  if (neighbor_states.size() != neighbor_edge_weights.size()) {
    throw std::invalid_argument("message: states/weights length mismatch");
  }
  const int d = hidden_dim;
  const int mdim = variant == GnnVariant::kMag ? d + 3 : d + 1;
  std::vector<double> m(static_cast<std::size_t>(mdim), 0.0);
  const std::size_t count = neighbor_states.size();
  if (count == 0) return m;
  double max_e = neighbor_edge_weights[0];
  double min_e = max_e;
  for (std::size_t j = 0; j < count; ++j) {
    if (static_cast<int>(neighbor_states[j].size()) != d) {
      throw std::invalid_argument("message: neighbor state has wrong length");
    }
    for (int i = 0; i < d; ++i) {
      m[static_cast<std::size_t>(i)] += neighbor_states[j][static_cast<std::size_t>(i)];
    }
    const double e = neighbor_edge_weights[j];
    m[static_cast<std::size_t>(d)] += e;
    max_e = std::max(max_e, e);
    min_e = std::min(min_e, e);
  }
  const double inv = 1.0 / static_cast<double>(count);
  for (int i = 0; i <= d; ++i) m[static_cast<std::size_t>(i)] *= inv;
  if (variant == GnnVariant::kMag) {
    m[static_cast<std::size_t>(d) + 1] = max_e;
    m[static_cast<std::size_t>(d) + 2] = min_e;
  }
  return m;
}

ForwardTrace forward(const GnnParameters& params, const GnnConfig& config,
                     const WeightedGraph& g) {
  config.validate();
  params.validate_shapes(config);
  return run_forward(params, config, make_view(g));
}

double predict(const GnnParameters& params, const GnnConfig& config,
               const WeightedGraph& g) {
  return forward(params, config, g).probability;
}

std::pair<double, GnnParameters> loss_and_gradients(
    const GnnParameters& params, const GnnConfig& config,
    const std::vector<const LabeledExample*>& batch) {
  if (batch.empty()) {
    throw std::invalid_argument("loss_and_gradients: empty batch");
  }
  config.validate();
  params.validate_shapes(config);

  GnnParameters grads = zero_parameters(config);
  double loss_sum = 0.0;
  for (const LabeledExample* ex : batch) {
    if (!ex->label.has_value()) {
      throw std::invalid_argument("loss_and_gradients: example " + ex->id +
                                  " has no label");
    }
    const GraphView view = make_view(ex->graph);
    const ForwardTrace trace = run_forward(params, config, view);
    loss_sum += bce_from_logit(trace.logit, *ex->label);
    const double d_logit =
        sigmoid(trace.logit) - static_cast<double>(*ex->label);
    run_backward(params, config, view, trace, d_logit, grads);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (double* g : grads.flat_view()) *g *= inv;
  return {loss_sum * inv, grads};
}

TrainResult train(const Dataset& dataset, const GnnConfig& config) {
  config.validate();
  if (config.lr_outside_default_range()) {
    std::cerr << "warning: learning_rate " << config.learning_rate
              << " is outside the validated range [1e-3, 1e-2]\n";
  }
  if (dataset.train_idx.empty() || dataset.val_idx.empty()) {
    throw std::invalid_argument("train: need non-empty train and val splits");
  }
  const std::vector<int> train_labels = dataset.labels_of(dataset.train_idx);
  const int train_pos =
      std::accumulate(train_labels.begin(), train_labels.end(), 0);
  if (train_pos == 0 || train_pos == static_cast<int>(train_labels.size())) {
    throw std::invalid_argument("train: both classes required in train split");
  }
  const std::vector<int> val_labels = dataset.labels_of(dataset.val_idx);
  if (std::accumulate(val_labels.begin(), val_labels.end(), 0) == 0) {
    throw std::invalid_argument(
        "train: validation split needs a positive example for PR-AUC");
  }

  GnnParameters params = init_parameters(config);
  Rng shuffle_rng(Rng::substream(config.seed, 1));

  // Adam state aligned with the canonical flat order.
  auto view = params.flat_view();
  const std::size_t p_count = view.size();
  std::vector<double> adam_m(p_count, 0.0), adam_v(p_count, 0.0);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  long step = 0;

  std::vector<int> order = dataset.train_idx;
  TrainResult result;
  result.best_val_pr_auc = -1.0;
  int since_best = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = shuffle_rng.uniform_int(i);
      std::swap(order[i - 1], order[j]);
    }

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::vector<const LabeledExample*> batch;
      batch.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(&dataset.examples[static_cast<std::size_t>(order[i])]);
      }
      auto [loss, grads] = loss_and_gradients(params, config, batch);
      epoch_loss += loss * static_cast<double>(batch.size());

      ++step;
      const auto g_view = grads.flat_view();
      const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t k = 0; k < p_count; ++k) {
        const double g = *g_view[k];
        adam_m[k] = kBeta1 * adam_m[k] + (1.0 - kBeta1) * g;
        adam_v[k] = kBeta2 * adam_v[k] + (1.0 - kBeta2) * g * g;
        *view[k] -= config.learning_rate * (adam_m[k] / bc1) /
                    (std::sqrt(adam_v[k] / bc2) + kEps);
      }
    }
    epoch_loss /= static_cast<double>(order.size());

    std::vector<double> val_scores;
    val_scores.reserve(dataset.val_idx.size());
    for (int idx : dataset.val_idx) {
      val_scores.push_back(
          predict(params, config, dataset.examples[static_cast<std::size_t>(idx)].graph));
    }
    const double auc = pr_curve(val_scores, val_labels).auc;
    result.history.push_back({epoch, epoch_loss, auc});

    if (auc > result.best_val_pr_auc) {
      result.best_val_pr_auc = auc;
      result.best_epoch = epoch;
      result.params = params;  // snapshot
      since_best = 0;
    } else if (++since_best >= config.early_stop_patience) {
      break;
    }
  }
  return result;
}

}  // namespace icd
