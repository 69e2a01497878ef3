#include "icd/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace icd {

namespace {

void check_lengths(const std::vector<double>& scores,
                   const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("metrics: scores/labels must match, size >= 1");
  }
}

}  // namespace

double f1_at(const std::vector<double>& scores, const std::vector<int>& labels,
             double threshold) {
  check_lengths(scores, labels);
  int tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;  // ties count positive
    if (predicted && labels[i] == 1) ++tp;
    if (predicted && labels[i] == 0) ++fp;
    if (!predicted && labels[i] == 1) ++fn;
  }
  if (tp + fp == 0 || tp + fn == 0) return 0.0;
  const double precision = static_cast<double>(tp) / (tp + fp);
  const double recall = static_cast<double>(tp) / (tp + fn);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

ThresholdChoice best_threshold(const std::vector<double>& scores,
                               const std::vector<int>& labels) {
  check_lengths(scores, labels);
  const int positives = std::accumulate(labels.begin(), labels.end(), 0);
  if (positives == 0 || positives == static_cast<int>(labels.size())) {
    throw std::invalid_argument("best_threshold: both classes required");
  }

  std::vector<double> distinct = scores;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  // Midpoints between adjacent distinct scores plus the extreme scores.
  std::vector<double> candidates;
  candidates.push_back(distinct.front());
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    candidates.push_back(0.5 * (distinct[i] + distinct[i + 1]));
  }
  candidates.push_back(distinct.back());

  ThresholdChoice best{candidates.front(), -1.0};
  for (double t : candidates) {
    const double f1 = f1_at(scores, labels, t);
    if (f1 > best.f1 || (f1 == best.f1 && t > best.threshold)) {
      best = {t, f1};
    }
  }
  return best;
}

PrCurve pr_curve(const std::vector<double>& scores,
                 const std::vector<int>& labels) {
  check_lengths(scores, labels);
  const int positives = std::accumulate(labels.begin(), labels.end(), 0);
  if (positives == 0) {
    throw std::invalid_argument("pr_curve: at least one positive required");
  }

  std::vector<std::pair<double, int>> ranked(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    ranked[i] = {scores[i], labels[i]};
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  PrCurve curve;
  int tp = 0, predicted = 0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < ranked.size()) {
    // Equal scores flip together.
    const double t = ranked[i].first;
    while (i < ranked.size() && ranked[i].first == t) {
      ++predicted;
      tp += ranked[i].second;
      ++i;
    }
    const double precision = static_cast<double>(tp) / predicted;
    const double recall = static_cast<double>(tp) / positives;
    curve.points.push_back({t, precision, recall});
    curve.auc += precision * (recall - prev_recall);  // step rule
    prev_recall = recall;
  }
  return curve;
}

namespace {

std::vector<ScoredExample> score_split(const Scorer& scorer,
                                       const Dataset& dataset,
                                       const std::vector<int>& idx) {
  std::vector<ScoredExample> out;
  out.reserve(idx.size());
  for (int i : idx) {
    const LabeledExample& ex = dataset.examples[static_cast<std::size_t>(i)];
    if (!ex.label.has_value()) {
      throw std::invalid_argument("evaluate: example " + ex.id + " has no label");
    }
    out.push_back({ex.id, scorer(ex.graph), *ex.label});
  }
  return out;
}

EvalReport evaluate_scored(std::vector<ScoredExample> val,
                           std::vector<ScoredExample> test,
                           const std::string& scorer_name, std::uint64_t seed) {
  auto unzip = [](const std::vector<ScoredExample>& xs) {
    std::pair<std::vector<double>, std::vector<int>> out;
    for (const auto& x : xs) {
      out.first.push_back(x.score);
      out.second.push_back(x.label);
    }
    return out;
  };
  const auto [val_scores, val_labels] = unzip(val);
  const auto [test_scores, test_labels] = unzip(test);

  EvalReport report;
  report.scorer_name = scorer_name;
  report.seed = seed;
  const ThresholdChoice choice = best_threshold(val_scores, val_labels);
  report.chosen_threshold = choice.threshold;
  report.validation_f1 = choice.f1;
  report.test_f1 = f1_at(test_scores, test_labels, choice.threshold);
  report.test_pr_auc = pr_curve(test_scores, test_labels).auc;
  report.val_scores = std::move(val);
  report.test_scores = std::move(test);
  return report;
}

}  // namespace

EvalReport evaluate_scorer(const Scorer& scorer, const Dataset& dataset,
                           const std::string& scorer_name, std::uint64_t seed) {
  if (dataset.val_idx.empty() || dataset.test_idx.empty()) {
    throw std::invalid_argument("evaluate: need validation and test splits");
  }
  return evaluate_scored(score_split(scorer, dataset, dataset.val_idx),
                         score_split(scorer, dataset, dataset.test_idx),
                         scorer_name, seed);
}

EvalReport evaluate_scores(
    const std::vector<std::pair<std::string, double>>& id_scores,
    const Dataset& dataset, const std::string& scorer_name,
    std::uint64_t seed) {
  if (dataset.val_idx.empty() || dataset.test_idx.empty()) {
    throw std::invalid_argument("evaluate: need validation and test splits");
  }
  auto lookup = [&id_scores](const std::string& id) {
    for (const auto& [sid, score] : id_scores) {
      if (sid == id) return score;
    }
    throw std::invalid_argument("evaluate: no score for example " + id);
  };
  auto gather = [&](const std::vector<int>& idx) {
    std::vector<ScoredExample> out;
    out.reserve(idx.size());
    for (int i : idx) {
      const LabeledExample& ex = dataset.examples[static_cast<std::size_t>(i)];
      if (!ex.label.has_value()) {
        throw std::invalid_argument("evaluate: example " + ex.id +
                                    " has no label");
      }
      out.push_back({ex.id, lookup(ex.id), *ex.label});
    }
    return out;
  };
  return evaluate_scored(gather(dataset.val_idx), gather(dataset.test_idx),
                         scorer_name, seed);
}

MultiSeedReport multi_seed_report(
    const std::function<Dataset(std::uint64_t)>& make_dataset,
    const std::function<Scorer(const Dataset&, std::uint64_t)>& make_scorer,
    int n_seeds, std::uint64_t base_seed, int threads) {
  if (n_seeds < 2) {
    throw std::invalid_argument("multi_seed_report: n_seeds must be >= 2");
  }
  MultiSeedReport report;
  report.per_seed_f1.assign(static_cast<std::size_t>(n_seeds), 0.0);

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_seeds));
  auto run_seed = [&](int i) {
    try {
      const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
      const Dataset dataset = make_dataset(seed);
      const Scorer scorer = make_scorer(dataset, seed);
      report.per_seed_f1[static_cast<std::size_t>(i)] =
          evaluate_scorer(scorer, dataset, "", seed).test_f1;
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };

  int worker_count = threads > 0
                         ? threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  worker_count = std::max(1, std::min(worker_count, n_seeds));
  if (worker_count == 1) {
    for (int i = 0; i < n_seeds; ++i) run_seed(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < worker_count; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_seeds; i = next.fetch_add(1)) {
          run_seed(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  // Reduce in seed order.
  double sum = 0.0;
  for (double f1 : report.per_seed_f1) sum += f1;
  report.mean_f1 = sum / n_seeds;
  double var = 0.0;
  for (double f1 : report.per_seed_f1) {
    var += (f1 - report.mean_f1) * (f1 - report.mean_f1);
  }
  var /= (n_seeds - 1);  // sample variance
  report.std_error = std::sqrt(var) / std::sqrt(static_cast<double>(n_seeds));
  return report;
}

}  // namespace icd
