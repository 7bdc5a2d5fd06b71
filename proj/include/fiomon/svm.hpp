#pragma once

// Soft-margin linear SVM trained by dual coordinate descent on the hinge-loss dual.
//
// The bias is learned as the weight of an extra feature that is 1 for every example, so the
// problem actually solved is
//
//   min_{w,b}  1/2 (|w|^2 + b^2) + C * sum_i max(0, 1 - y_i (w . x_i + b))
//
// with dual
//
//   max_{0 <= a_i <= C}  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j (x_i . x_j + 1).
//
// One coordinate step on a_i is exact: a_i <- clip(a_i - G_i / Q_ii, 0, C) with
// G_i = y_i (w . x_i + b) - 1 and Q_ii = |x_i|^2 + 1.
//
// Coordinate steps increase the dual monotonically but the primal value of the running
// iterate can go up between epochs. The solver therefore keeps an incumbent: after each
// epoch the iterate replaces it only if its primal objective is strictly lower, and the
// incumbent is what gets returned.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fiomon/corpus.hpp"
#include "fiomon/error.hpp"
#include "fiomon/vectorizer.hpp"

namespace fiomon {

struct TrainingConfig {
  double c = 1.0;
  double tolerance = 1e-4;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 42;

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("C must be a positive finite number");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
      throw std::invalid_argument("tolerance must be a positive finite number");
    }
    if (max_epochs < 1) throw std::invalid_argument("max_epochs must be at least 1");
  }
};

struct TrainingMeta {
  double c = 0.0;
  std::size_t epochs_run = 0;
  double final_objective = 0.0;
  bool converged = false;

  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

struct TrainingExample {
  SparseVector features;
  Label label;
};

struct LinearSvm {
  std::vector<double> weights;
  double bias = 0.0;
  TrainingMeta meta;

  friend bool operator==(const LinearSvm&, const LinearSvm&) = default;
};

/// State handed to a training observer after every epoch.
struct EpochTrace {
  std::size_t epoch;                 // 1-based
  std::span<const double> alphas;    // dual variables, in example order
  double iterate_objective;          // primal objective of the running iterate
  double primal_objective;           // primal objective of the incumbent
  double gradient_gap;               // max - min projected gradient over the sweep
};

using EpochObserver = std::function<void(const EpochTrace&)>;

namespace detail {

inline double sparse_dot(std::span<const double> w, const SparseVector& x) {
  double s = 0.0;
  for (const auto& e : x.entries) s += w[e.index] * e.value;
  return s;
}

inline double squared_norm(const SparseVector& x) {
  double s = 0.0;
  for (const auto& e : x.entries) s += e.value * e.value;
  return s;
}

inline void validate_examples(std::span<const TrainingExample> examples, std::size_t dimension) {
  if (examples.empty()) throw TrainingDataError("training set is empty");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (ex.label != Label::kRelevant && ex.label != Label::kIrrelevant) {
      throw TrainingDataError("example " + std::to_string(i) + " has a label other than -1/+1");
    }
    pos += ex.label == Label::kRelevant;
    for (const auto& e : ex.features.entries) {
      if (!std::isfinite(e.value)) {
        throw TrainingDataError("example " + std::to_string(i) + " has a non-finite feature value");
      }
      if (e.index >= dimension) {
        throw TrainingDataError("example " + std::to_string(i) + " has feature index " +
                                std::to_string(e.index) + " outside dimension " +
                                std::to_string(dimension));
      }
    }
  }
  if (pos == 0 || pos == examples.size()) {
    throw TrainingDataError("training set needs examples of both classes (relevant " +
                            std::to_string(pos) + ", irrelevant " +
                            std::to_string(examples.size() - pos) + ")");
  }
}

}  // namespace detail

/// Regularized hinge objective with the bias treated as the augmented feature's weight:
/// 1/2 (|w|^2 + b^2) + C * sum of hinge losses.
inline double objective(std::span<const double> weights, double bias,
                        std::span<const TrainingExample> examples, double c) {
  double reg = bias * bias;
  for (const double w : weights) reg += w * w;
  double loss = 0.0;
  for (const auto& ex : examples) {
    const double margin = to_int(ex.label) * (detail::sparse_dot(weights, ex.features) + bias);
    loss += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * reg + c * loss;
}

/// Trains on `examples`, whose feature indices must be below `dimension`.
/// Throws TrainingDataError for empty or single-class input and for non-finite features.
inline LinearSvm train(std::span<const TrainingExample> examples, std::size_t dimension,
                       const TrainingConfig& config, const EpochObserver& observer = {}) {
  config.validate();
  detail::validate_examples(examples, dimension);

  const std::size_t n = examples.size();
  const double c = config.c;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> diag(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = detail::squared_norm(examples[i].features) + 1.0;
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> w(dimension, 0.0);
  double b = 0.0;

  LinearSvm model;
  model.weights = w;
  model.meta.c = c;
  model.meta.final_objective = objective(w, b, examples, c);

  // mt19937_64 output is fixed by the standard; the distributions are not, so the shuffle
  // draws raw words to stay reproducible across standard libraries.
  std::mt19937_64 rng(config.seed);

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
      std::swap(order[i], order[j]);
    }

    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (const std::size_t i : order) {
      const auto& ex = examples[i];
      const double y = to_int(ex.label);
      const double g = y * (detail::sparse_dot(w, ex.features) + b) - 1.0;

      double pg = g;
      if (alpha[i] == 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] == c) {
        pg = std::max(g, 0.0);
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);

      if (std::fabs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - g / diag[i], 0.0, c);
        const double step = (alpha[i] - old) * y;
        for (const auto& e : ex.features.entries) w[e.index] += step * e.value;
        b += step;
      }
    }

    model.meta.epochs_run = epoch;
    const double gap = pg_max - pg_min;
    const double current = objective(w, b, examples, c);
    if (current < model.meta.final_objective) {
      model.weights = w;
      model.bias = b;
      model.meta.final_objective = current;
    }
    if (observer) {
      observer(EpochTrace{epoch, alpha, current, model.meta.final_objective, gap});
    }
    if (gap < config.tolerance) {
      model.meta.converged = true;
      break;
    }
  }
  return model;
}

/// w . v + b. Throws std::out_of_range for an index beyond the weight vector.
inline double decision_value(const LinearSvm& model, const SparseVector& v) {
  for (const auto& e : v.entries) {
    if (e.index >= model.weights.size()) {
      throw std::out_of_range("feature index " + std::to_string(e.index) +
                              " outside model dimension " + std::to_string(model.weights.size()));
    }
  }
  return detail::sparse_dot(model.weights, v) + model.bias;
}

/// Ties at exactly zero map to relevant.
inline Label label_for(double decision) {
  return decision >= 0.0 ? Label::kRelevant : Label::kIrrelevant;
}

inline Label predict(const LinearSvm& model, const SparseVector& v) {
  return label_for(decision_value(model, v));
}

}  // namespace fiomon
