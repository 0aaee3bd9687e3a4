#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "sembed/corpus/label.hpp"
#include "sembed/encoder/embedding.hpp"
#include "sembed/error.hpp"

namespace sembed {

struct LogregConfig {
  double l2 = 1e-4;
  std::size_t epochs = 200;
  double lr = 0.1;
  std::uint64_t seed = 0;  // reserved for minibatch mode; zero init here
};

// Multinomial softmax regression trained by full-batch gradient descent.
struct LogregModel {
  std::vector<Label> classes;      // canonical label order
  std::vector<double> weights;     // classes x dim, row-major
  std::vector<double> bias;        // per class
  std::size_t dim = 0;

  std::vector<double> probabilities(std::span<const float> x) const {
    std::vector<double> logits(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
      double z = bias[c];
      for (std::size_t j = 0; j < dim; ++j) {
        z += weights[c * dim + j] * static_cast<double>(x[j]);
      }
      logits[c] = z;
    }
    double peak = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& z : logits) {
      z = std::exp(z - peak);
      sum += z;
    }
    for (double& z : logits) z /= sum;
    return logits;
  }
};

namespace detail {

// Loss and gradient of the regularized objective:
// J = mean cross-entropy + (l2/2) * ||W||^2 (bias unpenalized).
struct LogregGrad {
  double loss = 0.0;
  std::vector<double> grad_w;
  std::vector<double> grad_b;
};

inline LogregGrad logreg_loss_gradient(const EmbeddingMatrix& X,
                                       std::span<const std::size_t> class_ids,
                                       std::size_t num_classes,
                                       std::span<const double> weights,
                                       std::span<const double> bias,
                                       double l2) {
  const std::size_t n = X.rows;
  const std::size_t dim = X.dim;
  LogregGrad out;
  out.grad_w.assign(num_classes * dim, 0.0);
  out.grad_b.assign(num_classes, 0.0);

  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> logits(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const float> x = X.row(i);
    for (std::size_t c = 0; c < num_classes; ++c) {
      double z = bias[c];
      for (std::size_t j = 0; j < dim; ++j) {
        z += weights[c * dim + j] * static_cast<double>(x[j]);
      }
      logits[c] = z;
    }
    double peak = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& z : logits) {
      z = std::exp(z - peak);
      sum += z;
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
      double p = logits[c] / sum;
      double delta = p - (c == class_ids[i] ? 1.0 : 0.0);
      out.grad_b[c] += delta * inv_n;
      for (std::size_t j = 0; j < dim; ++j) {
        out.grad_w[c * dim + j] += delta * static_cast<double>(x[j]) * inv_n;
      }
      if (c == class_ids[i]) {
        out.loss -= std::log(std::max(p, 1e-300)) * inv_n;
      }
    }
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    out.loss += 0.5 * l2 * weights[k] * weights[k];
    out.grad_w[k] += l2 * weights[k];
  }
  return out;
}

}  // namespace detail

inline LogregModel logreg_fit(const EmbeddingMatrix& X,
                              std::span<const Label> y,
                              const LogregConfig& config = {}) {
  if (X.rows == 0) throw ValidationError("logreg: empty training set");
  if (y.size() != X.rows) {
    throw ValidationError("logreg: label count does not match row count");
  }
  std::set<Label> distinct(y.begin(), y.end());
  if (distinct.size() < 2) {
    throw ValidationError("logreg needs at least 2 labels");
  }

  LogregModel model;
  model.dim = X.dim;
  model.classes.assign(distinct.begin(), distinct.end());
  model.weights.assign(model.classes.size() * X.dim, 0.0);
  model.bias.assign(model.classes.size(), 0.0);

  std::map<Label, std::size_t> class_index;
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    class_index[model.classes[c]] = c;
  }
  std::vector<std::size_t> class_ids(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) class_ids[i] = class_index[y[i]];

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    detail::LogregGrad g = detail::logreg_loss_gradient(
        X, class_ids, model.classes.size(), model.weights, model.bias,
        config.l2);
    if (!std::isfinite(g.loss)) {
      throw Error("logreg: non-finite loss at epoch " + std::to_string(epoch));
    }
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
      model.weights[k] -= config.lr * g.grad_w[k];
    }
    for (std::size_t c = 0; c < model.bias.size(); ++c) {
      model.bias[c] -= config.lr * g.grad_b[c];
    }
  }
  return model;
}

// Argmax probability; ties resolve to the smaller class index.
inline Label logreg_predict(const LogregModel& model,
                            std::span<const float> query) {
  if (query.size() != model.dim) {
    throw ValidationError("logreg: query dimension mismatch");
  }
  std::vector<double> p = model.probabilities(query);
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.size(); ++c) {
    if (p[c] > p[best]) best = c;
  }
  return model.classes[best];
}

}  // namespace sembed
