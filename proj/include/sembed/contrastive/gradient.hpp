#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sembed/contrastive/loss.hpp"
#include "sembed/encoder/model.hpp"

namespace sembed {

// Gradient of a batch loss with respect to the projection matrix, stored
// sparsely: only rows touched by the batch's hashed features are present.
// Row iteration order is fixed so accumulation is bit-reproducible.
struct BatchGradient {
  std::uint32_t hash_dim = 0;
  std::uint32_t out_dim = 0;
  std::map<std::uint32_t, std::vector<double>> rows;
  double loss = 0.0;
  std::size_t term_count = 0;  // triplets (or pairs) in the denominator

  std::vector<double> dense() const {
    std::vector<double> out(static_cast<std::size_t>(hash_dim) * out_dim, 0.0);
    for (const auto& [r, v] : rows) {
      for (std::uint32_t j = 0; j < out_dim; ++j) {
        out[static_cast<std::size_t>(r) * out_dim + j] = v[j];
      }
    }
    return out;
  }
};

namespace detail {

// Adds s * (e_u - e_v) / d(u, v) to the embedding-space gradients of u and
// v (with opposite signs). Zero-distance pairs contribute nothing: the
// Euclidean gradient is undefined there and the subgradient 0 is used.
inline void add_pair_pull(std::vector<std::vector<double>>& grad_e,
                          const std::vector<std::vector<double>>& e,
                          std::size_t u, std::size_t v, double dist,
                          double scale) {
  if (dist <= 0.0) return;
  const double s = scale / dist;
  const std::vector<double>& eu = e[u];
  const std::vector<double>& ev = e[v];
  std::vector<double>& gu = grad_e[u];
  std::vector<double>& gv = grad_e[v];
  for (std::size_t j = 0; j < eu.size(); ++j) {
    double g = s * (eu[j] - ev[j]);
    gu[j] += g;
    gv[j] -= g;
  }
}

}  // namespace detail

// Batch-all triplet loss and its gradient w.r.t. the projection, for the
// Euclidean distance. Triplets whose hinge is zero (or exactly at the
// kink) contribute no gradient.
inline BatchGradient batch_all_triplet_gradient(
    const EncoderModel& model, std::span<const SparseVec> features,
    std::span<const Label> labels, double margin,
    TripletAveraging averaging = TripletAveraging::all_valid) {
  if (features.size() != labels.size()) {
    throw ValidationError("batch has " + std::to_string(features.size()) +
                          " feature rows but " + std::to_string(labels.size()) +
                          " labels");
  }
  BatchGradient grad;
  grad.hash_dim = model.featurizer.hash_dim;
  grad.out_dim = model.out_dim;

  const std::size_t n = features.size();
  std::vector<std::vector<double>> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = embed_features(model, features[i]);

  std::vector<Triplet> triplets = mine_batch_all(labels);
  if (triplets.empty()) return grad;

  // Pairwise distances are reused across triplets.
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = euclidean_distance(e[i], e[j]);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }

  std::vector<std::vector<double>> grad_e(n,
                                          std::vector<double>(model.out_dim));
  double loss_sum = 0.0;
  std::size_t positive_count = 0;
  for (const Triplet& t : triplets) {
    double dap = dist[t.anchor * n + t.positive];
    double dan = dist[t.anchor * n + t.negative];
    double hinge = dap - dan + margin;
    if (!std::isfinite(hinge)) {
      throw ValidationError("non-finite loss for triplet (" +
                            std::to_string(t.anchor) + ", " +
                            std::to_string(t.positive) + ", " +
                            std::to_string(t.negative) + ")");
    }
    if (hinge <= 0.0) continue;
    loss_sum += hinge;
    ++positive_count;
    detail::add_pair_pull(grad_e, e, t.anchor, t.positive, dap, 1.0);
    detail::add_pair_pull(grad_e, e, t.anchor, t.negative, dan, -1.0);
  }

  std::size_t denom = averaging == TripletAveraging::all_valid
                          ? triplets.size()
                          : positive_count;
  grad.term_count = denom;
  if (denom == 0) return grad;
  grad.loss = loss_sum / static_cast<double>(denom);

  const double inv = 1.0 / static_cast<double>(denom);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < features[i].nnz(); ++k) {
      std::uint32_t r = features[i].index[k];
      double x = features[i].value[k];
      auto [it, inserted] =
          grad.rows.try_emplace(r, std::vector<double>(model.out_dim, 0.0));
      std::vector<double>& row = it->second;
      for (std::uint32_t j = 0; j < model.out_dim; ++j) {
        row[j] += x * grad_e[i][j] * inv;
      }
    }
  }
  return grad;
}

// All-pairs contrastive loss and gradient: every unordered batch pair is a
// sample, similar when the labels match.
inline BatchGradient pairwise_contrastive_gradient(
    const EncoderModel& model, std::span<const SparseVec> features,
    std::span<const Label> labels, double margin) {
  if (features.size() != labels.size()) {
    throw ValidationError("batch has " + std::to_string(features.size()) +
                          " feature rows but " + std::to_string(labels.size()) +
                          " labels");
  }
  BatchGradient grad;
  grad.hash_dim = model.featurizer.hash_dim;
  grad.out_dim = model.out_dim;

  const std::size_t n = features.size();
  if (n < 2) return grad;
  std::vector<std::vector<double>> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = embed_features(model, features[i]);

  std::vector<std::vector<double>> grad_e(n,
                                          std::vector<double>(model.out_dim));
  double loss_sum = 0.0;
  std::vector<PairSample> pairs = mine_all_pairs(labels);
  for (const PairSample& pair : pairs) {
    double d = euclidean_distance(e[pair.a], e[pair.b]);
    if (pair.similar) {
      loss_sum += d * d;
      // d(d^2)/de_a = 2 (e_a - e_b); smooth at d = 0.
      for (std::uint32_t j = 0; j < model.out_dim; ++j) {
        double g = 2.0 * (e[pair.a][j] - e[pair.b][j]);
        grad_e[pair.a][j] += g;
        grad_e[pair.b][j] -= g;
      }
    } else {
      double gap = margin - d;
      if (gap <= 0.0) continue;
      loss_sum += gap * gap;
      detail::add_pair_pull(grad_e, e, pair.a, pair.b, d, -2.0 * gap);
    }
  }
  grad.term_count = pairs.size();
  grad.loss = loss_sum / static_cast<double>(pairs.size());

  const double inv = 1.0 / static_cast<double>(pairs.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < features[i].nnz(); ++k) {
      std::uint32_t r = features[i].index[k];
      double x = features[i].value[k];
      auto [it, inserted] =
          grad.rows.try_emplace(r, std::vector<double>(model.out_dim, 0.0));
      std::vector<double>& row = it->second;
      for (std::uint32_t j = 0; j < model.out_dim; ++j) {
        row[j] += x * grad_e[i][j] * inv;
      }
    }
  }
  return grad;
}

// Dense convenience wrapper: gradient of the batch-all triplet loss with
// the projection's full shape.
inline std::vector<double> loss_gradient(
    const EncoderModel& model, std::span<const SparseVec> features,
    std::span<const Label> labels, double margin,
    TripletAveraging averaging = TripletAveraging::all_valid) {
  return batch_all_triplet_gradient(model, features, labels, margin, averaging)
      .dense();
}

}  // namespace sembed
