#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "sembed/corpus/label.hpp"
#include "sembed/encoder/embedding.hpp"
#include "sembed/error.hpp"

namespace sembed {

enum class KnnWeighting { uniform, distance };

// K-nearest-neighbors over stored embeddings; k defaults to
// floor(sqrt(N)) clamped to at least 1.
struct KnnModel {
  EmbeddingMatrix train;
  std::vector<Label> labels;
  std::size_t k = 1;
  KnnWeighting weighting = KnnWeighting::distance;
};

inline std::size_t sqrt_neighbor_rule(std::size_t n) {
  auto k = static_cast<std::size_t>(
      std::floor(std::sqrt(static_cast<double>(n))));
  return std::max<std::size_t>(k, 1);
}

inline KnnModel knn_fit(const EmbeddingMatrix& X, std::span<const Label> y,
                        KnnWeighting weighting = KnnWeighting::distance,
                        std::size_t k_override = 0) {
  if (X.rows == 0) throw ValidationError("knn: empty training set");
  if (y.size() != X.rows) {
    throw ValidationError("knn: label count does not match row count");
  }
  KnnModel m;
  m.train = X;
  m.labels.assign(y.begin(), y.end());
  m.k = k_override ? std::min<std::size_t>(k_override, X.rows)
                   : sqrt_neighbor_rule(X.rows);
  m.weighting = weighting;
  return m;
}

// Distance-weighted vote: labels are scored by the sum of 1/d over the k
// nearest neighbors. Any zero-distance neighbor short-circuits to the
// majority among zero-distance neighbors only. Ties on score or distance
// resolve toward the smallest training index.
inline Label knn_predict(const KnnModel& model, std::span<const float> query) {
  if (query.size() != model.train.dim) {
    throw ValidationError("knn: query dimension mismatch");
  }
  const std::size_t n = model.train.rows;
  std::vector<std::pair<double, std::size_t>> by_dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    std::span<const float> row = model.train.row(i);
    for (std::size_t j = 0; j < query.size(); ++j) {
      double d = static_cast<double>(query[j]) - static_cast<double>(row[j]);
      d2 += d * d;
    }
    by_dist[i] = {std::sqrt(d2), i};
  }
  std::size_t k = std::min(model.k, n);
  std::partial_sort(by_dist.begin(), by_dist.begin() + k, by_dist.end());

  struct Score {
    double weight = 0.0;
    std::size_t count = 0;
    std::size_t min_index = std::numeric_limits<std::size_t>::max();
  };
  std::map<Label, Score> zero_hits;
  std::map<Label, Score> votes;
  for (std::size_t r = 0; r < k; ++r) {
    auto [d, i] = by_dist[r];
    Label label = model.labels[i];
    if (d == 0.0 && model.weighting == KnnWeighting::distance) {
      Score& s = zero_hits[label];
      ++s.count;
      s.min_index = std::min(s.min_index, i);
    }
    Score& s = votes[label];
    s.weight += model.weighting == KnnWeighting::distance
                    ? (d > 0.0 ? 1.0 / d : 0.0)
                    : 1.0;
    ++s.count;
    s.min_index = std::min(s.min_index, i);
  }

  if (!zero_hits.empty()) {
    Label best = zero_hits.begin()->first;
    for (const auto& [label, s] : zero_hits) {
      const Score& cur = zero_hits[best];
      if (s.count > cur.count ||
          (s.count == cur.count && s.min_index < cur.min_index)) {
        best = label;
      }
    }
    return best;
  }

  Label best = votes.begin()->first;
  for (const auto& [label, s] : votes) {
    const Score& cur = votes[best];
    if (s.weight > cur.weight ||
        (s.weight == cur.weight && s.min_index < cur.min_index)) {
      best = label;
    }
  }
  return best;
}

}  // namespace sembed
