#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "sembed/encoder/embedding.hpp"
#include "sembed/error.hpp"

namespace sembed {

// Mean silhouette over samples with Euclidean distances: s(i) =
// (b - a) / max(a, b) where a is the mean distance to the sample's own
// cluster and b the smallest mean distance to another cluster. Samples in
// singleton clusters score 0.
inline double silhouette(const EmbeddingMatrix& X,
                         std::span<const std::uint32_t> assignments) {
  if (assignments.size() != X.rows) {
    throw ValidationError("assignment length does not match row count");
  }
  const std::size_t n = X.rows;
  std::map<std::uint32_t, std::size_t> cluster_sizes;
  for (std::uint32_t a : assignments) ++cluster_sizes[a];
  if (cluster_sizes.size() < 2) {
    throw ValidationError("silhouette needs at least 2 clusters");
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cluster_sizes[assignments[i]] == 1) continue;  // s(i) = 0
    // Mean distance from i to every cluster.
    std::map<std::uint32_t, double> sums;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (std::uint32_t c = 0; c < X.dim; ++c) {
        double d = static_cast<double>(X.row(i)[c]) -
                   static_cast<double>(X.row(j)[c]);
        d2 += d * d;
      }
      sums[assignments[j]] += std::sqrt(d2);
    }
    double a = sums[assignments[i]] /
               static_cast<double>(cluster_sizes[assignments[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [cluster, size] : cluster_sizes) {
      if (cluster == assignments[i]) continue;
      b = std::min(b, sums[cluster] / static_cast<double>(size));
    }
    double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

}  // namespace sembed
