#pragma once

#include <cmath>
#include <span>
#include <string>

#include "sembed/error.hpp"

namespace sembed {

enum class Distance { euclidean, cosine };

inline void check_same_dim(std::span<const double> a,
                           std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("vector dimension mismatch: " +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
}

inline double euclidean_distance(std::span<const double> a,
                                 std::span<const double> b) {
  check_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

// d(x, y) = 1 - cos(x, y); zero vectors have no direction and are rejected.
inline double cosine_distance(std::span<const double> a,
                              std::span<const double> b) {
  check_same_dim(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw ValidationError("cosine distance is undefined for zero vectors");
  }
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double distance(std::span<const double> a, std::span<const double> b,
                       Distance kind) {
  return kind == Distance::euclidean ? euclidean_distance(a, b)
                                     : cosine_distance(a, b);
}

}  // namespace sembed
