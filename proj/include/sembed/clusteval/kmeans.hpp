#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sembed/encoder/embedding.hpp"
#include "sembed/error.hpp"
#include "sembed/util/rng.hpp"

namespace sembed {

struct ClusterResult {
  std::vector<std::uint32_t> assignments;
  std::vector<double> centroids;  // k x dim, row-major
  double inertia = 0.0;
  std::size_t iterations = 0;
  std::size_t restarts_used = 0;
  // Inertia measured after each assignment pass of the winning restart.
  std::vector<double> inertia_trace;
};

struct KmeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iter = 300;
  double tol = 1e-4;
};

namespace detail {

inline double sq_dist(std::span<const float> x, const double* c,
                      std::size_t dim) {
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    double d = static_cast<double>(x[j]) - c[j];
    acc += d * d;
  }
  return acc;
}

struct LloydRun {
  std::vector<std::uint32_t> assignments;
  std::vector<double> centroids;
  double inertia = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::vector<double> trace;
};

inline LloydRun lloyd_once(const EmbeddingMatrix& X, std::size_t k, Rng& rng,
                           const KmeansOptions& opts) {
  const std::size_t n = X.rows;
  const std::size_t dim = X.dim;
  LloydRun run;
  run.centroids.resize(k * dim);

  // k-means++ seeding: first center uniform, then D^2 sampling.
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = rng.below(n);
  for (std::size_t j = 0; j < dim; ++j) {
    run.centroids[j] = static_cast<double>(X.row(first)[j]);
  }
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d2 = sq_dist(X.row(i), run.centroids.data() + (c - 1) * dim, dim);
      if (d2 < min_d2[i]) min_d2[i] = d2;
      total += min_d2[i];
    }
    std::size_t pick;
    if (total > 0.0) {
      double r = rng.uniform01() * total;
      double cum = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cum += min_d2[i];
        if (cum >= r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(n);  // all points coincide with chosen centers
    }
    for (std::size_t j = 0; j < dim; ++j) {
      run.centroids[c * dim + j] = static_cast<double>(X.row(pick)[j]);
    }
  }

  run.assignments.assign(n, 0);
  std::vector<std::size_t> counts(k);
  std::vector<double> point_d2(n);

  // Assignment pass, empty-cluster repair included; returns the inertia.
  // Argmin ties go to the lowest centroid index. Empty clusters are
  // re-seeded with the point farthest from its centroid, drawn from
  // clusters that have more than one member.
  auto assign = [&]() -> double {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t best_c = 0;
      for (std::size_t c = 0; c < k; ++c) {
        double d2 = sq_dist(X.row(i), run.centroids.data() + c * dim, dim);
        if (d2 < best) {
          best = d2;
          best_c = static_cast<std::uint32_t>(c);
        }
      }
      run.assignments[i] = best_c;
      point_d2[i] = best;
      inertia += best;
    }
    counts.assign(k, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[run.assignments[i]];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      double far_d2 = -1.0;
      std::size_t far_i = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[run.assignments[i]] <= 1) continue;
        if (point_d2[i] > far_d2) {
          far_d2 = point_d2[i];
          far_i = i;
        }
      }
      if (far_i == n) continue;  // cannot happen while k <= n
      --counts[run.assignments[far_i]];
      inertia -= point_d2[far_i];
      run.assignments[far_i] = static_cast<std::uint32_t>(c);
      counts[c] = 1;
      point_d2[far_i] = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        run.centroids[c * dim + j] = static_cast<double>(X.row(far_i)[j]);
      }
    }
    return inertia;
  };

  std::vector<double> new_centroids(k * dim);
  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    run.iterations = iter + 1;
    run.inertia = assign();
    run.trace.push_back(run.inertia);

    new_centroids.assign(k * dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = run.assignments[i];
      for (std::size_t j = 0; j < dim; ++j) {
        new_centroids[c * dim + j] += static_cast<double>(X.row(i)[j]);
      }
    }
    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double shift2 = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        double v = new_centroids[c * dim + j] / static_cast<double>(counts[c]);
        double d = v - run.centroids[c * dim + j];
        shift2 += d * d;
        run.centroids[c * dim + j] = v;
      }
      max_shift = std::max(max_shift, std::sqrt(shift2));
    }
    if (max_shift <= opts.tol) break;
  }

  // Assignment against the converged centroids.
  run.inertia = assign();
  run.trace.push_back(run.inertia);
  return run;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding and best-of-restarts by
// inertia (ties to the lower restart index). Deterministic per seed.
inline ClusterResult kmeans(const EmbeddingMatrix& X, std::size_t k,
                            std::uint64_t seed,
                            const KmeansOptions& opts = {}) {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (k > X.rows) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds " +
                          std::to_string(X.rows) + " points");
  }
  X.check_finite();

  ClusterResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (std::size_t restart = 0; restart < opts.restarts; ++restart) {
    detail::LloydRun run = detail::lloyd_once(X, k, rng, opts);
    if (run.inertia < best.inertia) {
      best.assignments = std::move(run.assignments);
      best.centroids = std::move(run.centroids);
      best.inertia = run.inertia;
      best.iterations = run.iterations;
      best.inertia_trace = std::move(run.trace);
    }
  }
  best.restarts_used = opts.restarts;
  return best;
}

}  // namespace sembed
