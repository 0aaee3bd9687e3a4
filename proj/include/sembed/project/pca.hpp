#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sembed/encoder/embedding.hpp"
#include "sembed/error.hpp"

namespace sembed {

namespace detail {

// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Eigenvalues
// land on the diagonal, eigenvectors in the columns of V.
inline void jacobi_eigen(std::vector<double>& A, std::vector<double>& V,
                         std::size_t d) {
  V.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) V[i * d + i] = 1.0;
  double norm = 0.0;
  for (double v : A) norm += v * v;
  const double tol = 1e-24 * std::max(norm, 1.0);

  for (std::size_t sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) off += A[p * d + q] * A[p * d + q];
    }
    if (off <= tol) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        double apq = A[p * d + q];
        if (apq == 0.0) continue;
        double app = A[p * d + p];
        double aqq = A[q * d + q];
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          double akp = A[k * d + p];
          double akq = A[k * d + q];
          A[k * d + p] = c * akp - s * akq;
          A[k * d + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          double apk = A[p * d + k];
          double aqk = A[q * d + k];
          A[p * d + k] = c * apk - s * aqk;
          A[q * d + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          double vkp = V[k * d + p];
          double vkq = V[k * d + q];
          V[k * d + p] = c * vkp - s * vkq;
          V[k * d + q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

}  // namespace detail

struct PcaProjection {
  std::vector<double> x;  // first principal coordinate per row
  std::vector<double> y;  // second principal coordinate per row
  double eigval_1 = 0.0;
  double eigval_2 = 0.0;
};

// Projects rows onto the top-2 principal components of the mean-centered
// data. Component sign convention: the largest-magnitude loading is
// positive. Zero-variance data has no principal directions.
inline PcaProjection pca_project_2d(const EmbeddingMatrix& X) {
  if (X.rows < 2) throw ValidationError("PCA needs at least 2 rows");
  if (X.dim < 2) throw ValidationError("PCA needs at least 2 dimensions");
  X.check_finite();
  const std::size_t n = X.rows;
  const std::size_t d = X.dim;

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += X.row(i)[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<double> centered(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      centered[i * d + j] = static_cast<double>(X.row(i)[j]) - mean[j];
    }
  }

  std::vector<double> cov(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      double va = centered[i * d + a];
      if (va == 0.0) continue;
      for (std::size_t b = a; b < d; ++b) {
        cov[a * d + b] += va * centered[i * d + b];
      }
    }
  }
  double total_var = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      cov[a * d + b] /= static_cast<double>(n - 1);
      cov[b * d + a] = cov[a * d + b];
    }
    total_var += cov[a * d + a];
  }
  if (total_var == 0.0) {
    throw ValidationError("PCA is undefined for zero-variance data");
  }

  std::vector<double> V;
  detail::jacobi_eigen(cov, V, d);

  std::vector<std::size_t> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cov[a * d + a] > cov[b * d + b];
  });

  auto component = [&](std::size_t col) {
    std::vector<double> v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = V[j * d + col];
    std::size_t peak = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (std::fabs(v[j]) > std::fabs(v[peak])) peak = j;
    }
    if (v[peak] < 0.0) {
      for (double& e : v) e = -e;
    }
    return v;
  };
  std::vector<double> pc1 = component(order[0]);
  std::vector<double> pc2 = component(order[1]);

  PcaProjection out;
  out.eigval_1 = cov[order[0] * d + order[0]];
  out.eigval_2 = cov[order[1] * d + order[1]];
  out.x.resize(n);
  out.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double px = 0.0, py = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      px += centered[i * d + j] * pc1[j];
      py += centered[i * d + j] * pc2[j];
    }
    out.x[i] = px;
    out.y[i] = py;
  }
  return out;
}

}  // namespace sembed
