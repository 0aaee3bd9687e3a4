#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sembed/error.hpp"

namespace sembed {

// Cross-tabulation of two partitions of the same sample sequence.
struct ContingencyTable {
  std::size_t r = 0;  // clusters in u
  std::size_t c = 0;  // clusters in v
  std::vector<std::uint64_t> cells;  // r x c counts, row-major
  std::vector<std::uint64_t> row_sums;
  std::vector<std::uint64_t> col_sums;
  std::uint64_t n = 0;

  std::uint64_t cell(std::size_t i, std::size_t j) const {
    return cells[i * c + j];
  }
};

// Builds the table; distinct partition values map to rows/columns in
// ascending value order.
inline ContingencyTable contingency(std::span<const int> u,
                                    std::span<const int> v) {
  if (u.size() != v.size()) {
    throw ValidationError("partition length mismatch: " +
                          std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()));
  }
  std::map<int, std::size_t> u_ids, v_ids;
  for (int x : u) u_ids.emplace(x, 0);
  for (int x : v) v_ids.emplace(x, 0);
  std::size_t next = 0;
  for (auto& [val, id] : u_ids) id = next++;
  next = 0;
  for (auto& [val, id] : v_ids) id = next++;

  ContingencyTable t;
  t.r = u_ids.size();
  t.c = v_ids.size();
  t.n = u.size();
  t.cells.assign(t.r * t.c, 0);
  t.row_sums.assign(t.r, 0);
  t.col_sums.assign(t.c, 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::size_t ri = u_ids[u[i]];
    std::size_t ci = v_ids[v[i]];
    ++t.cells[ri * t.c + ci];
    ++t.row_sums[ri];
    ++t.col_sums[ci];
  }
  return t;
}

namespace detail {

inline double comb2(std::uint64_t n) {
  return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
}

}  // namespace detail

// Adjusted Rand Index via pair counts; both-trivial partitions (zero
// adjusted denominator) score 1 by convention.
inline double ari(const ContingencyTable& t) {
  if (t.n < 2) throw ValidationError("ARI needs at least 2 samples");
  double sum_cells = 0.0;
  for (std::uint64_t cell : t.cells) sum_cells += detail::comb2(cell);
  double sum_rows = 0.0, sum_cols = 0.0;
  for (std::uint64_t a : t.row_sums) sum_rows += detail::comb2(a);
  for (std::uint64_t b : t.col_sums) sum_cols += detail::comb2(b);
  double expected = sum_rows * sum_cols / detail::comb2(t.n);
  double max_index = 0.5 * (sum_rows + sum_cols);
  double denom = max_index - expected;
  if (denom == 0.0) return 1.0;
  return (sum_cells - expected) / denom;
}

namespace detail {

class LogFactorial {
 public:
  explicit LogFactorial(std::size_t n) : table_(n + 1, 0.0) {
    for (std::size_t i = 2; i <= n; ++i) {
      table_[i] = table_[i - 1] + std::log(static_cast<double>(i));
    }
  }
  double operator()(std::uint64_t k) const { return table_[k]; }

 private:
  std::vector<double> table_;
};

// Exact expected mutual information under the permutation model, natural
// logarithms, hypergeometric cell distribution.
inline double expected_mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.n);
  LogFactorial lf(t.n);
  double emi = 0.0;
  for (std::size_t i = 0; i < t.r; ++i) {
    const std::uint64_t a = t.row_sums[i];
    for (std::size_t j = 0; j < t.c; ++j) {
      const std::uint64_t b = t.col_sums[j];
      std::uint64_t lo = (a + b > t.n) ? a + b - t.n : 0;
      if (lo < 1) lo = 1;  // the k = 0 term contributes nothing
      for (std::uint64_t k = lo; k <= std::min(a, b); ++k) {
        double log_p = lf(a) + lf(b) + lf(t.n - a) + lf(t.n - b) - lf(t.n) -
                       lf(k) - lf(a - k) - lf(b - k) - lf(t.n - a - b + k);
        double term = (static_cast<double>(k) / n) *
                      std::log(n * static_cast<double>(k) /
                               (static_cast<double>(a) * static_cast<double>(b)));
        emi += term * std::exp(log_p);
      }
    }
  }
  return emi;
}

inline double entropy(std::span<const std::uint64_t> sums, std::uint64_t n) {
  double h = 0.0;
  for (std::uint64_t s : sums) {
    if (s == 0) continue;
    double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

inline double mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.n);
  double mi = 0.0;
  for (std::size_t i = 0; i < t.r; ++i) {
    for (std::size_t j = 0; j < t.c; ++j) {
      std::uint64_t cell = t.cell(i, j);
      if (cell == 0) continue;
      double pij = static_cast<double>(cell) / n;
      mi += pij * std::log(n * static_cast<double>(cell) /
                           (static_cast<double>(t.row_sums[i]) *
                            static_cast<double>(t.col_sums[j])));
    }
  }
  return mi;
}

}  // namespace detail

// Adjusted Mutual Information: (MI - E[MI]) / (mean entropy - E[MI]) with
// the exact hypergeometric E[MI]. Both-trivial partitions score 1.
inline double ami(const ContingencyTable& t) {
  if (t.n < 1) throw ValidationError("AMI needs at least 1 sample");
  double mi = detail::mutual_information(t);
  double emi = detail::expected_mutual_information(t);
  double normalizer = 0.5 * (detail::entropy(t.row_sums, t.n) +
                             detail::entropy(t.col_sums, t.n));
  double denom = normalizer - emi;
  if (denom == 0.0) return 1.0;
  return (mi - emi) / denom;
}

}  // namespace sembed
