#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "sembed/corpus/label.hpp"
#include "sembed/encoder/embedding.hpp"
#include "sembed/error.hpp"

namespace sembed {

// Nearest-centroid classifier: one mean vector per label.
struct CentroidModel {
  std::vector<Label> classes;             // lexicographic by label name
  std::vector<std::vector<double>> means;  // aligned with classes
};

inline CentroidModel centroid_fit(const EmbeddingMatrix& X,
                                  std::span<const Label> y) {
  if (X.rows == 0) throw ValidationError("centroid: empty training set");
  if (y.size() != X.rows) {
    throw ValidationError("centroid: label count does not match row count");
  }
  std::map<std::string, std::pair<Label, std::vector<double>>> sums;
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < X.rows; ++i) {
    std::string key(label_name(y[i]));
    auto& [label, sum] = sums[key];
    label = y[i];
    if (sum.empty()) sum.assign(X.dim, 0.0);
    std::span<const float> row = X.row(i);
    for (std::size_t j = 0; j < X.dim; ++j) sum[j] += row[j];
    ++counts[key];
  }
  CentroidModel m;
  for (auto& [key, entry] : sums) {
    auto& [label, sum] = entry;
    for (double& v : sum) v /= static_cast<double>(counts[key]);
    m.classes.push_back(label);
    m.means.push_back(std::move(sum));
  }
  return m;
}

// Ties in distance resolve to the lexicographically smaller label, which
// is the class order of the model.
inline Label centroid_predict(const CentroidModel& model,
                              std::span<const float> query) {
  if (model.classes.empty()) throw ValidationError("centroid: empty model");
  if (query.size() != model.means.front().size()) {
    throw ValidationError("centroid: query dimension mismatch");
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_c = 0;
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) {
      double d = static_cast<double>(query[j]) - model.means[c][j];
      d2 += d * d;
    }
    if (d2 < best) {
      best = d2;
      best_c = c;
    }
  }
  return model.classes[best_c];
}

}  // namespace sembed
