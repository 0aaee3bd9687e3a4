#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "sembed/clusteval/agreement.hpp"
#include "sembed/clusteval/kmeans.hpp"
#include "sembed/clusteval/silhouette.hpp"
#include "sembed/corpus/label.hpp"
#include "sembed/report/eval_report.hpp"

namespace sembed {

struct ClusterEvalResult {
  EvalReport report;          // ari, ami, silhouette on the x100 scale
  ClusterResult clustering;
  std::size_t k = 0;
};

// Clusters with k = number of distinct true labels, scores the generated
// partition against the truth with ARI/AMI, and reports the silhouette of
// the k-means assignment. Values are x100 to match table formatting.
inline ClusterEvalResult cluster_eval(const EmbeddingMatrix& X,
                                      std::span<const Label> true_labels,
                                      std::uint64_t seed,
                                      const KmeansOptions& opts = {}) {
  if (true_labels.empty()) throw ValidationError("labels must be non-empty");
  if (true_labels.size() != X.rows) {
    throw ValidationError("label count does not match embedding rows");
  }
  std::set<Label> distinct(true_labels.begin(), true_labels.end());

  ClusterEvalResult result;
  result.k = distinct.size();
  result.clustering = kmeans(X, result.k, seed, opts);

  std::vector<int> truth(true_labels.size());
  std::vector<int> predicted(true_labels.size());
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    truth[i] = static_cast<int>(true_labels[i]);
    predicted[i] = static_cast<int>(result.clustering.assignments[i]);
  }
  ContingencyTable table = contingency(predicted, truth);
  result.report.set("ari", 100.0 * ari(table));
  result.report.set("ami", 100.0 * ami(table));
  result.report.set("silhouette",
                    100.0 * silhouette(X, result.clustering.assignments));
  return result;
}

}  // namespace sembed
