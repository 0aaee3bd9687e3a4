#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "sembed/contrastive/distance.hpp"
#include "sembed/corpus/label.hpp"
#include "sembed/error.hpp"

namespace sembed {

// Anchor/positive/negative as indices into a batch.
struct Triplet {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;

  bool operator==(const Triplet&) const = default;
};

// Hinge on the distance gap: max(d(a,p) - d(a,n) + m, 0).
inline double triplet_loss(std::span<const double> anchor,
                           std::span<const double> positive,
                           std::span<const double> negative, double margin,
                           Distance kind = Distance::euclidean) {
  if (margin < 0.0) throw ValidationError("margin must be non-negative");
  double dap = distance(anchor, positive, kind);
  double dan = distance(anchor, negative, kind);
  return std::max(dap - dan + margin, 0.0);
}

// Every (a, p, n) with a != p, label(a) == label(p), label(a) != label(n),
// in lexicographic (a, p, n) order. Batches without a valid triplet yield
// the empty sequence.
inline std::vector<Triplet> mine_batch_all(std::span<const Label> labels) {
  std::vector<Triplet> out;
  const std::size_t n = labels.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t p = 0; p < n; ++p) {
      if (p == a || labels[p] != labels[a]) continue;
      for (std::size_t neg = 0; neg < n; ++neg) {
        if (labels[neg] == labels[a]) continue;
        out.push_back({a, p, neg});
      }
    }
  }
  return out;
}

enum class TripletAveraging {
  all_valid,      // mean over every valid triplet, zero-loss ones included
  positive_only,  // mean over triplets with nonzero hinge
};

struct BatchLoss {
  double loss = 0.0;
  std::size_t triplet_count = 0;  // triplets in the mean's denominator
};

// Mean triplet loss over all valid triplets of a batch. A batch with no
// valid triplet yields loss 0 and count 0.
inline BatchLoss batch_all_loss(
    std::span<const std::vector<double>> batch_vecs,
    std::span<const Label> labels, double margin,
    Distance kind = Distance::euclidean,
    TripletAveraging averaging = TripletAveraging::all_valid) {
  if (batch_vecs.size() != labels.size()) {
    throw ValidationError("batch has " + std::to_string(batch_vecs.size()) +
                          " vectors but " + std::to_string(labels.size()) +
                          " labels");
  }
  std::vector<Triplet> triplets = mine_batch_all(labels);
  BatchLoss result;
  if (triplets.empty()) return result;

  double sum = 0.0;
  std::size_t positive_count = 0;
  for (const Triplet& t : triplets) {
    double l = triplet_loss(batch_vecs[t.anchor], batch_vecs[t.positive],
                            batch_vecs[t.negative], margin, kind);
    if (l > 0.0) ++positive_count;
    sum += l;
  }
  if (averaging == TripletAveraging::all_valid) {
    result.triplet_count = triplets.size();
    result.loss = sum / static_cast<double>(triplets.size());
  } else {
    result.triplet_count = positive_count;
    result.loss =
        positive_count ? sum / static_cast<double>(positive_count) : 0.0;
  }
  return result;
}

// Sample format of the pairwise contrastive loss: two batch indices and
// a similarity bit (1 similar, 0 dissimilar).
struct PairSample {
  std::size_t a = 0;
  std::size_t b = 0;
  int similar = 0;

  bool operator==(const PairSample&) const = default;
};

// Every unordered batch pair (a < b), similar when the labels match.
inline std::vector<PairSample> mine_all_pairs(std::span<const Label> labels) {
  std::vector<PairSample> out;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      out.push_back({a, b, labels[a] == labels[b] ? 1 : 0});
    }
  }
  return out;
}

// Pairwise contrastive loss: similar pairs pull with d^2, dissimilar pairs
// push with max(m - d, 0)^2.
inline double pairwise_contrastive_loss(std::span<const double> a,
                                        std::span<const double> b,
                                        int similar, double margin,
                                        Distance kind = Distance::euclidean) {
  if (similar != 0 && similar != 1) {
    throw ValidationError("pair label must be 0 or 1");
  }
  double d = distance(a, b, kind);
  if (similar == 1) return d * d;
  double gap = std::max(margin - d, 0.0);
  return gap * gap;
}

}  // namespace sembed
