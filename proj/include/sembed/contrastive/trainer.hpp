#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "sembed/contrastive/gradient.hpp"
#include "sembed/contrastive/schedule.hpp"
#include "sembed/corpus/record.hpp"
#include "sembed/encoder/model.hpp"
#include "sembed/error.hpp"
#include "sembed/util/rng.hpp"

namespace sembed {

enum class LossKind { batch_all_triplet, pairwise_contrastive };

struct TrainConfig {
  double margin = 5.0;
  std::uint32_t epochs = 20;
  std::uint32_t batch_size = 32;
  double peak_lr = 1e-3;
  double warmup_fraction = 0.10;
  Distance distance = Distance::euclidean;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::batch_all_triplet;
  TripletAveraging averaging = TripletAveraging::all_valid;

  void validate() const {
    if (margin < 0.0) throw ValidationError("margin must be non-negative");
    if (batch_size == 0) throw ValidationError("batch size must be positive");
    if (peak_lr <= 0.0) throw ValidationError("learning rate must be positive");
    if (warmup_fraction < 0.0 || warmup_fraction > 1.0) {
      throw ValidationError("warmup fraction must lie in [0, 1]");
    }
    if (loss == LossKind::batch_all_triplet &&
        distance != Distance::euclidean) {
      throw ValidationError(
          "training gradients are defined for the euclidean distance only");
    }
  }
};

// One (anchor, positive, negative) of sentence ids, one per eligible
// anchor of the source corpus.
struct ValidationTriplets {
  struct IdTriplet {
    std::string anchor;
    std::string positive;
    std::string negative;
  };
  std::vector<IdTriplet> triplets;
  std::size_t skipped_anchors = 0;
};

// Samples one triplet per anchor with a seeded generator. Anchors whose
// label has fewer than two samples, or with no different-label sample to
// draw a negative from, are skipped and counted.
inline ValidationTriplets build_validation_triplets(const Corpus& corpus,
                                                    std::uint64_t seed) {
  std::map<Label, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_label[corpus[i].label].push_back(i);
  }
  std::map<Label, std::vector<std::size_t>> complement;
  for (const auto& [label, members] : by_label) {
    std::vector<std::size_t>& others = complement[label];
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus[i].label != label) others.push_back(i);
    }
  }

  ValidationTriplets out;
  Rng rng(seed);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::vector<std::size_t>& same = by_label[corpus[i].label];
    const std::vector<std::size_t>& diff = complement[corpus[i].label];
    if (same.size() < 2 || diff.empty()) {
      ++out.skipped_anchors;
      continue;
    }
    std::size_t pos_pick = rng.below(same.size() - 1);
    std::size_t pos = same[pos_pick];
    if (pos == i) pos = same[same.size() - 1];  // remap self to the last slot
    std::size_t neg = diff[rng.below(diff.size())];
    out.triplets.push_back(
        {corpus[i].id, corpus[pos].id, corpus[neg].id});
  }
  return out;
}

struct StepRecord {
  std::size_t step = 0;
  std::size_t epoch = 0;
  double lr = 0.0;
  double loss = 0.0;
  std::size_t valid_triplet_count = 0;
  std::size_t skipped_batches = 0;  // cumulative
};

struct EpochRecord {
  std::size_t epoch = 0;
  double validation_accuracy = 0.0;  // fraction with d(a,p) < d(a,n)
  std::size_t validation_triplets = 0;
};

struct TrainHistory {
  std::vector<StepRecord> steps;
  std::vector<EpochRecord> epochs;
};

struct TrainCallbacks {
  std::function<void(const StepRecord&)> on_step;
  std::function<void(const EpochRecord&)> on_epoch;
};

namespace detail {

inline double validation_accuracy(const EncoderModel& model,
                                  const std::vector<SparseVec>& features,
                                  const std::map<std::string, std::size_t>& index_by_id,
                                  const ValidationTriplets& triplets,
                                  Distance kind) {
  if (triplets.triplets.empty()) return 0.0;
  std::vector<std::vector<double>> e(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    e[i] = embed_features(model, features[i]);
  }
  std::size_t hits = 0;
  for (const auto& t : triplets.triplets) {
    std::size_t a = index_by_id.at(t.anchor);
    std::size_t p = index_by_id.at(t.positive);
    std::size_t n = index_by_id.at(t.negative);
    if (distance(e[a], e[p], kind) < distance(e[a], e[n], kind)) ++hits;
  }
  return static_cast<double>(hits) /
         static_cast<double>(triplets.triplets.size());
}

}  // namespace detail

// Plain SGD over the projection with the warm-up/decay schedule. Batches
// come from a fresh seeded shuffle each epoch; batches without a valid
// triplet are counted and skipped. Deterministic per seed.
inline TrainHistory train(EncoderModel& model, const Corpus& train_corpus,
                          const Corpus& validation_corpus,
                          const ValidationTriplets& validation_triplets,
                          const TrainConfig& config,
                          const TrainCallbacks& callbacks = {}) {
  config.validate();
  model.validate();
  std::set<Label> distinct;
  for (const auto& s : train_corpus) distinct.insert(s.label);
  if (distinct.size() < 2) {
    throw ValidationError("training corpus must contain at least 2 labels");
  }

  const std::size_t n = train_corpus.size();
  std::vector<SparseVec> features(n);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    features[i] = featurize(train_corpus[i].text, model.featurizer);
    labels[i] = train_corpus[i].label;
  }

  std::vector<SparseVec> val_features(validation_corpus.size());
  std::map<std::string, std::size_t> val_index;
  for (std::size_t i = 0; i < validation_corpus.size(); ++i) {
    val_features[i] = featurize(validation_corpus[i].text, model.featurizer);
    val_index[validation_corpus[i].id] = i;
  }
  for (const auto& t : validation_triplets.triplets) {
    if (!val_index.count(t.anchor) || !val_index.count(t.positive) ||
        !val_index.count(t.negative)) {
      throw ValidationError("validation triplet references an id missing "
                            "from the validation corpus");
    }
  }

  TrainHistory history;
  const std::size_t steps_per_epoch = (n + config.batch_size - 1) / config.batch_size;
  const std::size_t total_steps =
      static_cast<std::size_t>(config.epochs) * steps_per_epoch;

  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::size_t step = 0;
  std::size_t skipped = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t b = 0; b < steps_per_epoch; ++b, ++step) {
      std::size_t begin = b * config.batch_size;
      std::size_t end = std::min(begin + config.batch_size, n);
      std::vector<SparseVec> batch_features;
      std::vector<Label> batch_labels;
      batch_features.reserve(end - begin);
      batch_labels.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        batch_features.push_back(features[order[i]]);
        batch_labels.push_back(labels[order[i]]);
      }

      BatchGradient grad =
          config.loss == LossKind::batch_all_triplet
              ? batch_all_triplet_gradient(model, batch_features, batch_labels,
                                           config.margin, config.averaging)
              : pairwise_contrastive_gradient(model, batch_features,
                                              batch_labels, config.margin);
      if (!std::isfinite(grad.loss)) {
        throw Error("non-finite training loss at step " + std::to_string(step));
      }
      double lr = lr_schedule(step, total_steps, config.peak_lr,
                              config.warmup_fraction);
      if (grad.term_count == 0) {
        ++skipped;
      } else {
        for (const auto& [r, row] : grad.rows) {
          std::size_t base = static_cast<std::size_t>(r) * model.out_dim;
          for (std::uint32_t j = 0; j < model.out_dim; ++j) {
            model.projection[base + j] = static_cast<float>(
                static_cast<double>(model.projection[base + j]) - lr * row[j]);
          }
        }
      }

      StepRecord rec{step, epoch, lr, grad.loss, grad.term_count, skipped};
      if (callbacks.on_step) callbacks.on_step(rec);
      history.steps.push_back(rec);
    }

    EpochRecord erec;
    erec.epoch = epoch;
    erec.validation_triplets = validation_triplets.triplets.size();
    erec.validation_accuracy = detail::validation_accuracy(
        model, val_features, val_index, validation_triplets, config.distance);
    if (callbacks.on_epoch) callbacks.on_epoch(erec);
    history.epochs.push_back(erec);
  }
  return history;
}

}  // namespace sembed
