#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sembed/classify/centroid.hpp"
#include "sembed/classify/knn.hpp"
#include "sembed/classify/logreg.hpp"
#include "sembed/corpus/label.hpp"
#include "sembed/report/eval_report.hpp"

namespace sembed {

// Row = true label, column = predicted label, over a fixed class list.
struct ConfusionMatrix {
  std::vector<Label> classes;
  std::vector<std::uint64_t> counts;  // classes x classes, row-major

  std::uint64_t at(std::size_t true_c, std::size_t pred_c) const {
    return counts[true_c * classes.size() + pred_c];
  }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (std::uint64_t c : counts) t += c;
    return t;
  }
};

inline ConfusionMatrix confusion_matrix(std::span<const Label> y_true,
                                        std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw ValidationError("confusion: length mismatch");
  }
  std::set<Label> distinct(y_true.begin(), y_true.end());
  distinct.insert(y_pred.begin(), y_pred.end());
  ConfusionMatrix cm;
  cm.classes.assign(distinct.begin(), distinct.end());
  cm.counts.assign(cm.classes.size() * cm.classes.size(), 0);
  std::map<Label, std::size_t> index;
  for (std::size_t c = 0; c < cm.classes.size(); ++c) index[cm.classes[c]] = c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ++cm.counts[index[y_true[i]] * cm.classes.size() + index[y_pred[i]]];
  }
  return cm;
}

// Micro-averaged F1 from globally pooled TP/FP/FN. For single-label
// multiclass this equals accuracy.
inline double f1_micro(std::span<const Label> y_true,
                       std::span<const Label> y_pred) {
  if (y_true.empty()) throw ValidationError("f1_micro: empty inputs");
  ConfusionMatrix cm = confusion_matrix(y_true, y_pred);
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t c = 0; c < cm.classes.size(); ++c) {
    tp += cm.at(c, c);
    for (std::size_t o = 0; o < cm.classes.size(); ++o) {
      if (o == c) continue;
      fn += cm.at(c, o);
      fp += cm.at(o, c);
    }
  }
  return 2.0 * static_cast<double>(tp) /
         (2.0 * static_cast<double>(tp) + static_cast<double>(fp) +
          static_cast<double>(fn));
}

enum class ClassifierKind { knn, centroid, logreg };

inline ClassifierKind parse_classifier(const std::string& name) {
  if (name == "knn") return ClassifierKind::knn;
  if (name == "centroid") return ClassifierKind::centroid;
  if (name == "logreg") return ClassifierKind::logreg;
  throw ValidationError("unknown classifier '" + name +
                        "' (expected knn, centroid, or logreg)");
}

struct ClassificationEvalResult {
  EvalReport report;  // f1_micro and per-label precision/recall/f1, x100
  ConfusionMatrix confusion;
  std::vector<Label> predictions;
  std::size_t unseen_test_labels = 0;  // warned: counted as always wrong
  std::size_t knn_k = 0;               // materialized for run metadata
};

// Fits the chosen classifier on train embeddings and scores the test set.
// Test labels absent from training can never be predicted and therefore
// count as errors; they are surfaced in unseen_test_labels.
inline ClassificationEvalResult classification_eval(
    const EmbeddingMatrix& train_x, std::span<const Label> train_y,
    const EmbeddingMatrix& test_x, std::span<const Label> test_y,
    ClassifierKind classifier, std::uint64_t seed) {
  if (test_x.rows == 0) throw ValidationError("empty test set");
  if (train_x.dim != test_x.dim) {
    throw ValidationError("train/test embedding dimensions differ");
  }
  if (train_y.size() != train_x.rows || test_y.size() != test_x.rows) {
    throw ValidationError("label counts do not match embedding rows");
  }

  ClassificationEvalResult result;
  std::set<Label> train_set(train_y.begin(), train_y.end());
  for (Label l : test_y) {
    if (!train_set.count(l)) ++result.unseen_test_labels;
  }

  result.predictions.reserve(test_x.rows);
  switch (classifier) {
    case ClassifierKind::knn: {
      KnnModel m = knn_fit(train_x, train_y);
      result.knn_k = m.k;
      for (std::size_t i = 0; i < test_x.rows; ++i) {
        result.predictions.push_back(knn_predict(m, test_x.row(i)));
      }
      break;
    }
    case ClassifierKind::centroid: {
      CentroidModel m = centroid_fit(train_x, train_y);
      for (std::size_t i = 0; i < test_x.rows; ++i) {
        result.predictions.push_back(centroid_predict(m, test_x.row(i)));
      }
      break;
    }
    case ClassifierKind::logreg: {
      LogregConfig cfg;
      cfg.seed = seed;
      LogregModel m = logreg_fit(train_x, train_y, cfg);
      for (std::size_t i = 0; i < test_x.rows; ++i) {
        result.predictions.push_back(logreg_predict(m, test_x.row(i)));
      }
      break;
    }
  }

  result.confusion = confusion_matrix(test_y, result.predictions);
  result.report.set("f1_micro", 100.0 * f1_micro(test_y, result.predictions));

  const auto& cm = result.confusion;
  for (std::size_t c = 0; c < cm.classes.size(); ++c) {
    std::uint64_t tp = cm.at(c, c), row = 0, col = 0;
    for (std::size_t o = 0; o < cm.classes.size(); ++o) {
      row += cm.at(c, o);
      col += cm.at(o, c);
    }
    double precision = col ? static_cast<double>(tp) / static_cast<double>(col) : 0.0;
    double recall = row ? static_cast<double>(tp) / static_cast<double>(row) : 0.0;
    double f1 = (precision + recall) > 0.0
                    ? 2.0 * precision * recall / (precision + recall)
                    : 0.0;
    std::string name(label_name(cm.classes[c]));
    result.report.set("precision_" + name, 100.0 * precision);
    result.report.set("recall_" + name, 100.0 * recall);
    result.report.set("f1_" + name, 100.0 * f1);
  }
  return result;
}

// Labeled tab-separated grid, truth in rows and predictions in columns.
inline std::string render_confusion_tsv(const ConfusionMatrix& cm) {
  std::string out = "true\\pred";
  for (Label l : cm.classes) out += "\t" + std::string(label_name(l));
  out += "\n";
  for (std::size_t r = 0; r < cm.classes.size(); ++r) {
    out += std::string(label_name(cm.classes[r]));
    for (std::size_t c = 0; c < cm.classes.size(); ++c) {
      out += "\t" + std::to_string(cm.at(r, c));
    }
    out += "\n";
  }
  return out;
}

}  // namespace sembed
