#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sembed/classify/metrics.hpp"
#include "sembed/clusteval/eval.hpp"
#include "sembed/util/rng.hpp"

using namespace sembed;

namespace {

EmbeddingMatrix matrix(std::initializer_list<std::initializer_list<float>> rows) {
  EmbeddingMatrix m;
  m.rows = static_cast<std::uint32_t>(rows.size());
  m.dim = static_cast<std::uint32_t>(rows.begin()->size());
  for (const auto& r : rows) {
    for (float v : r) m.values.push_back(v);
  }
  return m;
}

// Two Gaussian-ish blobs around the given centers.
EmbeddingMatrix blobs(Rng& rng, std::size_t per_blob,
                      const std::vector<std::vector<double>>& centers,
                      double spread, std::vector<Label>* labels) {
  EmbeddingMatrix m;
  m.dim = static_cast<std::uint32_t>(centers.front().size());
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      for (double mu : centers[c]) {
        m.values.push_back(
            static_cast<float>(mu + rng.uniform(-spread, spread)));
      }
      labels->push_back(static_cast<Label>(c));
      ++m.rows;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("sqrt neighbor rule") {
  CHECK(sqrt_neighbor_rule(100) == 10);
  CHECK(sqrt_neighbor_rule(2) == 1);
  CHECK(sqrt_neighbor_rule(1) == 1);
  CHECK(sqrt_neighbor_rule(20000) == 141);
  CHECK(sqrt_neighbor_rule(99) == 9);
}

TEST_CASE("knn fixtures") {
  EmbeddingMatrix train = matrix({{0.0f, 0.0f}, {10.0f, 10.0f}});
  std::vector<Label> y = {Label::background, Label::methods};
  KnnModel m = knn_fit(train, y);
  CHECK(m.k == 1);
  std::vector<float> q = {1.0f, 1.0f};
  CHECK(knn_predict(m, q) == Label::background);

  // Query exactly on a training point: zero-distance dominance.
  std::vector<float> exact = {10.0f, 10.0f};
  KnnModel m2 = knn_fit(train, y, KnnWeighting::distance, 2);
  CHECK(knn_predict(m2, exact) == Label::methods);
}

TEST_CASE("knn distance weighting hand fixture") {
  // Weights: A -> 1/1; B -> 1/1 + 1/2 = 1.5, so B wins.
  EmbeddingMatrix train = matrix({{0.0f, 0.0f}, {0.0f, 2.0f}, {0.0f, 3.0f}});
  std::vector<Label> y = {Label::background, Label::methods, Label::methods};
  KnnModel m = knn_fit(train, y, KnnWeighting::distance, 3);
  std::vector<float> q = {0.0f, 1.0f};
  CHECK(knn_predict(m, q) == Label::methods);
}

TEST_CASE("knn with k = N and uniform weighting returns the majority") {
  Rng rng(41);
  EmbeddingMatrix train;
  train.rows = 9;
  train.dim = 2;
  for (int i = 0; i < 18; ++i) {
    train.values.push_back(static_cast<float>(rng.uniform(-5, 5)));
  }
  std::vector<Label> y = {Label::methods, Label::methods, Label::methods,
                          Label::methods, Label::methods, Label::results,
                          Label::results, Label::results, Label::results};
  KnnModel m = knn_fit(train, y, KnnWeighting::uniform, 9);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<float> q = {static_cast<float>(rng.uniform(-20, 20)),
                            static_cast<float>(rng.uniform(-20, 20))};
    CHECK(knn_predict(m, q) == Label::methods);
  }
}

TEST_CASE("knn invariances") {
  Rng rng(43);
  EmbeddingMatrix train;
  train.rows = 12;
  train.dim = 3;
  for (int i = 0; i < 36; ++i) {
    train.values.push_back(static_cast<float>(rng.uniform(-2, 2)));
  }
  std::vector<Label> y;
  for (int i = 0; i < 12; ++i) y.push_back(static_cast<Label>(i % 3));
  KnnModel base = knn_fit(train, y);

  for (int trial = 0; trial < 10; ++trial) {
    std::vector<float> q = {static_cast<float>(rng.uniform(-2, 2)),
                            static_cast<float>(rng.uniform(-2, 2)),
                            static_cast<float>(rng.uniform(-2, 2))};
    Label expected = knn_predict(base, q);

    // Global translation of train and query.
    EmbeddingMatrix shifted = train;
    std::vector<float> qs = q;
    for (std::size_t i = 0; i < shifted.values.size(); ++i) {
      shifted.values[i] += 4.0f;
    }
    for (auto& v : qs) v += 4.0f;
    CHECK(knn_predict(knn_fit(shifted, y), qs) == expected);

    // Global positive scaling.
    EmbeddingMatrix scaled = train;
    std::vector<float> qc = q;
    for (std::size_t i = 0; i < scaled.values.size(); ++i) {
      scaled.values[i] *= 2.0f;
    }
    for (auto& v : qc) v *= 2.0f;
    CHECK(knn_predict(knn_fit(scaled, y), qc) == expected);
  }
}

TEST_CASE("knn validation") {
  EmbeddingMatrix empty;
  std::vector<Label> none;
  CHECK_THROWS_AS(knn_fit(empty, none), ValidationError);
}

TEST_CASE("centroid classifier") {
  // Single point per label behaves like 1-NN.
  EmbeddingMatrix train = matrix({{0.0f, 0.0f}, {10.0f, 0.0f}});
  std::vector<Label> y = {Label::background, Label::methods};
  CentroidModel m = centroid_fit(train, y);
  std::vector<float> q1 = {2.0f, 0.0f};
  CHECK(centroid_predict(m, q1) == Label::background);

  // Symmetric blobs: the boundary is the perpendicular bisector.
  EmbeddingMatrix two = matrix({{0.0f, 1.0f}, {0.0f, -1.0f},
                                {8.0f, 1.0f}, {8.0f, -1.0f}});
  std::vector<Label> y2 = {Label::background, Label::background,
                           Label::methods, Label::methods};
  CentroidModel m2 = centroid_fit(two, y2);
  std::vector<float> left = {3.9f, 0.5f};
  std::vector<float> right = {4.1f, -0.5f};
  CHECK(centroid_predict(m2, left) == Label::background);
  CHECK(centroid_predict(m2, right) == Label::methods);

  // Equidistant query: lexicographically smaller label name wins.
  std::vector<float> middle = {4.0f, 0.0f};
  CHECK(centroid_predict(m2, middle) == Label::background);
}

TEST_CASE("centroid tie order follows label names") {
  // methods < results lexicographically.
  EmbeddingMatrix train = matrix({{0.0f}, {2.0f}});
  std::vector<Label> y = {Label::results, Label::methods};
  CentroidModel m = centroid_fit(train, y);
  std::vector<float> middle = {1.0f};
  CHECK(centroid_predict(m, middle) == Label::methods);
}

TEST_CASE("logreg separates linearly separable data") {
  Rng rng(47);
  std::vector<Label> y;
  EmbeddingMatrix X = blobs(rng, 30, {{0.0, 0.0}, {4.0, 4.0}}, 0.8, &y);
  LogregModel m = logreg_fit(X, y);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < X.rows; ++i) {
    if (logreg_predict(m, X.row(i)) == y[i]) ++correct;
  }
  CHECK(correct == X.rows);
}

TEST_CASE("logreg probabilities sum to one") {
  Rng rng(53);
  std::vector<Label> y;
  EmbeddingMatrix X =
      blobs(rng, 15, {{0.0, 0.0}, {3.0, 0.0}, {0.0, 3.0}}, 1.0, &y);
  LogregModel m = logreg_fit(X, y);
  for (std::size_t i = 0; i < X.rows; ++i) {
    auto p = m.probabilities(X.row(i));
    double sum = 0.0;
    for (double v : p) sum += v;
    CHECK(sum == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("logreg on identical balanced inputs stays uniform") {
  EmbeddingMatrix X = matrix({{1.0f, 2.0f}, {1.0f, 2.0f},
                              {1.0f, 2.0f}, {1.0f, 2.0f}});
  std::vector<Label> y = {Label::methods, Label::results, Label::methods,
                          Label::results};
  LogregModel m = logreg_fit(X, y);
  for (double w : m.weights) CHECK(w == Catch::Approx(0.0).margin(1e-12));
  auto p = m.probabilities(X.row(0));
  CHECK(p[0] == Catch::Approx(0.5).margin(1e-9));
  CHECK(p[1] == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("logreg gradient matches central finite differences") {
  Rng rng(59);
  std::vector<Label> y;
  EmbeddingMatrix X = blobs(rng, 6, {{0.0, 1.0}, {2.0, -1.0}}, 1.0, &y);
  std::vector<std::size_t> ids(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    ids[i] = y[i] == Label::background ? 0 : 1;
  }
  const std::size_t classes = 2;
  const double l2 = 1e-3;
  std::vector<double> w(classes * X.dim);
  std::vector<double> b(classes);
  for (auto& v : w) v = rng.uniform(-0.5, 0.5);
  for (auto& v : b) v = rng.uniform(-0.5, 0.5);

  auto g = detail::logreg_loss_gradient(X, ids, classes, w, b, l2);
  const double h = 1e-5;
  for (std::size_t k = 0; k < w.size(); ++k) {
    std::vector<double> wp = w, wm = w;
    wp[k] += h;
    wm[k] -= h;
    double fd = (detail::logreg_loss_gradient(X, ids, classes, wp, b, l2).loss -
                 detail::logreg_loss_gradient(X, ids, classes, wm, b, l2).loss) /
                (2 * h);
    double rel = std::fabs(fd - g.grad_w[k]) /
                 std::max(std::fabs(g.grad_w[k]), 1e-10);
    CHECK(rel <= 1e-4);
  }
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<double> bp = b, bm = b;
    bp[c] += h;
    bm[c] -= h;
    double fd = (detail::logreg_loss_gradient(X, ids, classes, w, bp, l2).loss -
                 detail::logreg_loss_gradient(X, ids, classes, w, bm, l2).loss) /
                (2 * h);
    double rel = std::fabs(fd - g.grad_b[c]) /
                 std::max(std::fabs(g.grad_b[c]), 1e-10);
    CHECK(rel <= 1e-4);
  }
}

TEST_CASE("f1 micro fixtures") {
  std::vector<Label> y_true = {Label::background, Label::background,
                               Label::methods, Label::methods};
  std::vector<Label> perfect = y_true;
  CHECK(f1_micro(y_true, perfect) == 1.0);

  std::vector<Label> one_wrong = {Label::background, Label::methods,
                                  Label::methods, Label::methods};
  CHECK(f1_micro(y_true, one_wrong) == Catch::Approx(0.75));

  CHECK_THROWS_AS(f1_micro({}, {}), ValidationError);
  std::vector<Label> shorter = {Label::methods};
  CHECK_THROWS_AS(f1_micro(y_true, shorter), ValidationError);
}

TEST_CASE("f1 micro equals accuracy for single-label multiclass") {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.below(30);
    std::vector<Label> y_true(n), y_pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      y_true[i] = static_cast<Label>(rng.below(4));
      y_pred[i] = static_cast<Label>(rng.below(4));
    }
    double accuracy = 0.0;
    for (std::size_t i = 0; i < n; ++i) accuracy += y_true[i] == y_pred[i];
    accuracy /= static_cast<double>(n);
    CHECK(f1_micro(y_true, y_pred) ==
          Catch::Approx(accuracy).margin(1e-12));
  }
}

TEST_CASE("confusion matrix row sums match per-label true counts") {
  Rng rng(67);
  std::vector<Label> y_true(40), y_pred(40);
  for (std::size_t i = 0; i < 40; ++i) {
    y_true[i] = static_cast<Label>(rng.below(3));
    y_pred[i] = static_cast<Label>(rng.below(3));
  }
  ConfusionMatrix cm = confusion_matrix(y_true, y_pred);
  CHECK(cm.total() == 40);
  for (std::size_t c = 0; c < cm.classes.size(); ++c) {
    std::uint64_t row = 0;
    for (std::size_t o = 0; o < cm.classes.size(); ++o) row += cm.at(c, o);
    auto expected = static_cast<std::uint64_t>(
        std::count(y_true.begin(), y_true.end(), cm.classes[c]));
    CHECK(row == expected);
  }

  // f1 recomputed from the matrix agrees with the direct value.
  std::uint64_t tp = 0;
  for (std::size_t c = 0; c < cm.classes.size(); ++c) tp += cm.at(c, c);
  double from_matrix =
      2.0 * static_cast<double>(tp) /
      (2.0 * static_cast<double>(tp) +
       static_cast<double>(cm.total() - tp) * 2.0);
  CHECK(f1_micro(y_true, y_pred) == Catch::Approx(from_matrix).margin(1e-12));
}

TEST_CASE("classification_eval on train = test scores 100 with knn") {
  Rng rng(71);
  std::vector<Label> y;
  EmbeddingMatrix X = blobs(rng, 20, {{0.0, 0.0}, {5.0, 5.0}}, 1.0, &y);
  ClassificationEvalResult r =
      classification_eval(X, y, X, y, ClassifierKind::knn, 0);
  CHECK(r.report.at("f1_micro") == Catch::Approx(100.0));
  CHECK(r.unseen_test_labels == 0);
  CHECK(r.knn_k == 6);  // floor(sqrt(40))
}

TEST_CASE("classification_eval validation and unseen labels") {
  Rng rng(73);
  std::vector<Label> y;
  EmbeddingMatrix X = blobs(rng, 10, {{0.0, 0.0}, {5.0, 5.0}}, 1.0, &y);
  EmbeddingMatrix empty;
  std::vector<Label> no_labels;
  CHECK_THROWS_AS(
      classification_eval(X, y, empty, no_labels, ClassifierKind::knn, 0),
      ValidationError);

  // A test label never seen in training counts as always wrong.
  EmbeddingMatrix test = matrix({{0.0f, 0.0f}, {5.0f, 5.0f}});
  std::vector<Label> test_y = {Label::conclusion, Label::objective};
  ClassificationEvalResult r =
      classification_eval(X, y, test, test_y, ClassifierKind::centroid, 0);
  CHECK(r.unseen_test_labels == 1);
  CHECK(r.report.at("f1_micro") < 100.0);
  CHECK(r.report.at("recall_conclusion") == 0.0);
}

TEST_CASE("cluster_eval separates synthetic blobs perfectly") {
  Rng rng(79);
  std::vector<Label> y;
  EmbeddingMatrix X = blobs(rng, 24,
                            {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0},
                             {10.0, 10.0}, {5.0, 18.0}},
                            0.5, &y);
  ClusterEvalResult r = cluster_eval(X, y, 3);
  CHECK(r.k == 5);
  CHECK(r.report.at("ari") == Catch::Approx(100.0).margin(1e-9));
  CHECK(r.report.at("ami") == Catch::Approx(100.0).margin(1e-9));
  CHECK(r.report.at("silhouette") > 80.0);
}

TEST_CASE("cluster_eval on identical embeddings carries no information") {
  EmbeddingMatrix X;
  X.rows = 24;
  X.dim = 2;
  X.values.assign(48, 1.0f);
  std::vector<Label> y;
  for (int i = 0; i < 24; ++i) y.push_back(static_cast<Label>(i % 2));
  ClusterEvalResult r = cluster_eval(X, y, 5);
  CHECK(std::fabs(r.report.at("ari")) < 10.0);
}
