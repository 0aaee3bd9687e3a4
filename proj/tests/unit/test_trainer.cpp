#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>

#include "sembed/contrastive/trainer.hpp"
#include "sembed/util/rng.hpp"

using namespace sembed;

namespace {

LabeledSentence sent(const std::string& id, Label label,
                     const std::string& text) {
  LabeledSentence s;
  s.id = id;
  s.article_id = "a";
  s.label = label;
  s.text = text;
  s.section_title = "T";
  return s;
}

// Two labels with disjoint vocabularies; separable by construction.
Corpus disjoint_vocab_corpus(std::size_t per_label, Rng& rng) {
  const std::vector<std::string> methods_words = {
      "assay",  "protocol", "reagent", "pipette",
      "incubate", "buffer", "titrate", "centrifuge"};
  const std::vector<std::string> results_words = {
      "increase", "decrease", "significant", "observed",
      "measured", "improved", "outcome",     "score"};
  Corpus corpus;
  for (std::size_t i = 0; i < per_label; ++i) {
    for (int which = 0; which < 2; ++which) {
      const auto& vocab = which == 0 ? methods_words : results_words;
      std::string text;
      for (int w = 0; w < 6; ++w) {
        if (w) text += ' ';
        text += vocab[rng.below(vocab.size())];
      }
      corpus.push_back(sent("s" + std::to_string(corpus.size()),
                            which == 0 ? Label::methods : Label::results,
                            text));
    }
  }
  return corpus;
}

}  // namespace

TEST_CASE("lr schedule ramps then decays") {
  // total 100, warmup 0.1: steps 0..9 ramp, 10..99 decay.
  CHECK(lr_schedule(0, 100, 1.0, 0.1) == Catch::Approx(0.1));
  CHECK(lr_schedule(9, 100, 1.0, 0.1) == Catch::Approx(1.0));
  CHECK(lr_schedule(10, 100, 1.0, 0.1) == Catch::Approx(1.0));
  CHECK(lr_schedule(99, 100, 1.0, 0.1) == Catch::Approx(1.0 / 90.0));
  for (std::size_t s = 1; s < 10; ++s) {
    CHECK(lr_schedule(s, 100, 1.0, 0.1) > lr_schedule(s - 1, 100, 1.0, 0.1));
  }
  for (std::size_t s = 11; s < 100; ++s) {
    CHECK(lr_schedule(s, 100, 1.0, 0.1) < lr_schedule(s - 1, 100, 1.0, 0.1));
  }
}

TEST_CASE("lr schedule edge shapes") {
  // No warmup: starts at the peak, decays to peak/total at the last step.
  CHECK(lr_schedule(0, 10, 2.0, 0.0) == Catch::Approx(2.0));
  CHECK(lr_schedule(9, 10, 2.0, 0.0) == Catch::Approx(0.2));
  // Full warmup: pure ramp ending at the peak.
  CHECK(lr_schedule(9, 10, 2.0, 1.0) == Catch::Approx(2.0));
  CHECK(lr_schedule(0, 10, 2.0, 1.0) == Catch::Approx(0.2));
  CHECK_THROWS_AS(lr_schedule(10, 10, 1.0, 0.1), ValidationError);
  CHECK_THROWS_AS(lr_schedule(0, 0, 1.0, 0.1), ValidationError);
}

TEST_CASE("validation triplets: one per eligible anchor") {
  Corpus corpus;
  corpus.push_back(sent("a", Label::methods, "m one"));
  corpus.push_back(sent("b", Label::methods, "m two"));
  corpus.push_back(sent("c", Label::results, "r one"));
  corpus.push_back(sent("d", Label::results, "r two"));
  ValidationTriplets t = build_validation_triplets(corpus, 5);
  CHECK(t.triplets.size() == 4);
  CHECK(t.skipped_anchors == 0);

  std::map<std::string, Label> label_of;
  for (const auto& s : corpus) label_of[s.id] = s.label;
  for (const auto& trip : t.triplets) {
    CHECK(trip.anchor != trip.positive);
    CHECK(label_of.at(trip.anchor) == label_of.at(trip.positive));
    CHECK(label_of.at(trip.anchor) != label_of.at(trip.negative));
  }
}

TEST_CASE("validation triplets: lone-label anchors are skipped") {
  Corpus corpus;
  corpus.push_back(sent("a", Label::methods, "m one"));
  corpus.push_back(sent("b", Label::methods, "m two"));
  corpus.push_back(sent("c", Label::other, "alone"));
  ValidationTriplets t = build_validation_triplets(corpus, 5);
  CHECK(t.triplets.size() == 2);
  CHECK(t.skipped_anchors == 1);

  // Single-label corpus: no negatives exist anywhere.
  Corpus single;
  single.push_back(sent("a", Label::methods, "m one"));
  single.push_back(sent("b", Label::methods, "m two"));
  ValidationTriplets none = build_validation_triplets(single, 5);
  CHECK(none.triplets.empty());
  CHECK(none.skipped_anchors == 2);
}

TEST_CASE("validation triplets are deterministic per seed") {
  Rng rng(1);
  Corpus corpus = disjoint_vocab_corpus(10, rng);
  ValidationTriplets a = build_validation_triplets(corpus, 42);
  ValidationTriplets b = build_validation_triplets(corpus, 42);
  ValidationTriplets c = build_validation_triplets(corpus, 43);
  REQUIRE(a.triplets.size() == b.triplets.size());
  REQUIRE(a.triplets.size() == c.triplets.size());
  bool all_equal = true;
  bool differs_somewhere = false;
  for (std::size_t i = 0; i < a.triplets.size(); ++i) {
    all_equal &= a.triplets[i].positive == b.triplets[i].positive &&
                 a.triplets[i].negative == b.triplets[i].negative;
    if (a.triplets[i].positive != c.triplets[i].positive ||
        a.triplets[i].negative != c.triplets[i].negative) {
      differs_somewhere = true;
    }
  }
  CHECK(all_equal);
  CHECK(differs_somewhere);
}

TEST_CASE("training with margin 0 on separated data changes nothing") {
  // Coincident same-label points plus distant negatives: with m = 0 every
  // hinge is already clipped, so the gradient is zero throughout.
  Corpus corpus;
  corpus.push_back(sent("a", Label::methods, "assay assay"));
  corpus.push_back(sent("b", Label::methods, "assay assay"));
  corpus.push_back(sent("c", Label::results, "outcome outcome"));
  corpus.push_back(sent("d", Label::results, "outcome outcome"));

  TrainConfig config;
  config.margin = 0.0;
  config.epochs = 3;
  config.batch_size = 4;
  config.seed = 9;
  EncoderModel model = random_baseline_model(9, {.hash_dim = 64}, 4);
  std::vector<float> before = model.projection;
  TrainHistory history = train(model, corpus, {}, {}, config);
  CHECK(model.projection == before);
  for (const auto& step : history.steps) CHECK(step.loss == 0.0);
}

TEST_CASE("training is bit-identical per seed") {
  Rng rng(2);
  Corpus corpus = disjoint_vocab_corpus(20, rng);
  TrainConfig config;
  config.epochs = 3;
  config.batch_size = 8;
  config.seed = 17;
  config.peak_lr = 0.01;

  EncoderModel m1 = random_baseline_model(17, {.hash_dim = 256}, 8);
  EncoderModel m2 = m1;
  TrainHistory h1 = train(m1, corpus, {}, {}, config);
  TrainHistory h2 = train(m2, corpus, {}, {}, config);
  CHECK(m1.projection == m2.projection);
  REQUIRE(h1.steps.size() == h2.steps.size());
  for (std::size_t i = 0; i < h1.steps.size(); ++i) {
    CHECK(h1.steps[i].loss == h2.steps[i].loss);
    CHECK(h1.steps[i].lr == h2.steps[i].lr);
  }
}

TEST_CASE("training rejects single-label corpora") {
  Corpus corpus;
  corpus.push_back(sent("a", Label::methods, "assay"));
  corpus.push_back(sent("b", Label::methods, "buffer"));
  EncoderModel model = random_baseline_model(1, {.hash_dim = 64}, 4);
  CHECK_THROWS_AS(train(model, corpus, {}, {}, TrainConfig{}),
                  ValidationError);
}

TEST_CASE("training separates a disjoint-vocabulary corpus") {
  Rng rng(3);
  Corpus corpus = disjoint_vocab_corpus(100, rng);  // 200 sentences
  Corpus validation = disjoint_vocab_corpus(20, rng);
  ValidationTriplets triplets = build_validation_triplets(validation, 7);

  TrainConfig config;
  config.epochs = 5;
  config.batch_size = 32;
  config.seed = 7;
  config.peak_lr = 1e-2;
  config.margin = 5.0;

  EncoderModel model = random_baseline_model(7, {.hash_dim = 1024}, 16);
  TrainHistory history = train(model, corpus, validation, triplets, config);
  REQUIRE_FALSE(history.epochs.empty());
  CHECK(history.epochs.back().validation_accuracy >= 0.99);

  // Loss in the final epoch sits below the first epoch's level.
  double first = 0.0, last = 0.0;
  std::size_t per_epoch = history.steps.size() / config.epochs;
  for (std::size_t i = 0; i < per_epoch; ++i) {
    first += history.steps[i].loss;
    last += history.steps[history.steps.size() - 1 - i].loss;
  }
  CHECK(last < first);
}

TEST_CASE("skipped batches are counted") {
  // Batch size 2 over a lopsided corpus: many shuffled batches hold one
  // label only; those steps contribute no gradient but are counted.
  Corpus corpus;
  for (int i = 0; i < 6; ++i) {
    corpus.push_back(sent("m" + std::to_string(i), Label::methods, "assay"));
  }
  corpus.push_back(sent("r0", Label::results, "outcome"));
  corpus.push_back(sent("r1", Label::results, "score"));

  TrainConfig config;
  config.epochs = 2;
  config.batch_size = 2;
  config.seed = 5;
  EncoderModel model = random_baseline_model(5, {.hash_dim = 64}, 4);
  TrainHistory history = train(model, corpus, {}, {}, config);
  REQUIRE_FALSE(history.steps.empty());
  CHECK(history.steps.back().skipped_batches > 0);
  for (std::size_t i = 1; i < history.steps.size(); ++i) {
    CHECK(history.steps[i].skipped_batches >=
          history.steps[i - 1].skipped_batches);
  }
}

TEST_CASE("pairwise contrastive training also separates") {
  Rng rng(4);
  Corpus corpus = disjoint_vocab_corpus(40, rng);
  Corpus validation = disjoint_vocab_corpus(10, rng);
  ValidationTriplets triplets = build_validation_triplets(validation, 11);

  TrainConfig config;
  config.loss = LossKind::pairwise_contrastive;
  config.epochs = 5;
  config.batch_size = 16;
  config.seed = 11;
  config.peak_lr = 1e-2;
  config.margin = 2.0;

  EncoderModel model = random_baseline_model(11, {.hash_dim = 512}, 8);
  TrainHistory history = train(model, corpus, validation, triplets, config);
  CHECK(history.epochs.back().validation_accuracy >= 0.95);
}

TEST_CASE("trainer validates configuration") {
  TrainConfig config;
  config.batch_size = 0;
  CHECK_THROWS_AS(config.validate(), ValidationError);
  config = TrainConfig{};
  config.margin = -1;
  CHECK_THROWS_AS(config.validate(), ValidationError);
  config = TrainConfig{};
  config.distance = Distance::cosine;  // no gradient for cosine training
  CHECK_THROWS_AS(config.validate(), ValidationError);
  config = TrainConfig{};
  config.warmup_fraction = 1.5;
  CHECK_THROWS_AS(config.validate(), ValidationError);
}
