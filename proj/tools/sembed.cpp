// sembed: end-to-end pipeline for labeled sentence embeddings.
// Subcommands: extract, split, dedup, stats, train, encode, cluster,
// classify, report, project. Every command is seeded and re-runs
// byte-identically on identical inputs.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sembed/classify/metrics.hpp"
#include "sembed/clusteval/eval.hpp"
#include "sembed/contrastive/trainer.hpp"
#include "sembed/corpus/build.hpp"
#include "sembed/corpus/dedup.hpp"
#include "sembed/corpus/stats.hpp"
#include "sembed/corpus/stratified.hpp"
#include "sembed/encoder/model.hpp"
#include "sembed/error.hpp"
#include "sembed/project/pca.hpp"
#include "sembed/report/comparison.hpp"
#include "sembed/report/run_record.hpp"

namespace fs = std::filesystem;
using namespace sembed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;

std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

std::vector<Label> corpus_labels(const Corpus& corpus) {
  std::vector<Label> labels;
  labels.reserve(corpus.size());
  for (const auto& s : corpus) labels.push_back(s.label);
  return labels;
}

void require_row_match(const EmbeddingMatrix& emb, const Corpus& corpus,
                       const std::string& what) {
  if (emb.rows != corpus.size()) {
    throw ValidationError(what + ": embedding has " +
                          std::to_string(emb.rows) + " rows but corpus has " +
                          std::to_string(corpus.size()) + " records");
  }
}

// ---------------------------------------------------------------- extract

int cmd_extract(const std::string& input_dir, const std::string& keywords_path,
                const std::string& out_path) {
  KeywordMap keywords = keywords_path.empty() ? KeywordMap::defaults()
                                              : KeywordMap::load(keywords_path);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(input_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  if (paths.empty()) {
    std::cerr << "warning: no .xml files in " << input_dir << "\n";
  }

  BuildResult result = build_corpus(paths, keywords);
  write_corpus(out_path, result.sentences);

  std::cout << "articles\taccepted=" << result.articles_accepted
            << "\trejected=" << result.articles_rejected << "\n"
            << "sentences\t" << result.sentences.size() << "\n";
  for (const auto& err : result.errors) {
    std::cerr << "error: " << err.path << ": " << err.message << "\n";
  }
  if (!result.errors.empty()) {
    std::cerr << "warning: partial output, " << result.errors.size()
              << " file(s) failed\n";
    return kExitPartial;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ split

int cmd_split(const std::string& in_path, const std::string& ratios_arg,
              std::uint64_t seed, const std::string& out_train,
              const std::string& out_validation, const std::string& out_test) {
  std::array<double, 3> ratios{};
  {
    std::stringstream ss(ratios_arg);
    std::string field;
    std::size_t i = 0;
    while (std::getline(ss, field, ',')) {
      if (i >= 3) throw ValidationError("expected three ratios a,b,c");
      try {
        ratios[i++] = std::stod(field);
      } catch (const std::exception&) {
        throw ValidationError("bad ratio value '" + field + "'");
      }
    }
    if (i != 3) throw ValidationError("expected three ratios a,b,c");
  }
  Corpus corpus = read_corpus(in_path);
  CorpusSplit split = stratified_split(corpus, ratios, seed);
  write_corpus(out_train, split.train);
  write_corpus(out_validation, split.validation);
  write_corpus(out_test, split.test);
  std::cout << "train\t" << split.train.size() << "\nvalidation\t"
            << split.validation.size() << "\ntest\t" << split.test.size()
            << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ dedup

int cmd_dedup(const std::string& in_path, const std::string& out_path,
              const std::string& removed_path, bool exact) {
  Corpus corpus = read_corpus(in_path);
  DedupResult result = dedup_conflicting(corpus);
  Corpus kept = exact ? dedup_exact_texts(result.kept) : result.kept;
  write_corpus(out_path, kept);
  if (!removed_path.empty()) write_corpus(removed_path, result.removed);
  std::cout << "kept\t" << kept.size() << "\nremoved\t"
            << result.removed.size() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ stats

int cmd_stats(const std::string& in_path, const std::string& out_path) {
  Corpus corpus = read_corpus(in_path);
  std::string tsv = render_stats_tsv(corpus_stats(corpus));
  std::cout << tsv;
  if (!out_path.empty()) atomic_write_file(out_path, tsv);
  return kExitOk;
}

// ------------------------------------------------------------------ train

std::string step_record_line(const StepRecord& r) {
  nlohmann::ordered_json j;
  j["type"] = "step";
  j["step"] = r.step;
  j["epoch"] = r.epoch;
  j["lr"] = r.lr;
  j["loss"] = r.loss;
  j["valid_triplet_count"] = r.valid_triplet_count;
  j["skipped_batches"] = r.skipped_batches;
  return j.dump();
}

std::string epoch_record_line(const EpochRecord& r) {
  nlohmann::ordered_json j;
  j["type"] = "epoch";
  j["epoch"] = r.epoch;
  j["validation_accuracy"] = r.validation_accuracy;
  j["validation_triplets"] = r.validation_triplets;
  return j.dump();
}

int cmd_train(const std::string& corpus_path, const std::string& validation_path,
              const std::string& out_path, const std::string& history_path,
              const std::string& init_model_path, TrainConfig config,
              std::uint32_t hash_dim, std::uint32_t out_dim, bool normalize) {
  Corpus train_corpus = read_corpus(corpus_path);

  EncoderModel model;
  if (!init_model_path.empty()) {
    model = load_model(init_model_path);
  } else {
    FeaturizerConfig fc;
    fc.hash_dim = hash_dim;
    model = random_baseline_model(config.seed, fc, out_dim);
  }
  model.normalize_output = normalize;

  Corpus validation_corpus;
  ValidationTriplets triplets;
  if (!validation_path.empty()) {
    validation_corpus = read_corpus(validation_path);
    triplets = build_validation_triplets(validation_corpus, config.seed);
    if (triplets.skipped_anchors > 0) {
      std::cerr << "warning: " << triplets.skipped_anchors
                << " validation anchor(s) skipped (label too small)\n";
    }
  }

  std::ofstream history;
  fs::path history_tmp;
  TrainCallbacks callbacks;
  if (!history_path.empty()) {
    history_tmp = fs::path(history_path + ".tmp");
    history.open(history_tmp, std::ios::trunc);
    if (!history) throw Error("cannot open history file " + history_tmp.string());
    callbacks.on_step = [&](const StepRecord& r) {
      history << step_record_line(r) << "\n";
    };
    callbacks.on_epoch = [&](const EpochRecord& r) {
      history << epoch_record_line(r) << "\n";
    };
  }

  if (config.epochs > 0) {
    train(model, train_corpus, validation_corpus, triplets, config, callbacks);
  }
  save_model(out_path, model);

  if (!history_path.empty()) {
    history.close();
    fs::rename(history_tmp, fs::path(history_path));
  }
  std::cout << "model\t" << out_path << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- encode

int cmd_encode(const std::string& model_path, bool random_baseline,
               std::uint64_t baseline_seed, std::uint32_t hash_dim,
               std::uint32_t out_dim, const std::string& in_path,
               const std::string& out_path, const std::string& format) {
  if (model_path.empty() == !random_baseline) {
    throw ValidationError("pass exactly one of --model or --random-baseline");
  }
  EncoderModel model;
  if (!model_path.empty()) {
    model = load_model(model_path);
  } else {
    FeaturizerConfig fc;
    fc.hash_dim = hash_dim;
    model = random_baseline_model(baseline_seed, fc, out_dim);
  }

  Corpus corpus = read_corpus(in_path);
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const auto& s : corpus) texts.push_back(s.text);
  EmbeddingMatrix emb = encode(model, texts);

  if (format == "tsv") {
    atomic_write_file(out_path, embedding_to_tsv(emb));
  } else if (format == "bin") {
    save_embeddings(out_path, emb);
  } else {
    throw ValidationError("unknown format '" + format + "' (bin or tsv)");
  }
  std::cout << "rows\t" << emb.rows << "\tdim\t" << emb.dim << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- cluster

int cmd_cluster(const std::string& emb_path, const std::string& labels_path,
                std::uint64_t seed, const KmeansOptions& opts,
                const std::string& out_path, const std::string& run_path,
                std::string name) {
  EmbeddingMatrix emb = load_embeddings_any(emb_path);
  Corpus corpus = read_corpus(labels_path);
  require_row_match(emb, corpus, "cluster");
  std::vector<Label> labels = corpus_labels(corpus);

  ClusterEvalResult result = cluster_eval(emb, labels, seed, opts);

  std::string key_values = render_key_values(result.report);
  std::cout << key_values;
  std::cout << render_metric_row(result.report, {"ari", "ami", "silhouette"});
  if (!out_path.empty()) atomic_write_file(out_path, key_values);

  if (!run_path.empty()) {
    if (name.empty()) name = fs::path(emb_path).stem().string();
    std::vector<std::pair<std::string, std::string>> config = {
        {"seed", std::to_string(seed)},
        {"k", std::to_string(result.k)},
        {"restarts", std::to_string(opts.restarts)},
        {"max_iter", std::to_string(opts.max_iter)},
        {"tol", fmt_double(opts.tol)},
        {"init", "kmeans++"},
        {"ami_normalizer", "arithmetic_mean_entropy"},
        {"ami_log_base", "e"},
        {"silhouette_distance", "euclidean"},
        {"metric_scale", "x100"},
    };
    write_run_record(run_path,
                     make_run_record("cluster", name, config,
                                     {emb_path, labels_path}, result.report));
  }
  return kExitOk;
}

// --------------------------------------------------------------- classify

int cmd_classify(const std::string& train_emb_path,
                 const std::string& train_labels_path,
                 const std::string& test_emb_path,
                 const std::string& test_labels_path,
                 const std::string& classifier_name, std::uint64_t seed,
                 const std::string& out_path, const std::string& run_path,
                 const std::string& confusion_path, std::string name) {
  EmbeddingMatrix train_emb = load_embeddings_any(train_emb_path);
  Corpus train_corpus = read_corpus(train_labels_path);
  require_row_match(train_emb, train_corpus, "classify train");
  EmbeddingMatrix test_emb = load_embeddings_any(test_emb_path);
  Corpus test_corpus = read_corpus(test_labels_path);
  require_row_match(test_emb, test_corpus, "classify test");

  ClassifierKind kind = parse_classifier(classifier_name);
  ClassificationEvalResult result =
      classification_eval(train_emb, corpus_labels(train_corpus), test_emb,
                          corpus_labels(test_corpus), kind, seed);
  if (result.unseen_test_labels > 0) {
    std::cerr << "warning: " << result.unseen_test_labels
              << " test sample(s) carry labels unseen in training\n";
  }

  std::string key_values = render_key_values(result.report);
  std::cout << key_values;
  if (!out_path.empty()) atomic_write_file(out_path, key_values);
  std::string confusion = render_confusion_tsv(result.confusion);
  std::cout << confusion;
  if (!confusion_path.empty()) atomic_write_file(confusion_path, confusion);

  if (!run_path.empty()) {
    if (name.empty()) name = fs::path(test_emb_path).stem().string();
    std::vector<std::pair<std::string, std::string>> config = {
        {"classifier", classifier_name},
        {"seed", std::to_string(seed)},
        {"distance", "euclidean"},
        {"metric_scale", "x100"},
    };
    if (kind == ClassifierKind::knn) {
      config.emplace_back("k_rule", "floor_sqrt_train_size");
      config.emplace_back("k", std::to_string(result.knn_k));
      config.emplace_back("weighting", "distance");
    }
    if (kind == ClassifierKind::logreg) {
      LogregConfig def;
      config.emplace_back("l2", fmt_double(def.l2));
      config.emplace_back("epochs", std::to_string(def.epochs));
      config.emplace_back("lr", fmt_double(def.lr));
    }
    write_run_record(
        run_path,
        make_run_record("classify", name, config,
                        {train_emb_path, train_labels_path, test_emb_path,
                         test_labels_path},
                        result.report));
  }
  return kExitOk;
}

// ----------------------------------------------------------------- report

int cmd_report(const std::vector<std::string>& run_paths,
               const std::vector<std::string>& pair_args,
               const std::string& metric, const std::string& out_path) {
  std::map<std::string, RunRecord> runs;
  for (const auto& p : run_paths) {
    RunRecord rec = read_run_record(p);
    runs[p] = rec;
    runs[fs::path(p).stem().string()] = rec;
  }
  auto resolve = [&](const std::string& key) -> const RunRecord& {
    auto it = runs.find(key);
    if (it == runs.end()) {
      throw ValidationError("run '" + key + "' is not among --runs");
    }
    return it->second;
  };

  std::vector<ComparisonRow> rows;
  for (const std::string& arg : pair_args) {
    std::string fine_key, base_key;
    std::stringstream ss(arg);
    std::string part;
    while (std::getline(ss, part, ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos) {
        throw ValidationError("bad --pair entry '" + part +
                              "', expected role=run");
      }
      std::string role = part.substr(0, eq);
      std::string value = part.substr(eq + 1);
      if (role == "fine_tuned") {
        fine_key = value;
      } else if (role == "baseline") {
        base_key = value;
      } else {
        throw ValidationError("unknown pair role '" + role + "'");
      }
    }
    if (fine_key.empty() || base_key.empty()) {
      throw ValidationError("--pair needs fine_tuned=... and baseline=...");
    }
    const RunRecord& fine = resolve(fine_key);
    const RunRecord& base = resolve(base_key);

    std::vector<std::string> keys;
    if (!metric.empty()) {
      keys.push_back(metric);
    } else {
      for (const auto& [k, v] : fine.eval.metrics) keys.push_back(k);
      std::vector<std::string> base_keys;
      for (const auto& [k, v] : base.eval.metrics) base_keys.push_back(k);
      if (keys != base_keys) {
        throw ValidationError("runs '" + fine_key + "' and '" + base_key +
                              "' do not share metric keys");
      }
    }
    std::string model;
    for (const auto& [k, v] : fine.config) {
      if (k == "classifier") model = v;
    }
    if (model.empty()) model = fine.command;
    for (const std::string& key : keys) {
      auto f = fine.eval.get(key);
      auto b = base.eval.get(key);
      if (!f || !b) {
        throw ValidationError("metric '" + key + "' missing from a run");
      }
      rows.push_back(make_comparison_row(fine.name, model, key, *f, *b));
    }
  }

  std::cout << render_comparison_table(rows);
  if (!out_path.empty()) atomic_write_file(out_path, render_comparison_tsv(rows));
  return kExitOk;
}

// ---------------------------------------------------------------- project

int cmd_project(const std::string& emb_path, const std::string& labels_path,
                const std::string& out_path) {
  EmbeddingMatrix emb = load_embeddings_any(emb_path);
  Corpus corpus = read_corpus(labels_path);
  require_row_match(emb, corpus, "project");

  PcaProjection proj = pca_project_2d(emb);
  std::string out = "x\ty\tlabel\n";
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out += fmt_double(proj.x[i]) + "\t" + fmt_double(proj.y[i]) + "\t" +
           std::string(label_name(corpus[i].label)) + "\n";
  }
  atomic_write_file(out_path, out);
  std::cout << "rows\t" << emb.rows << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"labeled sentence embeddings: extraction, contrastive "
               "training, and evaluation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file supplying defaults");

  // Deterministic commands still accept --seed so that scripted pipelines
  // can pass one flag set everywhere.
  std::uint64_t unused_seed = 0;

  // extract
  auto* extract = app.add_subcommand("extract", "parse article XML into records");
  std::string ex_input, ex_keywords, ex_out;
  extract->add_option("--input", ex_input, "directory of .xml articles")
      ->required();
  extract->add_option("--keywords", ex_keywords,
                      "keyword map file (label<TAB>keyword)");
  extract->add_option("--out", ex_out, "output corpus file")->required();
  extract->add_option("--seed", unused_seed, "accepted; extraction is deterministic");

  // split
  auto* split = app.add_subcommand("split", "stratified train/validation/test split");
  std::string sp_in, sp_ratios = "0.8,0.1,0.1";
  std::string sp_train, sp_validation, sp_test;
  std::uint64_t sp_seed = 0;
  split->add_option("--in", sp_in, "corpus file")->required();
  split->add_option("--ratios", sp_ratios, "three ratios a,b,c");
  split->add_option("--seed", sp_seed, "shuffle seed");
  split->add_option("--out-train", sp_train)->required();
  split->add_option("--out-validation", sp_validation)->required();
  split->add_option("--out-test", sp_test)->required();

  // dedup
  auto* dedup = app.add_subcommand("dedup", "drop texts that appear under conflicting labels");
  std::string dd_in, dd_out, dd_removed;
  bool dd_exact = false;
  dedup->add_option("--in", dd_in)->required();
  dedup->add_option("--out", dd_out)->required();
  dedup->add_option("--removed-out", dd_removed, "audit file for removed records");
  dedup->add_flag("--exact", dd_exact, "also drop same-label duplicate texts");
  dedup->add_option("--seed", unused_seed, "accepted; dedup is deterministic");

  // stats
  auto* stats = app.add_subcommand("stats", "per-label counts and percentages");
  std::string st_in, st_out;
  stats->add_option("--in", st_in)->required();
  stats->add_option("--out", st_out);
  stats->add_option("--seed", unused_seed, "accepted; stats are deterministic");

  // train
  auto* train_cmd = app.add_subcommand("train", "contrastive training of the encoder");
  std::string tr_corpus, tr_validation, tr_out, tr_history, tr_init;
  std::string tr_loss = "batch_all", tr_distance = "euclidean";
  TrainConfig tr_config;
  std::uint32_t tr_hash_dim = 32768, tr_dim = 64;
  bool tr_normalize = false, tr_positive_only = false;
  train_cmd->add_option("--corpus", tr_corpus, "training corpus")->required();
  train_cmd->add_option("--validation", tr_validation, "validation corpus");
  train_cmd->add_option("--out", tr_out, "output model file")->required();
  train_cmd->add_option("--history", tr_history, "training history file");
  train_cmd->add_option("--init-model", tr_init, "start from this model");
  train_cmd->add_option("--epochs", tr_config.epochs);
  train_cmd->add_option("--batch-size", tr_config.batch_size);
  train_cmd->add_option("--margin", tr_config.margin);
  train_cmd->add_option("--lr", tr_config.peak_lr, "peak learning rate");
  train_cmd->add_option("--warmup", tr_config.warmup_fraction);
  train_cmd->add_option("--seed", tr_config.seed);
  train_cmd->add_option("--loss", tr_loss, "batch_all or pairwise");
  train_cmd->add_option("--distance", tr_distance, "euclidean or cosine");
  train_cmd->add_option("--hash-dim", tr_hash_dim);
  train_cmd->add_option("--dim", tr_dim, "embedding dimension");
  train_cmd->add_flag("--normalize", tr_normalize, "L2-normalize encode output");
  train_cmd->add_flag("--positive-only", tr_positive_only,
                      "average only triplets with nonzero loss");

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "encode corpus sentences");
  std::string en_model, en_in, en_out, en_format = "bin";
  std::uint64_t en_seed = 0;
  std::uint32_t en_hash_dim = 32768, en_dim = 64;
  encode_cmd->add_option("--model", en_model, "model file");
  auto* en_random_opt =
      encode_cmd->add_option("--random-baseline", en_seed,
                             "random baseline projection with this seed");
  encode_cmd->add_option("--hash-dim", en_hash_dim);
  encode_cmd->add_option("--dim", en_dim);
  encode_cmd->add_option("--in", en_in, "corpus file")->required();
  encode_cmd->add_option("--out", en_out, "embedding file")->required();
  encode_cmd->add_option("--format", en_format, "bin or tsv");
  encode_cmd->add_option("--seed", unused_seed,
                         "accepted; encoding is deterministic per model");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "k-means + agreement metrics");
  std::string cl_emb, cl_labels, cl_out, cl_run, cl_name;
  std::uint64_t cl_seed = 0;
  KmeansOptions cl_opts;
  cluster->add_option("--emb", cl_emb)->required();
  cluster->add_option("--labels", cl_labels, "corpus with ground-truth labels")
      ->required();
  cluster->add_option("--seed", cl_seed);
  cluster->add_option("--restarts", cl_opts.restarts);
  cluster->add_option("--max-iter", cl_opts.max_iter);
  cluster->add_option("--tol", cl_opts.tol);
  cluster->add_option("--out", cl_out, "metric key-value file");
  cluster->add_option("--run-out", cl_run, "run record file");
  cluster->add_option("--name", cl_name, "dataset name for reports");

  // classify
  auto* classify = app.add_subcommand("classify", "embedding-space classification");
  std::string cf_train_emb, cf_train_labels, cf_test_emb, cf_test_labels;
  std::string cf_classifier = "knn", cf_out, cf_run, cf_confusion, cf_name;
  std::uint64_t cf_seed = 0;
  classify->add_option("--train-emb", cf_train_emb)->required();
  classify->add_option("--train-labels", cf_train_labels)->required();
  classify->add_option("--test-emb", cf_test_emb)->required();
  classify->add_option("--test-labels", cf_test_labels)->required();
  classify->add_option("--classifier", cf_classifier, "knn, centroid, or logreg");
  classify->add_option("--seed", cf_seed);
  classify->add_option("--out", cf_out, "metric key-value file");
  classify->add_option("--run-out", cf_run, "run record file");
  classify->add_option("--confusion-out", cf_confusion, "confusion grid file");
  classify->add_option("--name", cf_name, "dataset name for reports");

  // report
  auto* report = app.add_subcommand("report", "fine-tuned vs baseline comparison table");
  std::vector<std::string> rp_runs, rp_pairs;
  std::string rp_metric, rp_out;
  report->add_option("--runs", rp_runs, "run record files")->required();
  report->add_option("--pair", rp_pairs,
                     "fine_tuned=RUN,baseline=RUN (repeatable)")
      ->required();
  report->add_option("--metric", rp_metric, "restrict to one metric");
  report->add_option("--out", rp_out, "tab-separated output file");
  report->add_option("--seed", unused_seed, "accepted; reporting is deterministic");

  // project
  auto* project = app.add_subcommand("project", "top-2 PCA coordinates per sentence");
  std::string pj_emb, pj_labels, pj_out;
  project->add_option("--emb", pj_emb)->required();
  project->add_option("--labels", pj_labels)->required();
  project->add_option("--out", pj_out)->required();
  project->add_option("--seed", unused_seed, "accepted; PCA is deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*extract) return cmd_extract(ex_input, ex_keywords, ex_out);
    if (*split) {
      return cmd_split(sp_in, sp_ratios, sp_seed, sp_train, sp_validation,
                       sp_test);
    }
    if (*dedup) return cmd_dedup(dd_in, dd_out, dd_removed, dd_exact);
    if (*stats) return cmd_stats(st_in, st_out);
    if (*train_cmd) {
      if (tr_loss == "batch_all") {
        tr_config.loss = LossKind::batch_all_triplet;
      } else if (tr_loss == "pairwise") {
        tr_config.loss = LossKind::pairwise_contrastive;
      } else {
        throw ValidationError("unknown loss '" + tr_loss + "'");
      }
      if (tr_distance == "euclidean") {
        tr_config.distance = Distance::euclidean;
      } else if (tr_distance == "cosine") {
        tr_config.distance = Distance::cosine;
      } else {
        throw ValidationError("unknown distance '" + tr_distance + "'");
      }
      tr_config.averaging = tr_positive_only ? TripletAveraging::positive_only
                                             : TripletAveraging::all_valid;
      return cmd_train(tr_corpus, tr_validation, tr_out, tr_history, tr_init,
                       tr_config, tr_hash_dim, tr_dim, tr_normalize);
    }
    if (*encode_cmd) {
      return cmd_encode(en_model, en_random_opt->count() > 0, en_seed,
                        en_hash_dim, en_dim, en_in, en_out, en_format);
    }
    if (*cluster) {
      return cmd_cluster(cl_emb, cl_labels, cl_seed, cl_opts, cl_out, cl_run,
                         cl_name);
    }
    if (*classify) {
      return cmd_classify(cf_train_emb, cf_train_labels, cf_test_emb,
                          cf_test_labels, cf_classifier, cf_seed, cf_out,
                          cf_run, cf_confusion, cf_name);
    }
    if (*report) return cmd_report(rp_runs, rp_pairs, rp_metric, rp_out);
    if (*project) return cmd_project(pj_emb, pj_labels, pj_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
