#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "sembed/corpus/record.hpp"
#include "sembed/encoder/embedding.hpp"
#include "sembed/encoder/model.hpp"
#include "sembed/report/run_record.hpp"
#include "sembed/util/io.hpp"

using namespace sembed;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SEMBED_FIXTURE_DIR;
const std::string kCli = SEMBED_CLI_PATH;

struct CommandResult {
  int exit_code = -1;
  std::string stdout_text;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("sembed_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CommandResult run(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  std::string cmd = "SOURCE_DATE_EPOCH=1700000000 " + kCli + " " + args +
                    " > " + out.string() + " 2> " +
                    (work_dir() / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.stdout_text = read_file_bytes(out);
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("extract produces the golden corpus byte-for-byte") {
  fs::path out = work_dir() / "extract.jsonl";
  CommandResult r =
      run("extract --input " + q(kFixtures / "articles") + " --out " + q(out));
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("accepted=2") != std::string::npos);
  CHECK(r.stdout_text.find("rejected=1") != std::string::npos);
  CHECK(read_file_bytes(out) ==
        read_file_bytes(kFixtures / "golden" / "extracted.jsonl"));
}

TEST_CASE("extract flags partial failures with exit 2") {
  fs::path out = work_dir() / "broken.jsonl";
  CommandResult r =
      run("extract --input " + q(kFixtures / "broken") + " --out " + q(out));
  CHECK(r.exit_code == 2);
  // The healthy file was still processed.
  Corpus corpus = read_corpus(out);
  CHECK(corpus.size() == 13);
}

TEST_CASE("extract of an empty directory warns and exits 0") {
  fs::path empty = work_dir() / "empty_dir";
  fs::create_directories(empty);
  fs::path out = work_dir() / "empty.jsonl";
  CommandResult r = run("extract --input " + q(empty) + " --out " + q(out));
  CHECK(r.exit_code == 0);
  CHECK(read_file_bytes(out).empty());
}

TEST_CASE("split validates ratios and is reproducible") {
  fs::path corpus = work_dir() / "extract.jsonl";
  if (!fs::exists(corpus)) {
    run("extract --input " + q(kFixtures / "articles") + " --out " + q(corpus));
  }
  fs::path t1 = work_dir() / "t1.jsonl", v1 = work_dir() / "v1.jsonl",
           s1 = work_dir() / "s1.jsonl";
  fs::path t2 = work_dir() / "t2.jsonl", v2 = work_dir() / "v2.jsonl",
           s2 = work_dir() / "s2.jsonl";
  std::string common =
      "split --in " + q(corpus) + " --ratios 0.6,0.2,0.2 --seed 7";
  CHECK(run(common + " --out-train " + q(t1) + " --out-validation " + q(v1) +
            " --out-test " + q(s1))
            .exit_code == 0);
  CHECK(run(common + " --out-train " + q(t2) + " --out-validation " + q(v2) +
            " --out-test " + q(s2))
            .exit_code == 0);
  CHECK(read_file_bytes(t1) == read_file_bytes(t2));
  CHECK(read_file_bytes(v1) == read_file_bytes(v2));
  CHECK(read_file_bytes(s1) == read_file_bytes(s2));

  CommandResult bad = run("split --in " + q(corpus) +
                          " --ratios 0.5,0.5,0.2 --seed 1 --out-train " +
                          q(t1) + " --out-validation " + q(v1) +
                          " --out-test " + q(s1));
  CHECK(bad.exit_code == 1);
}

TEST_CASE("dedup reports the fixture conflict count") {
  fs::path corpus = work_dir() / "extract.jsonl";
  if (!fs::exists(corpus)) {
    run("extract --input " + q(kFixtures / "articles") + " --out " + q(corpus));
  }
  fs::path kept = work_dir() / "kept.jsonl";
  fs::path removed = work_dir() / "removed.jsonl";
  CommandResult r = run("dedup --in " + q(corpus) + " --out " + q(kept) +
                        " --removed-out " + q(removed));
  CHECK(r.exit_code == 0);
  // One sentence text appears under two labels in the fixtures.
  CHECK(r.stdout_text.find("removed\t2") != std::string::npos);
  CHECK(read_corpus(kept).size() == 23);
  CHECK(read_corpus(removed).size() == 2);
}

TEST_CASE("stats emits the tab-separated distribution") {
  fs::path corpus = work_dir() / "extract.jsonl";
  if (!fs::exists(corpus)) {
    run("extract --input " + q(kFixtures / "articles") + " --out " + q(corpus));
  }
  CommandResult r = run("stats --in " + q(corpus));
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("methods\t6\t24.00") != std::string::npos);
}

TEST_CASE("train, encode, cluster, classify, project pipeline") {
  fs::path corpus = work_dir() / "extract.jsonl";
  if (!fs::exists(corpus)) {
    run("extract --input " + q(kFixtures / "articles") + " --out " + q(corpus));
  }
  fs::path model = work_dir() / "model.stpm";
  fs::path history = work_dir() / "history.jsonl";
  CommandResult tr = run("train --corpus " + q(corpus) + " --validation " +
                         q(corpus) + " --out " + q(model) + " --history " +
                         q(history) +
                         " --epochs 2 --batch-size 8 --seed 3 --hash-dim 512 "
                         "--dim 8 --lr 0.01");
  CHECK(tr.exit_code == 0);
  CHECK(fs::exists(model));
  CHECK(fs::exists(history));

  // History holds one line per step plus one per epoch.
  std::ifstream hist(history);
  std::size_t lines = 0, epoch_lines = 0;
  std::string line;
  while (std::getline(hist, line)) {
    ++lines;
    if (line.find("\"type\":\"epoch\"") != std::string::npos) ++epoch_lines;
  }
  CHECK(epoch_lines == 2);
  CHECK(lines == 2 + 2 * ((25 + 7) / 8));

  fs::path emb = work_dir() / "emb.semb";
  CommandResult en =
      run("encode --model " + q(model) + " --in " + q(corpus) + " --out " + q(emb));
  CHECK(en.exit_code == 0);
  EmbeddingMatrix loaded = load_embeddings(emb);
  CHECK(loaded.rows == 25);
  CHECK(loaded.dim == 8);

  // Baseline encode twice: byte-identical files.
  fs::path b1 = work_dir() / "b1.semb";
  fs::path b2 = work_dir() / "b2.semb";
  CHECK(run("encode --random-baseline 5 --hash-dim 512 --dim 8 --in " +
            q(corpus) + " --out " + q(b1))
            .exit_code == 0);
  CHECK(run("encode --random-baseline 5 --hash-dim 512 --dim 8 --in " +
            q(corpus) + " --out " + q(b2))
            .exit_code == 0);
  CHECK(read_file_bytes(b1) == read_file_bytes(b2));

  // TSV export round-trips through the importer.
  fs::path tsv = work_dir() / "emb.tsv";
  CHECK(run("encode --model " + q(model) + " --in " + q(corpus) + " --out " +
            q(tsv) + " --format tsv")
            .exit_code == 0);
  EmbeddingMatrix imported = import_embeddings(tsv);
  CHECK(imported.values == loaded.values);

  fs::path cluster_run = work_dir() / "cluster_run.json";
  CommandResult cl = run("cluster --emb " + q(emb) + " --labels " + q(corpus) +
                         " --seed 11 --out " + q(work_dir() / "cluster.tsv") +
                         " --run-out " + q(cluster_run));
  CHECK(cl.exit_code == 0);
  CHECK(cl.stdout_text.find("ari\t") != std::string::npos);
  RunRecord cluster_rec = read_run_record(cluster_run);
  CHECK(cluster_rec.command == "cluster");
  CHECK(cluster_rec.eval.get("ami").has_value());

  // Classification runs on the deduped corpus: with cross-label duplicate
  // texts removed, every train = test query matches itself at distance 0.
  fs::path deduped = work_dir() / "pipeline_dedup.jsonl";
  CHECK(run("dedup --in " + q(corpus) + " --out " + q(deduped)).exit_code == 0);
  fs::path demb = work_dir() / "dedup.semb";
  CHECK(run("encode --model " + q(model) + " --in " + q(deduped) + " --out " +
            q(demb)).exit_code == 0);
  fs::path classify_run = work_dir() / "classify_run.json";
  CommandResult cf = run("classify --train-emb " + q(demb) +
                         " --train-labels " + q(deduped) + " --test-emb " +
                         q(demb) + " --test-labels " + q(deduped) +
                         " --classifier knn --run-out " + q(classify_run));
  CHECK(cf.exit_code == 0);
  CHECK(cf.stdout_text.find("f1_micro\t100.00") != std::string::npos);

  fs::path proj = work_dir() / "proj.tsv";
  CommandResult pj = run("project --emb " + q(emb) + " --labels " + q(corpus) +
                         " --out " + q(proj));
  CHECK(pj.exit_code == 0);
  std::string proj_text = read_file_bytes(proj);
  CHECK(proj_text.rfind("x\ty\tlabel\n", 0) == 0);
  CHECK(std::count(proj_text.begin(), proj_text.end(), '\n') == 26);

  // Row-count mismatch between embeddings and labels is a usage error.
  fs::path small = work_dir() / "small.jsonl";
  Corpus all = read_corpus(corpus);
  Corpus head(all.begin(), all.begin() + 5);
  write_corpus(small, head);
  CommandResult mismatch =
      run("cluster --emb " + q(emb) + " --labels " + q(small) + " --seed 1");
  CHECK(mismatch.exit_code == 1);
}

TEST_CASE("train with zero epochs saves the baseline unchanged") {
  fs::path corpus = work_dir() / "extract.jsonl";
  if (!fs::exists(corpus)) {
    run("extract --input " + q(kFixtures / "articles") + " --out " + q(corpus));
  }
  fs::path model = work_dir() / "passthrough.stpm";
  CommandResult r = run("train --corpus " + q(corpus) + " --out " + q(model) +
                        " --epochs 0 --seed 21 --hash-dim 256 --dim 4");
  CHECK(r.exit_code == 0);
  EncoderModel saved = load_model(model);
  EncoderModel expected = random_baseline_model(21, {.hash_dim = 256}, 4);
  CHECK(saved.projection == expected.projection);
}

TEST_CASE("deterministic re-runs produce byte-identical outputs") {
  fs::path corpus = work_dir() / "extract.jsonl";
  if (!fs::exists(corpus)) {
    run("extract --input " + q(kFixtures / "articles") + " --out " + q(corpus));
  }
  fs::path m1 = work_dir() / "m1.stpm", m2 = work_dir() / "m2.stpm";
  fs::path h1 = work_dir() / "h1.jsonl", h2 = work_dir() / "h2.jsonl";
  std::string train_args = "train --corpus " + q(corpus) +
                           " --epochs 2 --batch-size 4 --seed 13 "
                           "--hash-dim 256 --dim 4 --lr 0.01";
  CHECK(run(train_args + " --out " + q(m1) + " --history " + q(h1)).exit_code ==
        0);
  CHECK(run(train_args + " --out " + q(m2) + " --history " + q(h2)).exit_code ==
        0);
  CHECK(read_file_bytes(m1) == read_file_bytes(m2));
  CHECK(read_file_bytes(h1) == read_file_bytes(h2));
}

TEST_CASE("report compares runs and validates metric keys") {
  // Hand-written run records carrying the published table values.
  fs::path fine = work_dir() / "fine.json";
  fs::path base = work_dir() / "base.json";
  atomic_write_file(fine,
                    "{\"run_id\":\"a\",\"command\":\"classify\","
                    "\"name\":\"csabstract\",\"config\":{\"classifier\":"
                    "\"rf\"},\"eval\":{\"f1_micro\":75.02}}\n");
  atomic_write_file(base,
                    "{\"run_id\":\"b\",\"command\":\"classify\","
                    "\"name\":\"csabstract\",\"config\":{\"classifier\":"
                    "\"rf\"},\"eval\":{\"f1_micro\":55.37}}\n");
  fs::path out = work_dir() / "report.tsv";
  CommandResult r = run("report --runs " + q(fine) + " " + q(base) +
                        " --pair fine_tuned=fine,baseline=base --out " + q(out));
  CHECK(r.exit_code == 0);
  std::string tsv = read_file_bytes(out);
  CHECK(tsv.find("csabstract\trf\tf1_micro\t75.02\t55.37\t35.49\n") !=
        std::string::npos);

  // Identical runs give a zero delta.
  CommandResult same =
      run("report --runs " + q(fine) + " --pair fine_tuned=fine,baseline=fine");
  CHECK(same.exit_code == 0);
  CHECK(same.stdout_text.find("0.00") != std::string::npos);

  // Mismatched metric keys exit 1.
  fs::path other = work_dir() / "other.json";
  atomic_write_file(other, "{\"run_id\":\"c\",\"command\":\"cluster\","
                           "\"name\":\"x\",\"eval\":{\"ari\":10.0}}\n");
  CommandResult bad = run("report --runs " + q(fine) + " " + q(other) +
                          " --pair fine_tuned=fine,baseline=other");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("custom keyword map reroutes section labels") {
  fs::path out = work_dir() / "custom_keywords.jsonl";
  CommandResult r = run("extract --input " + q(kFixtures / "articles") +
                        " --keywords " + q(kFixtures / "keywords_custom.tsv") +
                        " --out " + q(out));
  CHECK(r.exit_code == 0);
  // The custom map lacks "objective", so fixture_a (titled "Objective")
  // no longer covers all four target labels and is rejected; fixture_b
  // (titled "Aims") survives.
  Corpus corpus = read_corpus(out);
  CHECK(r.stdout_text.find("accepted=1") != std::string::npos);
  for (const auto& s : corpus) CHECK(s.article_id == "fixture_b");
}

TEST_CASE("a config file supplies defaults that flags override") {
  fs::path corpus = work_dir() / "extract.jsonl";
  if (!fs::exists(corpus)) {
    run("extract --input " + q(kFixtures / "articles") + " --out " + q(corpus));
  }
  fs::path config = work_dir() / "defaults.toml";
  atomic_write_file(config, "[split]\nratios=\"0.6,0.2,0.2\"\nseed=7\n");
  fs::path t1 = work_dir() / "cfg_t1.jsonl", v1 = work_dir() / "cfg_v1.jsonl",
           s1 = work_dir() / "cfg_s1.jsonl";
  CommandResult r = run("--config " + q(config) + " split --in " + q(corpus) +
                        " --out-train " + q(t1) + " --out-validation " +
                        q(v1) + " --out-test " + q(s1));
  CHECK(r.exit_code == 0);
  // Same outcome as passing the flags directly.
  fs::path t2 = work_dir() / "cfg_t2.jsonl", v2 = work_dir() / "cfg_v2.jsonl",
           s2 = work_dir() / "cfg_s2.jsonl";
  run("split --in " + q(corpus) + " --ratios 0.6,0.2,0.2 --seed 7 "
      "--out-train " + q(t2) + " --out-validation " + q(v2) + " --out-test " +
      q(s2));
  CHECK(read_file_bytes(t1) == read_file_bytes(t2));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("split --in nowhere.jsonl").exit_code == 1);  // missing flags
  CHECK(run("encode --in nowhere.jsonl --out x.semb").exit_code == 1);
  CHECK(run("nonsense").exit_code == 1);
}
