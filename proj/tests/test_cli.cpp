// End-to-end tests that drive the tlc and tlc_fixtures binaries.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr

  bool contains(const std::string& needle) const {
    return output.find(needle) != std::string::npos;
  }
};

CmdResult run(const std::string& command) {
  CmdResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe)) result.output += buffer;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

const std::string kTlc = TLC_BIN;
const std::string kFixtures = TLC_FIXTURES_BIN;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t lines = 0;
  for (const char c : text) lines += c == '\n';
  return lines;
}

// Shared blob fixture + flags for the pipeline commands.
struct BlobWorkspace {
  tlc::test::TempDir dir{"cli"};
  std::string flags;

  BlobWorkspace() {
    const auto fx = run(kFixtures + " blobs --out " + (dir.path() / "fx").string() +
                        " --per-class 40 --dim 16 --seed 5");
    REQUIRE(fx.exit_code == 0);
    flags = " --manifest " + (dir.path() / "fx" / "manifest.tsv").string() +
            " --provider precomputed --source " +
            (dir.path() / "fx" / "embeddings.emb").string() +
            " --dim 16 --steps 300 --train-batch 32";
  }
};

std::string result_field(const std::string& output, const std::string& key) {
  const auto pos = output.find(key + "=");
  REQUIRE(pos != std::string::npos);
  const auto begin = pos + key.size() + 1;
  auto end = output.find_first_of(" \n", begin);
  if (end == std::string::npos) end = output.size();
  return output.substr(begin, end - begin);
}

}  // namespace

TEST_CASE("ingest prints the class distribution") {
  tlc::test::TempDir dir("ingest");
  const auto fx = run(kFixtures + " counts --out " + dir.path().string());
  REQUIRE(fx.exit_code == 0);
  const auto r =
      run(kTlc + " ingest " + (dir.path() / "manifest.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.contains("cbsd: 398"));
  CHECK(r.contains("gmd: 309"));
  CHECK(r.contains("healthy: 300"));
  CHECK(r.contains("RESULT: ingest ok name=synthetic-counts classes=6 "
                   "samples=2196"));
}

TEST_CASE("ingest rejects an unknown label with exit 2") {
  tlc::test::TempDir dir("ingest_bad");
  std::ofstream(dir.file("bad.tsv"))
      << "name=x;labels=a,b\ns0\tsrc\ta\ns1\tsrc\tmystery\n";
  const auto r = run(kTlc + " ingest " + dir.file("bad.tsv").string());
  CHECK(r.exit_code == 2);
  CHECK(r.contains("unknown label"));
  CHECK(r.contains(":3"));  // line number
  CHECK(r.contains("RESULT: ingest error"));
}

TEST_CASE("ingest on a leaflet-style manifest shows 2500 per class") {
  tlc::test::TempDir dir("ingest_leaflet");
  const auto fx = run(kFixtures + " counts --out " + dir.path().string() +
                      " --counts 2500,2500,2500,2500,2500,2500");
  REQUIRE(fx.exit_code == 0);
  const auto r =
      run(kTlc + " ingest " + (dir.path() / "manifest.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.contains("cbsd: 2500"));
  CHECK(r.contains("samples=15000"));
}

TEST_CASE("extract computes once and then serves the cache") {
  tlc::test::TempDir dir("extract");
  const auto fx = run(kFixtures + " images --out " +
                      (dir.path() / "imgs").string() +
                      " --per-class 10 --seed 3");
  REQUIRE(fx.exit_code == 0);
  const std::string base =
      kTlc + " extract --manifest " +
      (dir.path() / "imgs" / "manifest.tsv").string() + " --dim 32 --cache " +
      dir.file("e.emb").string();

  const auto first = run(base);
  CHECK(first.exit_code == 0);
  CHECK(first.contains(
      "RESULT: extract ok entries=60 dim=32 cached=0 computed=60"));

  const auto second = run(base);
  CHECK(second.exit_code == 0);
  CHECK(second.contains(
      "RESULT: extract ok entries=60 dim=32 cached=60 computed=0"));
}

TEST_CASE("extract fails with exit 3 naming the unreadable sample") {
  tlc::test::TempDir dir("extract_bad");
  std::ofstream(dir.file("m.tsv"))
      << "name=x;labels=a\nlost\t" << (dir.path() / "missing.ppm").string()
      << "\ta\n";
  const auto r = run(kTlc + " extract --manifest " + dir.file("m.tsv").string() +
                     " --dim 8 --cache " + dir.file("e.emb").string());
  CHECK(r.exit_code == 3);
  CHECK(r.contains("lost"));
  CHECK(r.contains("RESULT: extract error"));
}

TEST_CASE("sweep writes a 15-row csv over the default grid") {
  BlobWorkspace ws;
  const auto out = ws.dir.path() / "run";
  const auto r =
      run(kTlc + " sweep" + ws.flags + " --seed 7 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.contains("RESULT: sweep ok cells=15"));

  const std::string csv = slurp(out / "sweep.csv");
  CHECK(line_count(csv) == 16);
  CHECK(csv.rfind("split_label,head,seed,overall_accuracy\n", 0) == 0);
  CHECK(std::filesystem::exists(out / "sweep.json"));
  CHECK(std::filesystem::exists(out / "sweep_plot_data.json"));
}

TEST_CASE("sweep respects --splits and --heads") {
  BlobWorkspace ws;
  const auto out = ws.dir.path() / "single";
  const auto r = run(kTlc + " sweep" + ws.flags +
                     " --splits 80-10 --heads softmax --seed 2 --out " +
                     out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.contains("RESULT: sweep ok cells=1"));
  CHECK(line_count(slurp(out / "sweep.csv")) == 2);
}

TEST_CASE("sweeps with equal seeds produce byte-identical json") {
  BlobWorkspace ws;
  const auto a = ws.dir.path() / "a";
  const auto b = ws.dir.path() / "b";
  const auto c = ws.dir.path() / "c";
  REQUIRE(run(kTlc + " sweep" + ws.flags + " --seed 9 --out " + a.string())
              .exit_code == 0);
  REQUIRE(run(kTlc + " sweep" + ws.flags + " --seed 9 --out " + b.string())
              .exit_code == 0);
  REQUIRE(run(kTlc + " sweep" + ws.flags + " --seed 10 --out " + c.string())
              .exit_code == 0);
  CHECK(slurp(a / "sweep.json") == slurp(b / "sweep.json"));
  CHECK(slurp(a / "sweep.json") != slurp(c / "sweep.json"));
}

TEST_CASE("train then eval reproduces the in-memory accuracy exactly") {
  BlobWorkspace ws;
  const auto out = ws.dir.path() / "m";
  const std::string common =
      ws.flags + " --seed 4 --head softmax --split 80-10 --out " +
      out.string();
  const auto train = run(kTlc + " train" + common);
  CHECK(train.exit_code == 0);
  CHECK(train.contains("RESULT: train ok"));
  const std::string trained_accuracy =
      result_field(train.output, "test_accuracy");
  CHECK(std::stod(trained_accuracy) >= 0.95);

  const auto eval = run(kTlc + " eval" + common);
  CHECK(eval.exit_code == 0);
  CHECK(eval.contains("RESULT: eval ok"));
  CHECK(result_field(eval.output, "accuracy") == trained_accuracy);

  // A second eval of the stored model is byte-stable too.
  const auto again = run(kTlc + " eval" + common);
  CHECK(result_field(again.output, "accuracy") == trained_accuracy);
}

TEST_CASE("eval with a mismatched embedding dimension exits 4") {
  BlobWorkspace ws;
  const auto out = ws.dir.path() / "m";
  REQUIRE(run(kTlc + " train" + ws.flags + " --seed 4 --head svm --out " +
              out.string())
              .exit_code == 0);

  // Same manifest ids, but vectors of width 8.
  const auto fx = run(kFixtures + " blobs --out " +
                      (ws.dir.path() / "narrow").string() +
                      " --per-class 40 --dim 8 --seed 5");
  REQUIRE(fx.exit_code == 0);
  const auto r = run(
      kTlc + " eval --manifest " +
      (ws.dir.path() / "narrow" / "manifest.tsv").string() +
      " --provider precomputed --source " +
      (ws.dir.path() / "narrow" / "embeddings.emb").string() +
      " --dim 8 --seed 4 --head svm --out " + out.string() +
      " --model " + (out / "model_svm.hed").string());
  CHECK(r.exit_code == 4);
  CHECK(r.contains("dimension mismatch"));
  CHECK(r.contains("RESULT: eval error"));
}

TEST_CASE("config file drives the sweep, flags override it") {
  BlobWorkspace ws;
  const auto out = ws.dir.path() / "cfg_run";
  const auto cfg = ws.dir.file("run.cfg");
  std::ofstream(cfg) << "manifest = "
                     << (ws.dir.path() / "fx" / "manifest.tsv").string()
                     << "\nprovider = precomputed\nsource = "
                     << (ws.dir.path() / "fx" / "embeddings.emb").string()
                     << "\ndim = 16\nseed = 11\nsteps = 200\n"
                     << "train_batch = 32\nsplits = 80-10,60-30\n"
                     << "heads = svm,knn\nout = " << out.string() << "\n";
  const auto r = run(kTlc + " sweep --config " + cfg.string());
  CHECK(r.exit_code == 0);
  CHECK(r.contains("RESULT: sweep ok cells=4"));

  const auto overridden =
      run(kTlc + " sweep --config " + cfg.string() + " --heads svm --out " +
          (ws.dir.path() / "cfg_run2").string());
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.contains("RESULT: sweep ok cells=2"));

  std::ofstream(ws.dir.file("bad.cfg")) << "no_such_key = 1\n";
  const auto bad =
      run(kTlc + " sweep --config " + ws.dir.file("bad.cfg").string());
  CHECK(bad.exit_code == 2);
  CHECK(bad.contains("unknown key"));
}

TEST_CASE("report re-emits csv and plot data from a sweep json") {
  BlobWorkspace ws;
  const auto out = ws.dir.path() / "run";
  REQUIRE(run(kTlc + " sweep" + ws.flags + " --splits 80-10 --seed 3 --out " +
              out.string())
              .exit_code == 0);
  const auto re = ws.dir.path() / "re";
  const auto r = run(kTlc + " report --in " + (out / "sweep.json").string() +
                     " --out " + re.string());
  CHECK(r.exit_code == 0);
  CHECK(r.contains("RESULT: report ok cells=3"));
  CHECK(line_count(slurp(re / "report.csv")) == 4);
  CHECK(std::filesystem::exists(re / "report_plot_data.json"));
  CHECK(slurp(re / "report.json") == slurp(out / "sweep.json"));

  const auto missing =
      run(kTlc + " report --in " + ws.dir.file("nope.json").string());
  CHECK(missing.exit_code == 2);
}
