#include <doctest.h>

#include <json.hpp>

#include "citorch/pipeline.hpp"
#include "support.hpp"

using namespace citorch;
namespace fs = std::filesystem;

namespace {

fs::path small_corpus(const std::string& name) {
  const auto dir = citorch::testing::scratch_dir(name);
  SynthConfig cfg;
  cfg.seed = 9;
  cfg.n_background_authors = 1500;
  write_corpus(generate(cfg), dir);
  return dir;
}

RunConfig run_config(const fs::path& in, const fs::path& out) {
  RunConfig cfg;
  cfg.inputs = {in / "papers.csv", in / "authorships.csv", in / "citations.csv", in / "taxonomy.csv"};
  cfg.out_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("pipeline writes the full report set") {
  const auto in = small_corpus("pipe-in");
  const auto out = citorch::testing::scratch_dir("pipe-out");
  const RunSummary summary = run_pipeline(run_config(in, out));
  CHECK(summary.n_eligible > 0);
  for (const auto& f : summary.files_written) CHECK_MESSAGE(fs::exists(out / f), f);
  for (const char* f : {"metrics.csv", "tails.csv", "cooccur.csv", "manifest.json", "tail_c_over_h2.csv",
                        "allocation_a50.csv", "hist_a50pc.csv"}) {
    CHECK_MESSAGE(fs::exists(out / f), f);
  }
  const auto manifest = nlohmann::json::parse(citorch::testing::slurp(out / "manifest.json"));
  CHECK(manifest["counts"]["eligible_authors"] == summary.n_eligible);
  CHECK(manifest["memory"]["peak_rss_kb"].get<long>() > 0);
  CHECK(manifest["timings_seconds"].contains("metrics"));

  // Physics & Astronomy is left out of the a50pc and a50 tails by default.
  for (const auto& t : summary.tails) {
    if (t.spec.metric == Metric::c_over_h2) continue;
    CHECK(t.spec.excluded_fields.contains("F18"));
    for (const auto& m : t.members) CHECK(m.field_id != "F18");
  }
}

TEST_CASE("pipeline with a missing input names the path") {
  const auto in = small_corpus("pipe-missing");
  fs::remove(in / "citations.csv");
  try {
    (void)run_pipeline(run_config(in, citorch::testing::scratch_dir("pipe-missing-out")));
    FAIL("expected PipelineError");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "ingest");
    CHECK(std::string(e.what()).find("citations.csv") != std::string::npos);
  }
}

TEST_CASE("rerunning the same config reproduces the report files") {
  const auto in = small_corpus("pipe-rerun");
  const auto a = citorch::testing::scratch_dir("pipe-rerun-a");
  const auto b = citorch::testing::scratch_dir("pipe-rerun-b");
  const RunSummary sa = run_pipeline(run_config(in, a));
  (void)run_pipeline(run_config(in, b));
  for (const auto& f : sa.files_written) {
    if (f == "manifest.json") continue;
    CHECK_MESSAGE(citorch::testing::slurp(a / f) == citorch::testing::slurp(b / f), f);
  }
}
