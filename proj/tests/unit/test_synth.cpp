#include <doctest.h>

#include "citorch/pipeline.hpp"
#include "citorch/synth.hpp"
#include "support.hpp"

using namespace citorch;

namespace {

SynthConfig small_config(std::uint64_t seed = 5) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_background_authors = 1200;
  return cfg;
}

AuthorMetrics metrics_for(const CorpusIndex& idx, const std::string& author) {
  A50Workspace ws;
  return compute_author_metrics(idx, *idx.find_author(author), {}, ws);
}

}  // namespace

TEST_CASE("same seed gives the same corpus, different seed does not") {
  const SynthCorpus a = generate(small_config(5));
  const SynthCorpus b = generate(small_config(5));
  CHECK(a.papers == b.papers);
  CHECK(a.authorships == b.authorships);
  CHECK(a.citations == b.citations);
  CHECK(a.truth.rows == b.truth.rows);
  const SynthCorpus c = generate(small_config(6));
  CHECK_FALSE(c.citations == a.citations);
}

TEST_CASE("written files are byte-identical across runs and reload cleanly") {
  const auto d1 = citorch::testing::scratch_dir("synth-a");
  const auto d2 = citorch::testing::scratch_dir("synth-b");
  const SynthCorpus corpus = generate(small_config());
  write_corpus(corpus, d1);
  write_corpus(generate(small_config()), d2);
  for (const char* name : {"papers.csv", "authorships.csv", "citations.csv", "taxonomy.csv", "truth.csv"}) {
    CHECK_MESSAGE(citorch::testing::slurp(d1 / name) == citorch::testing::slurp(d2 / name), name);
  }
  IngestReport report;
  const CorpusIndex idx =
      load_corpus({d1 / "papers.csv", d1 / "authorships.csv", d1 / "citations.csv", d1 / "taxonomy.csv"}, &report);
  CHECK(idx.paper_count() == corpus.papers.size());
  CHECK(idx.citation_count() == corpus.citations.size());
  CHECK(idx.report().citations_unknown_paper == 0);
  CHECK(idx.report().duplicate_citations == 0);
  CHECK(idx.report().citations_self_loop == 0);

  std::ifstream truth_in(d1 / "truth.csv");
  CHECK(read_truth(truth_in).rows == corpus.truth.rows);
}

TEST_CASE("truth labels partition the authors") {
  const SynthCorpus corpus = generate(small_config());
  const CorpusIndex idx = corpus.index();
  CHECK(corpus.truth.rows.size() == idx.author_count());
  const SynthConfig cfg = small_config();
  CHECK(corpus.truth.authors_with(PlantLabel::self_citer).size() == cfg.n_self_citers);
  CHECK(corpus.truth.authors_with(PlantLabel::cartel_member).size() == cfg.n_cartels * cfg.cartel_size);
  CHECK(corpus.truth.authors_with(PlantLabel::hyperteam_member).size() == cfg.n_hyperteams * cfg.team_size);
  CHECK(corpus.taxonomy.size() == 176);
}

TEST_CASE("planted authors have their constructed metric values") {
  const SynthCorpus corpus = generate(small_config());
  const CorpusIndex idx = corpus.index();
  for (const auto& id : corpus.truth.authors_with(PlantLabel::self_citer)) {
    const AuthorMetrics m = metrics_for(idx, id);
    CHECK(m.h_index == 32);
    CHECK(*m.c_over_h2 <= Rational(3, 2));
    CHECK(*m.a50pc == 1);
  }
  for (const auto& id : corpus.truth.authors_with(PlantLabel::cartel_member)) {
    const AuthorMetrics m = metrics_for(idx, id);
    CHECK(m.h_index == 32);
    CHECK(*m.c_over_h2 <= Rational(3, 2));
    CHECK(*m.a50pc <= 2);
  }
  for (const auto& id : corpus.truth.authors_with(PlantLabel::hyperteam_member)) {
    CHECK(metrics_for(idx, id).a50 == 9);
  }
}

TEST_CASE("background authors never reach the a50 threshold") {
  const SynthCorpus corpus = generate(small_config());
  const CorpusIndex idx = corpus.index();
  for (const auto& row : corpus.truth.rows) {
    if (row.label != PlantLabel::background) continue;
    CHECK(a50_coauthors(idx, *idx.find_author(row.author_id)) == 0);
  }
}

TEST_CASE("infeasible configs are rejected") {
  SynthConfig cfg = small_config();
  cfg.joint_papers = 50;
  CHECK_THROWS_AS(validate(cfg), SynthConfigError);
  cfg = small_config();
  cfg.group_size_min = 30;
  CHECK_THROWS_AS(validate(cfg), SynthConfigError);
  cfg = small_config();
  cfg.plant_field_id = "F99";
  CHECK_THROWS_AS(generate(cfg), SynthConfigError);
}

TEST_CASE("evaluate_detection scores motifs") {
  GroundTruth truth;
  truth.rows = {{"b1", PlantLabel::background, {}},
                {"c1", PlantLabel::cartel_member, 1},
                {"h1", PlantLabel::hyperteam_member, 1},
                {"s1", PlantLabel::self_citer, {}}};
  std::map<Metric, std::set<std::string>> tails{{Metric::c_over_h2, {"s1", "c1", "b1"}}, {Metric::a50, {"h1"}}};
  const auto scores = evaluate_detection(truth, tails);
  bool saw_small = false, saw_team = false;
  for (const auto& s : scores) {
    if (s.motif == "small_scale" && s.metric == Metric::c_over_h2) {
      saw_small = true;
      CHECK(*s.recall == 1.0);
      CHECK(*s.precision == doctest::Approx(2.0 / 3.0));
    }
    if (s.motif == "hyperteam_member") {
      saw_team = true;
      CHECK(*s.recall == 1.0);
      CHECK(*s.precision == 1.0);
    }
    CHECK(s.metric != Metric::a50pc);  // tail not supplied
  }
  CHECK(saw_small);
  CHECK(saw_team);

  GroundTruth none;
  none.rows = {{"b1", PlantLabel::background, {}}};
  for (const auto& s : evaluate_detection(none, tails)) CHECK_FALSE(s.recall.has_value());
}
