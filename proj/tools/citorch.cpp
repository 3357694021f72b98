// citorch: citation-orchestration indicators over a publication corpus.
//
//   citorch synth --out corpus/ --seed 7
//   citorch run --input-dir corpus/ --out report/ --threads 8
//   citorch evaluate --truth corpus/truth.csv --run-dir report/
//   citorch ingest-check --input-dir corpus/
//
// Errors are reported as a single line on stderr:
//   citorch: error: stage=<stage>: <message>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>

#include "citorch/pipeline.hpp"

namespace {

using namespace citorch;

struct InputFlags {
  std::string dir;
  std::string papers;
  std::string authorships;
  std::string citations;
  std::string taxonomy;

  void attach(CLI::App* app) {
    app->add_option("--input-dir", dir, "Directory holding papers/authorships/citations/taxonomy.csv");
    app->add_option("--papers", papers, "papers.csv");
    app->add_option("--authorships", authorships, "authorships.csv");
    app->add_option("--citations", citations, "citations.csv");
    app->add_option("--taxonomy", taxonomy, "taxonomy.csv");
  }

  CorpusPaths resolve() const {
    auto pick = [&](const std::string& explicit_path, const char* name) -> std::filesystem::path {
      if (!explicit_path.empty()) return explicit_path;
      if (!dir.empty()) return std::filesystem::path(dir) / name;
      throw PipelineError("config", std::string("missing input: pass --input-dir or --") +
                                        std::string(name).substr(0, std::string(name).size() - 4));
    };
    return {pick(papers, "papers.csv"), pick(authorships, "authorships.csv"), pick(citations, "citations.csv"),
            pick(taxonomy, "taxonomy.csv")};
  }
};

int fail(const std::string& stage, std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  std::cerr << "citorch: error: stage=" << stage << ": " << message << '\n';
  return 1;
}

int ingest_check(const InputFlags& inputs) {
  IngestReport report;
  const CorpusIndex index = load_corpus(inputs.resolve(), &report);
  for (const auto& [name, stats] : report.files) {
    std::cout << name << ": rows_read=" << stats.rows_read << " emitted=" << stats.emitted;
    for (const auto& [reason, n] : stats.dropped) std::cout << " dropped_" << reason << '=' << n;
    std::cout << '\n';
  }
  const BuildReport& r = index.report();
  std::cout << "index: papers=" << index.paper_count() << " authors=" << index.author_count()
            << " authorships=" << index.authorship_count() << " citations=" << index.citation_count() << '\n'
            << "drops: duplicate_papers=" << r.duplicate_papers << " duplicate_authorships=" << r.duplicate_authorships
            << " authorships_unknown_paper=" << r.authorships_unknown_paper
            << " duplicate_citations=" << r.duplicate_citations
            << " citations_unknown_paper=" << r.citations_unknown_paper
            << " papers_unknown_subfield=" << r.papers_unknown_subfield << '\n'
            << "duration_seconds=" << report.duration_seconds << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Citation-orchestration indicators (C/h^2, A50%C, A50) over a publication corpus"};
  app.require_subcommand(1);

  InputFlags check_inputs;
  auto* check = app.add_subcommand("ingest-check", "Parse and index the input files, report counts and drops");
  check_inputs.attach(check);

  InputFlags run_inputs;
  RunConfig run_cfg;
  std::string out_dir;
  std::string pct = "1";
  std::vector<std::string> exclude;
  auto* run = app.add_subcommand("run", "Run the full indicator pipeline and write reports");
  run_inputs.attach(run);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--min-papers", run_cfg.eligibility.min_full_papers,
                  "Eligible authors have strictly more full papers than this")
      ->capture_default_str();
  run->add_option("--min-citations", run_cfg.eligibility.min_citations, "Minimum total citations")
      ->capture_default_str();
  run->add_option("--seed", run_cfg.eligibility.seed, "Seed for the field-assignment tie-break")->capture_default_str();
  run->add_option("--exclude-field", exclude,
                  "Field id or name left out of the a50pc/a50 tails (repeatable; default: Physics & Astronomy)");
  run->add_option("--pct", pct, "Tail percentile in (0, 50]")->capture_default_str();
  run->add_option("--a50-threshold", run_cfg.metrics.a50_threshold, "Shared-paper count a co-author must exceed")
      ->capture_default_str();
  run->add_option("--threads", run_cfg.metrics.threads, "Worker threads for the metrics stage")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_flag("--citing-full-only", run_cfg.metrics.citing_full_only, "Count only citations made by full papers");

  SynthConfig synth_cfg;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus with planted orchestration motifs");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_cfg.seed)->capture_default_str();
  synth->add_option("--background-authors", synth_cfg.n_background_authors)->capture_default_str();
  synth->add_option("--self-citers", synth_cfg.n_self_citers)->capture_default_str();
  synth->add_option("--cartels", synth_cfg.n_cartels)->capture_default_str();
  synth->add_option("--cartel-size", synth_cfg.cartel_size)->capture_default_str();
  synth->add_option("--hyperteams", synth_cfg.n_hyperteams)->capture_default_str();
  synth->add_option("--team-size", synth_cfg.team_size)->capture_default_str();
  synth->add_option("--joint-papers", synth_cfg.joint_papers)->capture_default_str();
  synth->add_option("--group-min", synth_cfg.group_size_min)->capture_default_str();
  synth->add_option("--group-max", synth_cfg.group_size_max)->capture_default_str();
  synth->add_option("--team-min", synth_cfg.team_size_min)->capture_default_str();
  synth->add_option("--team-max", synth_cfg.team_size_max)->capture_default_str();
  synth->add_option("--papers-min", synth_cfg.papers_per_author_min)->capture_default_str();
  synth->add_option("--papers-max", synth_cfg.papers_per_author_max)->capture_default_str();
  synth->add_option("--refs-min", synth_cfg.refs_per_paper_min)->capture_default_str();
  synth->add_option("--refs-max", synth_cfg.refs_per_paper_max)->capture_default_str();
  synth->add_option("--attachment-exponent", synth_cfg.attachment_exponent)->capture_default_str();

  std::string truth_path;
  std::string run_dir;
  std::string eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "Score planted motifs against the tails of a finished run");
  evaluate->add_option("--truth", truth_path, "truth.csv written by synth")->required();
  evaluate->add_option("--run-dir", run_dir, "Output directory of a run")->required();
  evaluate->add_option("--out", eval_out, "Where to write evaluation.csv (default: the run directory)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return ingest_check(check_inputs);

    if (run->parsed()) {
      run_cfg.inputs = run_inputs.resolve();
      run_cfg.out_dir = out_dir;
      try {
        run_cfg.percentile = Rational::parse(pct);
      } catch (const std::exception& e) {
        return fail("config", std::string("--pct: ") + e.what());
      }
      if (run_cfg.percentile <= Rational(0) || run_cfg.percentile > Rational(50)) {
        return fail("config", "--pct must lie in (0, 50]");
      }
      if (!exclude.empty()) run_cfg.exclude_fields = exclude;
      const RunSummary summary = run_pipeline(run_cfg);
      std::cout << "authors=" << summary.n_authors << " eligible=" << summary.n_eligible << '\n';
      for (const auto& t : summary.tails) {
        std::cout << to_string(t.spec.metric) << ": threshold=" << t.threshold.to_string()
                  << " cohort=" << t.cohort_size << " members=" << t.members.size() << '\n';
      }
      std::cout << "wrote " << summary.files_written.size() << " files to " << out_dir << '\n';
      return 0;
    }

    if (synth->parsed()) {
      const SynthCorpus corpus = generate(synth_cfg);
      write_corpus(corpus, synth_out);
      std::cout << "papers=" << corpus.papers.size() << " authorships=" << corpus.authorships.size()
                << " citations=" << corpus.citations.size() << " authors=" << corpus.truth.rows.size() << '\n';
      return 0;
    }

    if (evaluate->parsed()) {
      std::ifstream in(truth_path, std::ios::binary);
      if (!in) return fail("evaluate", "cannot open input file: " + truth_path);
      const GroundTruth truth = read_truth(in);
      const auto scores = evaluate_detection(truth, read_tail_members(run_dir));
      const auto path = write_evaluation(scores, eval_out.empty() ? run_dir : eval_out);
      std::ifstream written(path);
      std::cout << written.rdbuf();
      return 0;
    }
  } catch (const PipelineError& e) {
    return fail(e.stage(), e.what());
  } catch (const SynthConfigError& e) {
    return fail("synth", e.what());
  } catch (const IngestError& e) {
    return fail("ingest", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
