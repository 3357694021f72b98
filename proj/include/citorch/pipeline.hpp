#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "citorch/cohort.hpp"
#include "citorch/ingest.hpp"
#include "citorch/metrics.hpp"
#include "citorch/stats.hpp"
#include "citorch/synth.hpp"

namespace citorch {

struct HistogramRange {
  Rational min;
  Rational max;
  Rational width;
};

struct RunConfig {
  CorpusPaths inputs;
  std::filesystem::path out_dir;
  EligibilityConfig eligibility;
  MetricsConfig metrics;
  /// Field ids or names removed from the a50pc and a50 tails. The default
  /// entry is matched by name against the taxonomy.
  std::vector<std::string> exclude_fields{"Physics & Astronomy"};
  Rational percentile{1};
  double fold_cutoff = 1.5;
  std::map<Metric, HistogramRange> histograms{
      {Metric::c_over_h2, {Rational(0), Rational(20), Rational(1, 10)}},
      {Metric::a50pc, {Rational(0), Rational(201), Rational(1)}},
      {Metric::a50, {Rational(1), Rational(41), Rational(1)}},
  };
  std::vector<std::pair<Metric, Metric>> cooccurrence_pairs{
      {Metric::c_over_h2, Metric::a50pc},
      {Metric::c_over_h2, Metric::a50},
      {Metric::a50pc, Metric::a50},
  };
};

/// Stage that failed, for single-line error reporting.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunSummary {
  std::size_t n_authors = 0;
  std::size_t n_eligible = 0;
  std::vector<TailReport> tails;
  std::vector<std::pair<std::pair<Metric, Metric>, ContingencyTable>> cooccurrence;
  std::vector<std::string> files_written;  // relative to out_dir, sorted
  std::map<std::string, double> timings;   // stage -> seconds
  long peak_rss_kb = 0;
};

/// The tail specs a RunConfig implies: c_over_h2 lower tail over every
/// field, a50pc lower and a50 upper tails with exclusions, all at
/// `percentile`. Exclusions are resolved against the taxonomy.
std::vector<TailSpec> default_tail_specs(const RunConfig& cfg, const FieldTaxonomy& taxonomy);

/// Ingest -> eligibility -> metrics -> tails -> reports. Writes metrics.csv,
/// tail_/allocation_/hist_<metric>.csv, tails.csv, cooccur.csv and
/// manifest.json into out_dir. Throws PipelineError naming the stage.
RunSummary run_pipeline(const RunConfig& cfg);

/// Reads the member ids of every tail_<metric>.csv in `run_dir`.
std::map<Metric, std::set<std::string>> read_tail_members(const std::filesystem::path& run_dir);

/// Writes evaluation.csv for the scores and returns its path.
std::filesystem::path write_evaluation(const std::vector<DetectionScore>& scores, const std::filesystem::path& dir);

/// Peak resident set size of this process in kilobytes.
long peak_rss_kb();

}  // namespace citorch
