#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citorch/metrics.hpp"
#include "citorch/rational.hpp"

namespace citorch {

enum class Metric { c_over_h2, a50pc, a50 };
enum class Tail { lower, upper };

std::string_view to_string(Metric metric);
std::string_view to_string(Tail tail);
Metric parse_metric(std::string_view text);

/// The metric as an exact value, or none when undefined for this author.
std::optional<Rational> metric_value(const AuthorMetrics& m, Metric metric);

struct TailSpec {
  Metric metric = Metric::c_over_h2;
  Tail tail = Tail::lower;
  Rational percentile{1};  // percent, in (0, 50]
  std::set<std::string, std::less<>> excluded_fields;
};

/// Nearest-rank percentile: the element at 1-based rank ceil(p/100 * n) of
/// the ascending-sorted values. Throws std::invalid_argument on empty input
/// or p outside (0, 100).
Rational percentile_threshold(std::span<const Rational> values, const Rational& percent);

struct DistributionSummary {
  Rational median;
  Rational q1;
  Rational q3;
};

struct FieldShare {
  std::string field_id;
  std::string field_name;
  std::uint64_t cohort_count = 0;
  std::uint64_t tail_count = 0;
  double cohort_share = 0.0;
  double tail_share = 0.0;
  double fold = 0.0;  // tail_share / cohort_share
};

/// Fold enrichment from two shares; 0 when the cohort share is 0.
double fold_enrichment(double cohort_share, double tail_share);

struct TailMember {
  std::string author_id;
  std::string field_id;
  Rational value;
};

struct TailReport {
  TailSpec spec;
  Rational threshold;
  std::uint64_t cohort_size = 0;    // after field exclusion
  std::vector<TailMember> members;  // sorted by author_id
  DistributionSummary summary;
  std::vector<FieldShare> allocation;  // sorted by field_id
};

/// Threshold on the post-exclusion cohort, then strict membership: lower
/// tails take value < threshold at p, upper tails value > threshold at
/// 100 - p. Authors for whom the metric is undefined or who carry no field
/// are left out of the cohort. Throws std::invalid_argument when nothing
/// remains.
TailReport tail_members(std::span<const AuthorMetrics> metrics, const TailSpec& spec);

/// Fields whose fold exceeds `fold_cutoff` and that have at least one tail member.
std::set<std::string> enrichment_flags(const TailReport& report, double fold_cutoff = 1.5);

struct Histogram {
  Rational min;
  Rational width;
  std::vector<std::uint64_t> counts;  // bin i covers [min + i*width, min + (i+1)*width)
  std::uint64_t below = 0;
  std::uint64_t above = 0;  // includes values equal to max

  Rational bin_start(std::size_t i) const { return min + Rational(static_cast<std::int64_t>(i)) * width; }
  std::uint64_t excluded() const { return below + above; }
};

/// Left-closed right-open bins over [min, max). The last bin is truncated at max.
Histogram histogram(std::span<const Rational> values, const Rational& bin_width, const Rational& min,
                    const Rational& max);

struct ContingencyTable {
  std::uint64_t a = 0;  // in tail A and tail B
  std::uint64_t b = 0;  // in A only
  std::uint64_t c = 0;  // in B only
  std::uint64_t d = 0;  // in neither
  double odds_ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool degenerate = false;  // some cell is zero; OR/CI are not finite estimates

  std::uint64_t total() const { return a + b + c + d; }
};

/// Odds ratio (a*d)/(b*c) with the Woolf 95% interval
/// exp(ln OR ± 1.96 sqrt(1/a + 1/b + 1/c + 1/d)). No continuity correction:
/// any zero cell marks the table degenerate.
ContingencyTable contingency(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

/// Joint tail membership over the cohort left after removing both specs'
/// excluded fields. Thresholds are recomputed on that shared cohort.
ContingencyTable cooccurrence(std::span<const AuthorMetrics> metrics, const TailSpec& spec_a, const TailSpec& spec_b);

/// Rounds to `digits` significant figures and prints without trailing zeros
/// ("6.4", "0.09", "1.5").
std::string format_significant(double value, int digits = 2);

}  // namespace citorch
