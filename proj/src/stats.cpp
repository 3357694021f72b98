#include "citorch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace citorch {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::c_over_h2:
      return "c_over_h2";
    case Metric::a50pc:
      return "a50pc";
    case Metric::a50:
      break;
  }
  return "a50";
}

std::string_view to_string(Tail tail) { return tail == Tail::lower ? "lower" : "upper"; }

Metric parse_metric(std::string_view text) {
  if (text == "c_over_h2") return Metric::c_over_h2;
  if (text == "a50pc") return Metric::a50pc;
  if (text == "a50") return Metric::a50;
  throw std::invalid_argument("unknown metric: " + std::string(text));
}

std::optional<Rational> metric_value(const AuthorMetrics& m, Metric metric) {
  switch (metric) {
    case Metric::c_over_h2:
      return m.c_over_h2;
    case Metric::a50pc:
      if (!m.a50pc) return std::nullopt;
      return Rational(*m.a50pc);
    case Metric::a50:
      break;
  }
  return Rational(m.a50);
}

Rational percentile_threshold(std::span<const Rational> values, const Rational& percent) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sequence");
  if (percent <= Rational(0) || percent >= Rational(100)) {
    throw std::invalid_argument("percentile must lie in (0, 100), got " + percent.to_string());
  }
  const auto n = static_cast<std::int64_t>(values.size());
  const std::int64_t rank = (percent * Rational(n) / Rational(100)).ceil();  // 1-based, >= 1
  std::vector<Rational> sorted(values.begin(), values.end());
  auto nth = sorted.begin() + (rank - 1);
  std::nth_element(sorted.begin(), nth, sorted.end());
  return *nth;
}

double fold_enrichment(double cohort_share, double tail_share) {
  return cohort_share > 0.0 ? tail_share / cohort_share : 0.0;
}

TailReport tail_members(std::span<const AuthorMetrics> metrics, const TailSpec& spec) {
  struct Entry {
    const AuthorMetrics* author;
    Rational value;
  };
  std::vector<Entry> cohort;
  for (const auto& m : metrics) {
    if (!m.field_id || spec.excluded_fields.contains(*m.field_id)) continue;
    if (auto v = metric_value(m, spec.metric)) cohort.push_back({&m, *v});
  }
  if (cohort.empty()) {
    throw std::invalid_argument("empty cohort for " + std::string(to_string(spec.metric)) + " tail after exclusion");
  }

  std::vector<Rational> values;
  values.reserve(cohort.size());
  for (const auto& e : cohort) values.push_back(e.value);

  TailReport report;
  report.spec = spec;
  report.cohort_size = cohort.size();
  const Rational p = spec.tail == Tail::lower ? spec.percentile : Rational(100) - spec.percentile;
  report.threshold = percentile_threshold(values, p);
  report.summary = {percentile_threshold(values, Rational(50)), percentile_threshold(values, Rational(25)),
                    percentile_threshold(values, Rational(75))};

  std::map<std::string, FieldShare> fields;
  for (const auto& e : cohort) {
    FieldShare& f = fields[*e.author->field_id];
    ++f.cohort_count;
    const bool in_tail = spec.tail == Tail::lower ? e.value < report.threshold : e.value > report.threshold;
    if (in_tail) {
      ++f.tail_count;
      report.members.push_back({e.author->author_id, *e.author->field_id, e.value});
    }
  }
  std::sort(report.members.begin(), report.members.end(),
            [](const TailMember& x, const TailMember& y) { return x.author_id < y.author_id; });

  const double n_cohort = static_cast<double>(report.cohort_size);
  const double n_tail = static_cast<double>(report.members.size());
  for (auto& [field_id, f] : fields) {
    f.field_id = field_id;
    f.cohort_share = static_cast<double>(f.cohort_count) / n_cohort;
    f.tail_share = n_tail > 0 ? static_cast<double>(f.tail_count) / n_tail : 0.0;
    f.fold = fold_enrichment(f.cohort_share, f.tail_share);
    report.allocation.push_back(std::move(f));
  }
  return report;
}

std::set<std::string> enrichment_flags(const TailReport& report, double fold_cutoff) {
  std::set<std::string> out;
  for (const auto& f : report.allocation) {
    if (f.tail_count > 0 && f.fold > fold_cutoff) out.insert(f.field_id);
  }
  return out;
}

Histogram histogram(std::span<const Rational> values, const Rational& bin_width, const Rational& min,
                    const Rational& max) {
  if (bin_width <= Rational(0)) throw std::invalid_argument("histogram bin width must be positive");
  if (!(min < max)) throw std::invalid_argument("histogram range must satisfy min < max");
  Histogram h;
  h.min = min;
  h.width = bin_width;
  h.counts.assign(static_cast<std::size_t>(((max - min) / bin_width).ceil()), 0);
  for (const auto& v : values) {
    if (v < min) {
      ++h.below;
    } else if (v >= max) {
      ++h.above;
    } else {
      ++h.counts[static_cast<std::size_t>(((v - min) / bin_width).floor())];
    }
  }
  return h;
}

ContingencyTable contingency(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  ContingencyTable t{a, b, c, d};
  if (a == 0 || b == 0 || c == 0 || d == 0) {
    t.degenerate = true;
    const double num = static_cast<double>(a) * static_cast<double>(d);
    const double den = static_cast<double>(b) * static_cast<double>(c);
    t.odds_ratio = den > 0 ? num / den : (num > 0 ? INFINITY : NAN);
    t.ci_low = NAN;
    t.ci_high = NAN;
    return t;
  }
  const double da = static_cast<double>(a);
  const double db = static_cast<double>(b);
  const double dc = static_cast<double>(c);
  const double dd = static_cast<double>(d);
  t.odds_ratio = (da * dd) / (db * dc);
  const double se = std::sqrt(1.0 / da + 1.0 / db + 1.0 / dc + 1.0 / dd);
  const double log_or = std::log(t.odds_ratio);
  t.ci_low = std::exp(log_or - 1.96 * se);
  t.ci_high = std::exp(log_or + 1.96 * se);
  return t;
}

ContingencyTable cooccurrence(std::span<const AuthorMetrics> metrics, const TailSpec& spec_a, const TailSpec& spec_b) {
  std::set<std::string, std::less<>> excluded = spec_a.excluded_fields;
  excluded.insert(spec_b.excluded_fields.begin(), spec_b.excluded_fields.end());

  std::vector<AuthorMetrics> shared;
  for (const auto& m : metrics) {
    if (!m.field_id || excluded.contains(*m.field_id)) continue;
    if (!metric_value(m, spec_a.metric) || !metric_value(m, spec_b.metric)) continue;
    shared.push_back(m);
  }
  TailSpec a = spec_a;
  TailSpec b = spec_b;
  a.excluded_fields.clear();
  b.excluded_fields.clear();
  const TailReport ra = tail_members(shared, a);
  const TailReport rb = tail_members(shared, b);

  std::set<std::string_view> in_a;
  for (const auto& m : ra.members) in_a.insert(m.author_id);
  std::set<std::string_view> in_b;
  for (const auto& m : rb.members) in_b.insert(m.author_id);

  std::uint64_t cells[4] = {0, 0, 0, 0};
  for (const auto& m : shared) {
    const bool x = in_a.contains(m.author_id);
    const bool y = in_b.contains(m.author_id);
    ++cells[(x ? 0 : 2) + (y ? 0 : 1)];
  }
  return contingency(cells[0], cells[1], cells[2], cells[3]);
}

std::string format_significant(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  const int exponent = static_cast<int>(std::floor(std::log10(std::fabs(value))));
  const int decimals = digits - 1 - exponent;
  char buf[64];
  if (decimals > 0) {
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
      while (s.back() == '0') s.pop_back();
      if (s.back() == '.') s.pop_back();
    }
    return s;
  }
  const double scale = std::pow(10.0, -decimals);
  std::snprintf(buf, sizeof buf, "%.0f", std::nearbyint(value / scale) * scale);
  return buf;
}

}  // namespace citorch
