#include "citorch/pipeline.hpp"

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <json.hpp>

namespace citorch {
namespace {

using Clock = std::chrono::steady_clock;

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Decimal places needed to print multiples of `width` exactly (capped at 6).
int decimals_for(const Rational& width) {
  std::int64_t p = 1;
  for (int d = 0; d <= 6; ++d, p *= 10) {
    if (p % width.den() == 0) return d;
  }
  return 6;
}

std::string render(const Rational& value, Metric metric) {
  return metric == Metric::c_over_h2 ? value.to_fixed(2) : value.to_string();
}

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    written_.push_back(name);
    return out;
  }
  std::vector<std::string> written() const {
    auto w = written_;
    std::sort(w.begin(), w.end());
    return w;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> written_;
};

template <typename Fn>
auto stage(const char* name, std::map<std::string, double>& timings, Fn&& fn) {
  const auto start = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      timings[name] = std::chrono::duration<double>(Clock::now() - start).count();
    } else {
      auto result = fn();
      timings[name] = std::chrono::duration<double>(Clock::now() - start).count();
      return result;
    }
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

std::string resolve_field(const std::string& wanted, const FieldTaxonomy& taxonomy) {
  if (taxonomy.fields().contains(wanted)) return wanted;
  for (const auto& [id, name] : taxonomy.fields()) {
    if (name == wanted) return id;
  }
  return wanted;  // unknown ids simply match nobody
}

const TailReport* find_tail(const std::vector<TailReport>& tails, Metric metric) {
  for (const auto& t : tails) {
    if (t.spec.metric == metric) return &t;
  }
  return nullptr;
}

}  // namespace

long peak_rss_kb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

std::vector<TailSpec> default_tail_specs(const RunConfig& cfg, const FieldTaxonomy& taxonomy) {
  std::set<std::string, std::less<>> excluded;
  for (const auto& f : cfg.exclude_fields) excluded.insert(resolve_field(f, taxonomy));
  return {
      TailSpec{Metric::c_over_h2, Tail::lower, cfg.percentile, {}},
      TailSpec{Metric::a50pc, Tail::lower, cfg.percentile, excluded},
      TailSpec{Metric::a50, Tail::upper, cfg.percentile, excluded},
  };
}

RunSummary run_pipeline(const RunConfig& cfg) {
  RunSummary summary;
  auto& timings = summary.timings;

  stage("output", timings, [&] { std::filesystem::create_directories(cfg.out_dir); });
  OutputDir out(cfg.out_dir);

  IngestReport ingest;
  const CorpusIndex index = stage("ingest", timings, [&] { return load_corpus(cfg.inputs, &ingest); });
  summary.n_authors = index.author_count();

  MetricsConfig metrics_cfg = cfg.metrics;
  metrics_cfg.seed = cfg.eligibility.seed;
  const auto cohort = stage("cohort", timings, [&] { return eligible_authors(index, cfg.eligibility, metrics_cfg); });
  summary.n_eligible = cohort.size();

  const auto metrics = stage("metrics", timings, [&] { return compute_all_metrics(index, cohort, metrics_cfg); });

  stage("report_metrics", timings, [&] {
    auto f = out.open("metrics.csv");
    f << "author_id,field_id,subfield_id,n_full_papers,citations,h_index,c_over_h2,a50pc,a50\n";
    for (const auto& m : metrics) {
      f << csv_escape(m.author_id) << ',' << csv_escape(m.field_id.value_or("")) << ','
        << csv_escape(m.subfield_id.value_or("")) << ',' << m.n_full_papers << ',' << m.citations << ',' << m.h_index
        << ',' << (m.c_over_h2 ? m.c_over_h2->to_fixed(2) : "") << ',' << (m.a50pc ? std::to_string(*m.a50pc) : "")
        << ',' << m.a50 << '\n';
    }
  });

  const auto specs = default_tail_specs(cfg, index.taxonomy());
  stage("tails", timings, [&] {
    if (metrics.empty()) throw std::invalid_argument("no eligible authors");
    for (const auto& spec : specs) summary.tails.push_back(tail_members(metrics, spec));
  });

  stage("report_tails", timings, [&] {
    auto overview = out.open("tails.csv");
    overview << "metric,tail,percentile,excluded_fields,cohort_size,threshold,median,q1,q3,members\n";
    for (const auto& t : summary.tails) {
      const Metric metric = t.spec.metric;
      const std::string name(to_string(metric));
      std::string excluded;
      for (const auto& f : t.spec.excluded_fields) excluded += (excluded.empty() ? "" : ";") + f;
      overview << name << ',' << to_string(t.spec.tail) << ',' << t.spec.percentile.to_string() << ','
               << csv_escape(excluded) << ',' << t.cohort_size << ',' << render(t.threshold, metric) << ','
               << render(t.summary.median, metric) << ',' << render(t.summary.q1, metric) << ','
               << render(t.summary.q3, metric) << ',' << t.members.size() << '\n';

      auto members = out.open("tail_" + name + ".csv");
      members << "author_id,field_id,value,value_exact\n";
      for (const auto& m : t.members) {
        members << csv_escape(m.author_id) << ',' << csv_escape(m.field_id) << ',' << render(m.value, metric) << ','
                << m.value.to_string() << '\n';
      }

      const auto flagged = enrichment_flags(t, cfg.fold_cutoff);
      auto alloc = out.open("allocation_" + name + ".csv");
      alloc << "field_id,field_name,cohort_count,cohort_share,tail_count,tail_share,fold,flagged\n";
      for (const auto& f : t.allocation) {
        alloc << csv_escape(f.field_id) << ',' << csv_escape(index.taxonomy().field_name(f.field_id).value_or(""))
              << ',' << f.cohort_count << ',' << fixed(f.cohort_share, 6) << ',' << f.tail_count << ','
              << fixed(f.tail_share, 6) << ',' << fixed(f.fold, 4) << ',' << (flagged.contains(f.field_id) ? 1 : 0)
              << '\n';
      }
    }
  });

  nlohmann::json hist_excluded;
  stage("histograms", timings, [&] {
    for (const auto& [metric, range] : cfg.histograms) {
      const TailReport* t = find_tail(summary.tails, metric);
      std::vector<Rational> values;
      for (const auto& m : metrics) {
        if (t && m.field_id && t->spec.excluded_fields.contains(*m.field_id)) continue;
        if (auto v = metric_value(m, metric)) values.push_back(*v);
      }
      const Histogram h = histogram(values, range.width, range.min, range.max);
      const std::string name(to_string(metric));
      auto f = out.open("hist_" + name + ".csv");
      f << "bin_start,count\n";
      const int decimals = decimals_for(range.width);
      for (std::size_t i = 0; i < h.counts.size(); ++i)
        f << h.bin_start(i).to_fixed(decimals) << ',' << h.counts[i] << '\n';
      hist_excluded[name] = {{"below", h.below}, {"above", h.above}};
    }
  });

  stage("cooccurrence", timings, [&] {
    auto f = out.open("cooccur.csv");
    f << "metric_a,tail_a,metric_b,tail_b,a,b,c,d,cohort,odds_ratio,ci_low,ci_high,odds_ratio_2sf,ci_low_2sf,"
         "ci_high_2sf,status\n";
    for (const auto& pair : cfg.cooccurrence_pairs) {
      const TailReport* ta = find_tail(summary.tails, pair.first);
      const TailReport* tb = find_tail(summary.tails, pair.second);
      if (!ta || !tb) throw std::invalid_argument("co-occurrence pair references an unknown metric");
      const ContingencyTable t = cooccurrence(metrics, ta->spec, tb->spec);
      summary.cooccurrence.push_back({pair, t});
      f << to_string(pair.first) << ',' << to_string(ta->spec.tail) << ',' << to_string(pair.second) << ','
        << to_string(tb->spec.tail) << ',' << t.a << ',' << t.b << ',' << t.c << ',' << t.d << ',' << t.total() << ','
        << fixed(t.odds_ratio, 6) << ',' << fixed(t.ci_low, 6) << ',' << fixed(t.ci_high, 6) << ','
        << format_significant(t.odds_ratio) << ',' << format_significant(t.ci_low) << ','
        << format_significant(t.ci_high) << ',' << (t.degenerate ? "degenerate" : "ok") << '\n';
    }
  });

  summary.peak_rss_kb = peak_rss_kb();

  // The manifest is written last and lists every other output.
  stage("manifest", timings, [&] {
    nlohmann::json m;
    m["config"] = {
        {"papers", cfg.inputs.papers.string()},
        {"authorships", cfg.inputs.authorships.string()},
        {"citations", cfg.inputs.citations.string()},
        {"taxonomy", cfg.inputs.taxonomy.string()},
        {"out", cfg.out_dir.string()},
        {"min_papers", cfg.eligibility.min_full_papers},
        {"min_citations", cfg.eligibility.min_citations},
        {"seed", cfg.eligibility.seed},
        {"exclude_fields", cfg.exclude_fields},
        {"pct", cfg.percentile.to_string()},
        {"a50_threshold", cfg.metrics.a50_threshold},
        {"citing_full_only", cfg.metrics.citing_full_only},
        {"fold_cutoff", cfg.fold_cutoff},
        {"threads", cfg.metrics.threads},
    };
    nlohmann::json files;
    for (const auto& [name, stats] : ingest.files) {
      files[name] = {{"rows_read", stats.rows_read}, {"emitted", stats.emitted}, {"dropped", stats.dropped}};
    }
    const BuildReport& r = index.report();
    m["ingest"] = {
        {"files", files},
        {"index_drops",
         {{"duplicate_papers", r.duplicate_papers},
          {"duplicate_authorships", r.duplicate_authorships},
          {"authorships_unknown_paper", r.authorships_unknown_paper},
          {"duplicate_citations", r.duplicate_citations},
          {"citations_self_loop", r.citations_self_loop},
          {"citations_unknown_paper", r.citations_unknown_paper},
          {"papers_unknown_subfield", r.papers_unknown_subfield}}},
    };
    m["counts"] = {{"papers", index.paper_count()},
                   {"authors", index.author_count()},
                   {"authorships", index.authorship_count()},
                   {"citations", index.citation_count()},
                   {"eligible_authors", summary.n_eligible}};
    nlohmann::json tails = nlohmann::json::array();
    for (const auto& t : summary.tails) {
      tails.push_back({{"metric", to_string(t.spec.metric)},
                       {"threshold", t.threshold.to_string()},
                       {"cohort_size", t.cohort_size},
                       {"members", t.members.size()}});
    }
    m["tails"] = tails;
    m["histogram_excluded"] = hist_excluded;
    m["timings_seconds"] = timings;
    m["memory"] = {{"index_bytes_estimate", index.memory_footprint()}, {"peak_rss_kb", summary.peak_rss_kb}};
    auto written = out.written();
    written.push_back("manifest.json");
    std::sort(written.begin(), written.end());
    m["outputs"] = written;
    auto f = out.open("manifest.json");
    f << m.dump(2) << '\n';
  });

  summary.files_written = out.written();
  return summary;
}

std::map<Metric, std::set<std::string>> read_tail_members(const std::filesystem::path& run_dir) {
  std::map<Metric, std::set<std::string>> out;
  for (Metric metric : {Metric::c_over_h2, Metric::a50pc, Metric::a50}) {
    const auto path = run_dir / ("tail_" + std::string(to_string(metric)) + ".csv");
    std::ifstream in(path, std::ios::binary);
    if (!in) continue;
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row) || row.empty() || row[0] != "author_id") {
      throw std::runtime_error(path.string() + ": bad header");
    }
    auto& members = out[metric];
    while (reader.next(row)) {
      if (!row.empty() && !row[0].empty()) members.insert(row[0]);
    }
  }
  return out;
}

std::filesystem::path write_evaluation(const std::vector<DetectionScore>& scores, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / "evaluation.csv";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << "motif,metric,planted,tail_size,detected,recall,precision\n";
  for (const auto& s : scores) {
    f << s.motif << ',' << to_string(s.metric) << ',' << s.planted << ',' << s.tail_size << ',' << s.detected << ','
      << (s.recall ? fixed(*s.recall, 4) : "NA") << ',' << (s.precision ? fixed(*s.precision, 4) : "NA") << '\n';
  }
  return path;
}

}  // namespace citorch
