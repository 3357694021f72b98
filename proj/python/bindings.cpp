#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "citorch/pipeline.hpp"

namespace py = pybind11;
using namespace citorch;

namespace {

py::object to_fraction(const Rational& r) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(r.num(), r.den());
}

// Accepts int, Fraction, or a decimal/fraction string.
Rational to_rational(const py::handle& value) {
  if (py::isinstance<py::str>(value)) return Rational::parse(value.cast<std::string>());
  if (py::hasattr(value, "numerator") && py::hasattr(value, "denominator")) {
    return Rational(value.attr("numerator").cast<std::int64_t>(), value.attr("denominator").cast<std::int64_t>());
  }
  throw py::type_error("expected int, fractions.Fraction or str");
}

py::dict metrics_dict(const AuthorMetrics& m) {
  py::dict d;
  d["author_id"] = m.author_id;
  d["n_full_papers"] = m.n_full_papers;
  d["citations"] = m.citations;
  d["h_index"] = m.h_index;
  d["c_over_h2"] = m.c_over_h2 ? to_fraction(*m.c_over_h2) : py::none();
  d["a50pc"] = m.a50pc ? py::cast(*m.a50pc) : py::none();
  d["a50"] = m.a50;
  d["field_id"] = m.field_id ? py::cast(*m.field_id) : py::none();
  d["subfield_id"] = m.subfield_id ? py::cast(*m.subfield_id) : py::none();
  return d;
}

py::dict table_dict(const ContingencyTable& t) {
  py::dict d;
  d["a"] = t.a;
  d["b"] = t.b;
  d["c"] = t.c;
  d["d"] = t.d;
  d["odds_ratio"] = t.odds_ratio;
  d["ci_low"] = t.ci_low;
  d["ci_high"] = t.ci_high;
  d["degenerate"] = t.degenerate;
  return d;
}

AuthorIdx author_or_raise(const CorpusIndex& idx, const std::string& id) {
  const auto a = idx.find_author(id);
  if (!a) throw py::key_error("unknown author: " + id);
  return *a;
}

MetricsConfig counting(bool citing_full_only) {
  MetricsConfig cfg;
  cfg.citing_full_only = citing_full_only;
  return cfg;
}

using PaperRow = std::tuple<std::string, std::string, std::optional<std::string>>;
using PairRow = std::pair<std::string, std::string>;
using TaxonomyTuple = std::tuple<std::string, std::string, std::string, std::string>;

CorpusIndex make_index(const std::vector<PaperRow>& papers, const std::vector<PairRow>& authorships,
                       const std::vector<PairRow>& citations, const std::vector<TaxonomyTuple>& taxonomy) {
  std::vector<PaperRecord> ps;
  for (const auto& [id, type, sub] : papers) ps.push_back({id, parse_doc_type(type), sub});
  std::vector<AuthorshipRecord> as;
  for (const auto& [p, a] : authorships) as.push_back({p, a});
  std::vector<CitationEdge> cs;
  for (const auto& [from, to] : citations) cs.push_back({from, to});
  FieldTaxonomy tax;
  for (const auto& [sid, sname, fid, fname] : taxonomy) tax.add(sid, {sname, fid, fname});
  return build_index(ps, as, cs, std::move(tax));
}

}  // namespace

PYBIND11_MODULE(_citorch, m) {
  m.doc() = "Citation-orchestration indicators over a publication corpus";

  py::register_exception<UndefinedMetric>(m, "UndefinedMetric", PyExc_ValueError);
  py::register_exception<CorpusError>(m, "CorpusError", PyExc_ValueError);
  py::register_exception<IngestError>(m, "IngestError", PyExc_ValueError);
  py::register_exception<SynthConfigError>(m, "SynthConfigError", PyExc_ValueError);
  py::register_exception<PipelineError>(m, "PipelineError", PyExc_RuntimeError);

  m.def("h_index", [](const std::vector<std::uint64_t>& counts) { return h_index(counts); }, py::arg("counts"));
  m.def(
      "c_over_h2", [](std::uint64_t c, std::uint32_t h) { return to_fraction(c_over_h2(c, h)); }, py::arg("citations"),
      py::arg("h"));

  py::class_<CorpusIndex>(m, "Corpus")
      .def(py::init(&make_index), py::arg("papers"), py::arg("authorships"), py::arg("citations"),
           py::arg("taxonomy") = std::vector<TaxonomyTuple>{},
           "papers: (paper_id, doc_type, subfield_id|None); authorships: (paper_id, author_id); "
           "citations: (citing, cited); taxonomy: (subfield_id, subfield_name, field_id, field_name)")
      .def_static(
          "load",
          [](const std::filesystem::path& dir) {
            return load_corpus(
                {dir / "papers.csv", dir / "authorships.csv", dir / "citations.csv", dir / "taxonomy.csv"});
          },
          py::arg("input_dir"))
      .def_property_readonly("paper_count", &CorpusIndex::paper_count)
      .def_property_readonly("author_count", &CorpusIndex::author_count)
      .def_property_readonly("citation_count", &CorpusIndex::citation_count)
      .def_property_readonly("authors",
                             [](const CorpusIndex& idx) {
                               std::vector<std::string> out;
                               for (AuthorIdx a = 0; a < idx.author_count(); ++a) out.push_back(idx.author_id(a));
                               return out;
                             })
      .def(
          "citation_profile",
          [](const CorpusIndex& idx, const std::string& author, bool full_only) {
            return citation_profile(idx, author_or_raise(idx, author), counting(full_only));
          },
          py::arg("author"), py::arg("citing_full_only") = false)
      .def(
          "a50pc",
          [](const CorpusIndex& idx, const std::string& author, bool full_only) {
            return a50pc_greedy(idx, author_or_raise(idx, author), counting(full_only));
          },
          py::arg("author"), py::arg("citing_full_only") = false)
      .def(
          "a50pc_oracle",
          [](const CorpusIndex& idx, const std::string& author, bool full_only) {
            return a50pc_oracle(idx, author, counting(full_only));
          },
          py::arg("author"), py::arg("citing_full_only") = false)
      .def(
          "a50",
          [](const CorpusIndex& idx, const std::string& author, std::uint32_t threshold) {
            return a50_coauthors(idx, author_or_raise(idx, author), threshold);
          },
          py::arg("author"), py::arg("threshold") = 50)
      .def(
          "assign_field",
          [](const CorpusIndex& idx, const std::string& author, std::uint64_t seed) -> py::object {
            const auto f = assign_field(idx, author_or_raise(idx, author), seed);
            if (!f) return py::none();
            return py::make_tuple(f->field_id, f->subfield_id);
          },
          py::arg("author"), py::arg("seed") = 0)
      .def(
          "eligible_authors",
          [](const CorpusIndex& idx, std::uint32_t min_papers, std::uint64_t min_citations, std::uint64_t seed) {
            std::vector<std::string> out;
            for (AuthorIdx a : eligible_authors(idx, {min_papers, min_citations, seed}))
              out.push_back(idx.author_id(a));
            return out;
          },
          py::arg("min_papers") = 5, py::arg("min_citations") = 1000, py::arg("seed") = 0)
      .def(
          "metrics",
          [](const CorpusIndex& idx, std::optional<std::vector<std::string>> authors, unsigned threads,
             std::uint64_t seed, bool full_only) {
            std::vector<AuthorIdx> cohort;
            if (authors) {
              for (const auto& id : *authors) cohort.push_back(author_or_raise(idx, id));
            } else {
              for (AuthorIdx a = 0; a < idx.author_count(); ++a) cohort.push_back(a);
            }
            MetricsConfig cfg = counting(full_only);
            cfg.threads = threads;
            cfg.seed = seed;
            std::vector<AuthorMetrics> result;
            {
              py::gil_scoped_release release;
              result = compute_all_metrics(idx, cohort, cfg);
            }
            py::list out;
            for (const auto& r : result) out.append(metrics_dict(r));
            return out;
          },
          py::arg("authors") = py::none(), py::arg("threads") = 1, py::arg("seed") = 0,
          py::arg("citing_full_only") = false);

  m.def(
      "percentile_threshold",
      [](const py::iterable& values, const py::handle& p) {
        std::vector<Rational> vs;
        for (const auto& v : values) vs.push_back(to_rational(v));
        return to_fraction(percentile_threshold(vs, to_rational(p)));
      },
      py::arg("values"), py::arg("percent"));
  m.def("fold_enrichment", &fold_enrichment, py::arg("cohort_share"), py::arg("tail_share"));
  m.def(
      "contingency",
      [](std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
        return table_dict(contingency(a, b, c, d));
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));
  m.def("format_significant", &format_significant, py::arg("value"), py::arg("digits") = 2);

  m.def(
      "synth",
      [](const std::filesystem::path& out, std::uint64_t seed, std::uint32_t background_authors,
         std::uint32_t self_citers, std::uint32_t cartels, std::uint32_t hyperteams) {
        SynthConfig cfg;
        cfg.seed = seed;
        cfg.n_background_authors = background_authors;
        cfg.n_self_citers = self_citers;
        cfg.n_cartels = cartels;
        cfg.n_hyperteams = hyperteams;
        SynthCorpus corpus;
        {
          py::gil_scoped_release release;
          corpus = generate(cfg);
          write_corpus(corpus, out);
        }
        py::dict truth;
        for (const auto& row : corpus.truth.rows) truth[py::str(row.author_id)] = std::string(to_string(row.label));
        return truth;
      },
      py::arg("out_dir"), py::arg("seed") = 42, py::arg("background_authors") = 10000, py::arg("self_citers") = 20,
      py::arg("cartels") = 3, py::arg("hyperteams") = 1, "Writes a synthetic corpus and returns {author_id: label}.");

  m.def(
      "run",
      [](const std::filesystem::path& input_dir, const std::filesystem::path& out_dir, unsigned threads,
         const py::object& pct, std::uint32_t min_papers, std::uint64_t min_citations, std::uint64_t seed,
         std::optional<std::vector<std::string>> exclude_fields) {
        RunConfig cfg;
        cfg.inputs = {input_dir / "papers.csv", input_dir / "authorships.csv", input_dir / "citations.csv",
                      input_dir / "taxonomy.csv"};
        cfg.out_dir = out_dir;
        cfg.metrics.threads = threads;
        cfg.percentile = to_rational(pct);
        cfg.eligibility = {min_papers, min_citations, seed};
        if (exclude_fields) cfg.exclude_fields = *exclude_fields;
        RunSummary s;
        {
          py::gil_scoped_release release;
          s = run_pipeline(cfg);
        }
        py::dict out;
        out["authors"] = s.n_authors;
        out["eligible"] = s.n_eligible;
        py::dict tails;
        for (const auto& t : s.tails) {
          py::dict d;
          d["threshold"] = to_fraction(t.threshold);
          d["cohort_size"] = t.cohort_size;
          std::vector<std::string> members;
          for (const auto& mbr : t.members) members.push_back(mbr.author_id);
          d["members"] = members;
          tails[py::str(std::string(to_string(t.spec.metric)))] = d;
        }
        out["tails"] = tails;
        out["files"] = s.files_written;
        out["timings"] = s.timings;
        return out;
      },
      py::arg("input_dir"), py::arg("out_dir"), py::arg("threads") = 1, py::arg("pct") = 1, py::arg("min_papers") = 5,
      py::arg("min_citations") = 1000, py::arg("seed") = 0, py::arg("exclude_fields") = py::none());
}
