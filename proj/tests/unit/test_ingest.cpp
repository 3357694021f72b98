#include <doctest.h>

#include <sstream>

#include "citorch/ingest.hpp"
#include "support.hpp"

using namespace citorch;

namespace {

std::vector<PaperRecord> papers_of(const std::string& text) {
  std::istringstream in(text);
  return read_papers(in);
}

}  // namespace

TEST_CASE("parse_papers maps rows to records") {
  const auto rows = papers_of("paper_id,doc_type,subfield_id\np1,article,102\np2,Review,\np3,editorial,102\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == PaperRecord{"p1", DocType::article, "102"});
  CHECK(rows[1] == PaperRecord{"p2", DocType::review, std::nullopt});
  CHECK(rows[2] == PaperRecord{"p3", DocType::other, "102"});
}

TEST_CASE("CRLF and LF parse identically") {
  std::istringstream lf("paper_id,author_id\np1,a9\np1,a9\n");
  std::istringstream crlf("paper_id,author_id\r\np1,a9\r\np1,a9\r\n");
  const auto a = read_authorships(lf);
  const auto b = read_authorships(crlf);
  CHECK(a == b);
  CHECK(a.size() == 2);  // duplicates survive parsing
}

TEST_CASE("quoted fields keep commas, quotes and line breaks") {
  std::istringstream in(
      "subfield_id,subfield_name,field_id,field_name\n"
      "101,\"Agronomy, \"\"Crop\"\" Science\",F01,\"Agriculture,\nFisheries\"\n");
  const FieldTaxonomy t = parse_taxonomy(in);
  REQUIRE(t.find("101") != nullptr);
  CHECK(t.find("101")->subfield_name == "Agronomy, \"Crop\" Science");
  CHECK(t.find("101")->field_name == "Agriculture,\nFisheries");
}

TEST_CASE("self-loop citations are dropped and counted") {
  std::istringstream in("citing_paper_id,cited_paper_id\np2,p1\np1,p1\n");
  std::vector<CitationEdge> got;
  const FileStats stats = parse_citations(in, [&](CitationEdge&& e) { got.push_back(std::move(e)); });
  REQUIRE(got.size() == 1);
  CHECK(got[0] == CitationEdge{"p2", "p1"});
  CHECK(stats.dropped.at("self_loop") == 1);
  CHECK(stats.rows_read == stats.emitted + stats.dropped_total() + 1);
}

TEST_CASE("header-only file yields no records") {
  std::istringstream in("citing_paper_id,cited_paper_id\n");
  CHECK(read_citations(in).empty());
}

TEST_CASE("taxonomy duplicates collapse, conflicts fail naming the id") {
  std::istringstream dup(
      "subfield_id,subfield_name,field_id,field_name\n"
      "102,Nuclear & Particle Physics,F18,Physics & Astronomy\n"
      "102,Nuclear & Particle Physics,F18,Physics & Astronomy\n");
  FileStats stats;
  const FieldTaxonomy t = parse_taxonomy(dup, &stats);
  CHECK(t.size() == 1);
  CHECK(t.find("102")->field_id == "F18");
  CHECK(stats.dropped.at("duplicate") == 1);

  std::istringstream bad(
      "subfield_id,subfield_name,field_id,field_name\n"
      "102,Nuclear & Particle Physics,F18,Physics & Astronomy\n"
      "102,Nuclear & Particle Physics,F05,Chemistry\n");
  try {
    (void)parse_taxonomy(bad);
    FAIL("expected an error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("102") != std::string::npos);
  }
}

TEST_CASE("errors carry the line number") {
  SUBCASE("empty paper_id") {
    std::istringstream in("paper_id,doc_type,subfield_id\np1,article,1\n,article,1\n");
    try {
      (void)read_papers(in);
      FAIL("expected IngestError");
    } catch (const IngestError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("wrong field count") {
    std::istringstream in("paper_id,author_id\np1,a1\np2\n");
    try {
      (void)read_authorships(in);
      FAIL("expected IngestError");
    } catch (const IngestError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("bad header") {
    std::istringstream in("paper,author\np1,a1\n");
    CHECK_THROWS_AS((void)read_authorships(in), IngestError);
  }
  SUBCASE("empty citation field") {
    std::istringstream in("citing_paper_id,cited_paper_id\n\np1,\n");
    try {
      (void)read_citations(in);
      FAIL("expected IngestError");
    } catch (const IngestError& e) {
      CHECK(e.line() == 3);
    }
  }
}

TEST_CASE("csv_escape round-trips through the reader") {
  const std::vector<std::string> fields{"plain", "a,b", "say \"hi\"", "two\nlines", ""};
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_escape(fields[i]);
  std::istringstream in(line + "\r\n");
  CsvReader reader(in);
  std::vector<std::string> row;
  REQUIRE(reader.next(row));
  CHECK(row == fields);
  CHECK_FALSE(reader.next(row));
}

TEST_CASE("load_corpus names the missing file") {
  const auto dir = citorch::testing::scratch_dir("ingest-missing");
  std::ofstream(dir / "papers.csv") << "paper_id,doc_type,subfield_id\n";
  std::ofstream(dir / "authorships.csv") << "paper_id,author_id\n";
  std::ofstream(dir / "taxonomy.csv") << "subfield_id,subfield_name,field_id,field_name\n";
  const CorpusPaths paths{dir / "papers.csv", dir / "authorships.csv", dir / "citations.csv", dir / "taxonomy.csv"};
  try {
    (void)load_corpus(paths);
    FAIL("expected an error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("citations.csv") != std::string::npos);
  }
}

TEST_CASE("load_corpus reports per-file counts") {
  const auto dir = citorch::testing::scratch_dir("ingest-counts");
  std::ofstream(dir / "papers.csv") << "paper_id,doc_type,subfield_id\np1,article,s1\np2,review,s1\n";
  std::ofstream(dir / "authorships.csv") << "paper_id,author_id\np1,a1\np2,a2\n";
  std::ofstream(dir / "citations.csv") << "citing_paper_id,cited_paper_id\np2,p1\np1,p1\np2,p9\n";
  std::ofstream(dir / "taxonomy.csv") << "subfield_id,subfield_name,field_id,field_name\ns1,S,F1,Field\n";
  IngestReport report;
  const CorpusIndex idx =
      load_corpus({dir / "papers.csv", dir / "authorships.csv", dir / "citations.csv", dir / "taxonomy.csv"}, &report);
  CHECK(idx.citation_count() == 1);
  CHECK(idx.report().citations_unknown_paper == 1);
  const FileStats& cites = report.files.at("citations");
  CHECK(cites.rows_read == 4);
  CHECK(cites.emitted == 2);
  CHECK(cites.dropped.at("self_loop") == 1);
}
