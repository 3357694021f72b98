#include "citorch/ingest.hpp"

#include <chrono>
#include <fstream>

namespace citorch {
namespace {

constexpr std::array<std::string_view, 3> kPaperHeader{"paper_id", "doc_type", "subfield_id"};
constexpr std::array<std::string_view, 2> kAuthorshipHeader{"paper_id", "author_id"};
constexpr std::array<std::string_view, 2> kCitationHeader{"citing_paper_id", "cited_paper_id"};
constexpr std::array<std::string_view, 4> kTaxonomyHeader{"subfield_id", "subfield_name", "field_id", "field_name"};

std::string join(std::span<const std::string_view> cols) {
  std::string out;
  for (auto c : cols) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

// Reads and checks the header row; a UTF-8 BOM on the first field is tolerated.
void expect_header(CsvReader& reader, std::vector<std::string>& row, std::span<const std::string_view> header,
                   FileStats& stats) {
  if (!reader.next(row)) throw IngestError("missing header, expected '" + join(header) + "'", 1);
  ++stats.rows_read;
  if (!row.empty() && row[0].starts_with("\xEF\xBB\xBF")) row[0].erase(0, 3);
  bool ok = row.size() == header.size();
  for (std::size_t i = 0; ok && i < header.size(); ++i) ok = row[i] == header[i];
  if (!ok) throw IngestError("bad header, expected '" + join(header) + "'", reader.row_line());
}

void expect_width(const CsvReader& reader, const std::vector<std::string>& row, std::size_t width) {
  if (row.size() != width) {
    throw IngestError("expected " + std::to_string(width) + " fields, found " + std::to_string(row.size()),
                      reader.row_line());
  }
}

void expect_nonempty(const CsvReader& reader, const std::string& value, std::string_view column) {
  if (value.empty()) throw IngestError("empty " + std::string(column), reader.row_line());
}

}  // namespace

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::streambuf* buf = in_.rdbuf();
  using traits = std::char_traits<char>;

  int c = buf->sgetc();
  // Skip blank lines between rows.
  while (c == '\n' || c == '\r') {
    buf->sbumpc();
    if (c == '\n') ++line_;
    c = buf->sgetc();
  }
  if (c == traits::eof()) return false;

  row_line_ = line_;
  std::string field;
  bool quoted = false;
  bool after_quote = false;  // closing quote seen for the current field
  while (true) {
    c = buf->sbumpc();
    if (c == traits::eof()) {
      if (quoted) throw IngestError("unterminated quoted field", row_line_);
      fields.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (buf->sgetc() == '"') {
          buf->sbumpc();
          field += '"';
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line_;
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
        break;
      case '\r':
        if (buf->sgetc() == '\n') break;  // CRLF: the LF ends the row
        [[fallthrough]];
      case '\n':
        ++line_;
        fields.push_back(std::move(field));
        return true;
      case '"':
        if (!field.empty() || after_quote) throw IngestError("stray quote inside unquoted field", row_line_);
        quoted = true;
        break;
      default:
        if (after_quote) throw IngestError("characters after closing quote", row_line_);
        field += ch;
    }
  }
}

std::uint64_t FileStats::dropped_total() const {
  std::uint64_t total = 0;
  for (const auto& [_, n] : dropped) total += n;
  return total;
}

FileStats parse_papers(std::istream& in, const RecordSink<PaperRecord>& sink) {
  FileStats stats;
  CsvReader reader(in);
  std::vector<std::string> row;
  expect_header(reader, row, kPaperHeader, stats);
  while (reader.next(row)) {
    ++stats.rows_read;
    expect_width(reader, row, 3);
    expect_nonempty(reader, row[0], "paper_id");
    PaperRecord rec{std::move(row[0]), parse_doc_type(row[1]), std::nullopt};
    if (!row[2].empty()) rec.subfield_id = std::move(row[2]);
    sink(std::move(rec));
    ++stats.emitted;
  }
  return stats;
}

FileStats parse_authorships(std::istream& in, const RecordSink<AuthorshipRecord>& sink) {
  FileStats stats;
  CsvReader reader(in);
  std::vector<std::string> row;
  expect_header(reader, row, kAuthorshipHeader, stats);
  while (reader.next(row)) {
    ++stats.rows_read;
    expect_width(reader, row, 2);
    expect_nonempty(reader, row[0], "paper_id");
    expect_nonempty(reader, row[1], "author_id");
    sink(AuthorshipRecord{std::move(row[0]), std::move(row[1])});
    ++stats.emitted;
  }
  return stats;
}

FileStats parse_citations(std::istream& in, const RecordSink<CitationEdge>& sink) {
  FileStats stats;
  CsvReader reader(in);
  std::vector<std::string> row;
  expect_header(reader, row, kCitationHeader, stats);
  while (reader.next(row)) {
    ++stats.rows_read;
    expect_width(reader, row, 2);
    expect_nonempty(reader, row[0], "citing_paper_id");
    expect_nonempty(reader, row[1], "cited_paper_id");
    if (row[0] == row[1]) {
      ++stats.dropped["self_loop"];
      continue;
    }
    sink(CitationEdge{std::move(row[0]), std::move(row[1])});
    ++stats.emitted;
  }
  return stats;
}

FieldTaxonomy parse_taxonomy(std::istream& in, FileStats* stats_out) {
  FileStats stats;
  FieldTaxonomy taxonomy;
  CsvReader reader(in);
  std::vector<std::string> row;
  expect_header(reader, row, kTaxonomyHeader, stats);
  while (reader.next(row)) {
    ++stats.rows_read;
    expect_width(reader, row, 4);
    expect_nonempty(reader, row[0], "subfield_id");
    expect_nonempty(reader, row[2], "field_id");
    const std::size_t before = taxonomy.size();
    try {
      taxonomy.add(row[0], SubfieldInfo{std::move(row[1]), std::move(row[2]), std::move(row[3])});
    } catch (const CorpusError& e) {
      throw IngestError(e.what(), reader.row_line());
    }
    if (taxonomy.size() == before) {
      ++stats.dropped["duplicate"];
    } else {
      ++stats.emitted;
    }
  }
  if (stats_out) *stats_out = std::move(stats);
  return taxonomy;
}

std::vector<PaperRecord> read_papers(std::istream& in) {
  std::vector<PaperRecord> out;
  parse_papers(in, [&](PaperRecord&& r) { out.push_back(std::move(r)); });
  return out;
}

std::vector<AuthorshipRecord> read_authorships(std::istream& in) {
  std::vector<AuthorshipRecord> out;
  parse_authorships(in, [&](AuthorshipRecord&& r) { out.push_back(std::move(r)); });
  return out;
}

std::vector<CitationEdge> read_citations(std::istream& in) {
  std::vector<CitationEdge> out;
  parse_citations(in, [&](CitationEdge&& r) { out.push_back(std::move(r)); });
  return out;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path.string());
  return in;
}

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const IngestError& e) {
    throw IngestError(path.string() + ": " + e.what(), e.line());
  }
}

}  // namespace

CorpusIndex load_corpus(const CorpusPaths& paths, IngestReport* report) {
  const auto start = std::chrono::steady_clock::now();
  // Open everything first so a missing file fails before any parsing work.
  std::ifstream taxonomy_in = open_input(paths.taxonomy);
  std::ifstream papers_in = open_input(paths.papers);
  std::ifstream authorships_in = open_input(paths.authorships);
  std::ifstream citations_in = open_input(paths.citations);

  IngestReport local;
  CorpusBuilder builder;
  FileStats taxonomy_stats;
  builder.set_taxonomy(with_path(paths.taxonomy, [&] { return parse_taxonomy(taxonomy_in, &taxonomy_stats); }));
  local.files["taxonomy"] = taxonomy_stats;
  local.files["papers"] =
      with_path(paths.papers, [&] { return parse_papers(papers_in, [&](PaperRecord&& r) { builder.add_paper(r); }); });
  local.files["authorships"] = with_path(paths.authorships, [&] {
    return parse_authorships(authorships_in,
                             [&](AuthorshipRecord&& r) { builder.add_authorship(r.paper_id, r.author_id); });
  });
  local.files["citations"] = with_path(paths.citations, [&] {
    return parse_citations(citations_in,
                           [&](CitationEdge&& r) { builder.add_citation(r.citing_paper_id, r.cited_paper_id); });
  });
  CorpusIndex index = std::move(builder).build();
  local.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (report) *report = std::move(local);
  return index;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace citorch
