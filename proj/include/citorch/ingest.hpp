#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "citorch/corpus.hpp"

namespace citorch {

/// Raised for malformed input; carries the 1-based physical line number of
/// the offending row.
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, std::uint64_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::uint64_t line() const { return line_; }

 private:
  std::uint64_t line_;
};

/// Streaming RFC 4180 reader: quoted fields may contain commas, doubled
/// quotes and line breaks; LF and CRLF are both accepted. Holds one row at a
/// time.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Reads the next row into `fields`. Returns false at end of input.
  bool next(std::vector<std::string>& fields);

  /// Physical line where the most recently returned row started.
  std::uint64_t row_line() const { return row_line_; }

 private:
  std::istream& in_;
  std::uint64_t line_ = 1;
  std::uint64_t row_line_ = 0;
};

struct FileStats {
  std::uint64_t rows_read = 0;  // including the header
  std::uint64_t emitted = 0;
  std::map<std::string, std::uint64_t> dropped;  // reason -> count

  std::uint64_t dropped_total() const;
};

struct IngestReport {
  std::map<std::string, FileStats> files;  // keyed by logical file name
  double duration_seconds = 0.0;
};

template <typename Record>
using RecordSink = std::function<void(Record&&)>;

/// Each parser validates the exact header, emits one record per data row and
/// throws IngestError on malformed rows. They hold one row in memory.
FileStats parse_papers(std::istream& in, const RecordSink<PaperRecord>& sink);
FileStats parse_authorships(std::istream& in, const RecordSink<AuthorshipRecord>& sink);
/// Self-loop rows are dropped and counted under "self_loop".
FileStats parse_citations(std::istream& in, const RecordSink<CitationEdge>& sink);
FieldTaxonomy parse_taxonomy(std::istream& in, FileStats* stats = nullptr);

std::vector<PaperRecord> read_papers(std::istream& in);
std::vector<AuthorshipRecord> read_authorships(std::istream& in);
std::vector<CitationEdge> read_citations(std::istream& in);

struct CorpusPaths {
  std::filesystem::path papers;
  std::filesystem::path authorships;
  std::filesystem::path citations;
  std::filesystem::path taxonomy;
};

/// Streams the four files straight into a CorpusBuilder. A missing or
/// unreadable file throws std::runtime_error naming the path; parse errors
/// are rethrown with the path prefixed.
CorpusIndex load_corpus(const CorpusPaths& paths, IngestReport* report = nullptr);

/// RFC 4180 field escaping for writers.
std::string csv_escape(std::string_view field);

}  // namespace citorch
