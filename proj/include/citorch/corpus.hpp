#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace citorch {

enum class DocType : std::uint8_t { article, conference_paper, review, other };

/// Case-insensitive; anything outside the three full-paper types is `other`.
DocType parse_doc_type(std::string_view text);
std::string_view to_string(DocType type);

struct PaperRecord {
  std::string paper_id;
  DocType doc_type = DocType::other;
  std::optional<std::string> subfield_id;

  friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

/// Articles, conference papers and reviews.
bool is_full_paper(const PaperRecord& paper);
inline bool is_full_paper(DocType type) { return type != DocType::other; }

struct AuthorshipRecord {
  std::string paper_id;
  std::string author_id;

  friend bool operator==(const AuthorshipRecord&, const AuthorshipRecord&) = default;
};

struct CitationEdge {
  std::string citing_paper_id;
  std::string cited_paper_id;

  friend bool operator==(const CitationEdge&, const CitationEdge&) = default;
};

struct SubfieldInfo {
  std::string subfield_name;
  std::string field_id;
  std::string field_name;

  friend bool operator==(const SubfieldInfo&, const SubfieldInfo&) = default;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// subfield_id -> (subfield name, field). Every subfield belongs to exactly one field.
class FieldTaxonomy {
 public:
  /// Inserts a row. A repeated identical row is a no-op; a repeated subfield_id
  /// with a different field throws CorpusError naming the subfield.
  void add(const std::string& subfield_id, SubfieldInfo info);

  const SubfieldInfo* find(std::string_view subfield_id) const;
  std::optional<std::string> field_name(std::string_view field_id) const;

  std::size_t size() const { return subfields_.size(); }
  const std::map<std::string, SubfieldInfo, std::less<>>& subfields() const { return subfields_; }
  /// field_id -> field_name, sorted by id.
  const std::map<std::string, std::string, std::less<>>& fields() const { return fields_; }

 private:
  std::map<std::string, SubfieldInfo, std::less<>> subfields_;
  std::map<std::string, std::string, std::less<>> fields_;
};

/// Dense handles into a CorpusIndex. Handles follow the lexicographic order
/// of the underlying string ids, so sorting handles sorts ids.
using PaperIdx = std::uint32_t;
using AuthorIdx = std::uint32_t;

struct BuildReport {
  std::uint64_t duplicate_papers = 0;
  std::uint64_t duplicate_authorships = 0;
  std::uint64_t authorships_unknown_paper = 0;
  std::uint64_t duplicate_citations = 0;
  std::uint64_t citations_self_loop = 0;
  std::uint64_t citations_unknown_paper = 0;
  std::uint64_t papers_unknown_subfield = 0;
};

class CorpusIndex;

/// Accumulates records one at a time and freezes them into a CorpusIndex.
/// Strings are interned on arrival so the builder holds compact id pairs
/// rather than the raw rows.
class CorpusBuilder {
 public:
  void add_paper(const PaperRecord& paper);
  void add_authorship(std::string_view paper_id, std::string_view author_id);
  void add_citation(std::string_view citing_paper_id, std::string_view cited_paper_id);
  void set_taxonomy(FieldTaxonomy taxonomy) { taxonomy_ = std::move(taxonomy); }

  /// Consumes the builder.
  CorpusIndex build() &&;

 private:
  struct PaperSlot {
    bool defined = false;
    DocType doc_type = DocType::other;
    std::optional<std::string> subfield_id;
  };

  std::uint32_t intern_paper(std::string_view id);
  std::uint32_t intern_author(std::string_view id);

  std::vector<std::string> paper_names_;
  std::unordered_map<std::string, std::uint32_t> paper_lookup_;
  std::vector<PaperSlot> paper_slots_;
  std::vector<std::string> author_names_;
  std::unordered_map<std::string, std::uint32_t> author_lookup_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> authorships_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> citations_;
  FieldTaxonomy taxonomy_;
  BuildReport report_;
};

/// Immutable cross-linked view of a corpus: papers, the author<->paper
/// relation in both directions, and the cited->citing relation. All adjacency
/// lists are sorted, so identical inputs in any row order yield identical
/// indexes. Safe to share between threads once built.
class CorpusIndex {
 public:
  CorpusIndex() = default;

  std::size_t paper_count() const { return papers_.size(); }
  std::size_t author_count() const { return author_ids_.size(); }
  std::size_t citation_count() const { return citer_list_.size(); }
  std::size_t authorship_count() const { return author_list_.size(); }

  const PaperRecord& paper(PaperIdx p) const { return papers_[p]; }
  bool is_full(PaperIdx p) const { return is_full_paper(papers_[p].doc_type); }
  const std::string& author_id(AuthorIdx a) const { return author_ids_[a]; }

  std::optional<PaperIdx> find_paper(std::string_view paper_id) const;
  std::optional<AuthorIdx> find_author(std::string_view author_id) const;

  std::span<const AuthorIdx> authors_of(PaperIdx p) const {
    return {author_list_.data() + author_offsets_[p], author_list_.data() + author_offsets_[p + 1]};
  }
  std::span<const PaperIdx> papers_of(AuthorIdx a) const {
    return {paper_list_.data() + paper_offsets_[a], paper_list_.data() + paper_offsets_[a + 1]};
  }
  std::span<const PaperIdx> citers_of(PaperIdx p) const {
    return {citer_list_.data() + citer_offsets_[p], citer_list_.data() + citer_offsets_[p + 1]};
  }

  /// Taxonomy entry of a paper's subfield, or nullptr when unclassified.
  const SubfieldInfo* subfield_of(PaperIdx p) const;

  const FieldTaxonomy& taxonomy() const { return taxonomy_; }
  const BuildReport& report() const { return report_; }

  /// Enumerates the de-duplicated records the index holds, sorted by id.
  std::vector<PaperRecord> paper_records() const { return papers_; }
  std::vector<AuthorshipRecord> authorship_records() const;
  std::vector<CitationEdge> citation_records() const;

  /// Rough resident size of the index in bytes.
  std::size_t memory_footprint() const;

 private:
  friend class CorpusBuilder;

  std::vector<PaperRecord> papers_;
  std::vector<std::string> author_ids_;
  std::vector<SubfieldInfo> subfield_table_;
  std::vector<std::int32_t> paper_subfield_;  // index into subfield_table_, -1 if none
  std::vector<std::uint64_t> author_offsets_;
  std::vector<AuthorIdx> author_list_;
  std::vector<std::uint64_t> paper_offsets_;
  std::vector<PaperIdx> paper_list_;
  std::vector<std::uint64_t> citer_offsets_;
  std::vector<PaperIdx> citer_list_;
  FieldTaxonomy taxonomy_;
  BuildReport report_;
};

/// Builds an index from fully materialized record streams. Duplicate rows
/// collapse; edges naming unknown papers are dropped and counted; a paper id
/// repeated with a conflicting doc_type throws CorpusError.
CorpusIndex build_index(std::span<const PaperRecord> papers, std::span<const AuthorshipRecord> authorships,
                        std::span<const CitationEdge> citations, FieldTaxonomy taxonomy);

}  // namespace citorch
