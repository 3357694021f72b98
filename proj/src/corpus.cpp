#include "citorch/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace citorch {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

// Sorted, de-duplicated pairs -> CSR keyed on .first.
template <typename Pairs>
void fill_csr(const Pairs& pairs, std::size_t n, std::vector<std::uint64_t>& offsets,
              std::vector<std::uint32_t>& list) {
  offsets.assign(n + 1, 0);
  list.resize(pairs.size());
  for (const auto& [key, _] : pairs) ++offsets[key + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  for (std::size_t i = 0; i < pairs.size(); ++i) list[i] = pairs[i].second;
}

}  // namespace

DocType parse_doc_type(std::string_view text) {
  if (iequals(text, "article")) return DocType::article;
  if (iequals(text, "conference_paper")) return DocType::conference_paper;
  if (iequals(text, "review")) return DocType::review;
  return DocType::other;
}

std::string_view to_string(DocType type) {
  switch (type) {
    case DocType::article:
      return "article";
    case DocType::conference_paper:
      return "conference_paper";
    case DocType::review:
      return "review";
    case DocType::other:
      break;
  }
  return "other";
}

bool is_full_paper(const PaperRecord& paper) { return is_full_paper(paper.doc_type); }

void FieldTaxonomy::add(const std::string& subfield_id, SubfieldInfo info) {
  if (auto it = subfields_.find(subfield_id); it != subfields_.end()) {
    if (it->second.field_id != info.field_id) {
      throw CorpusError("subfield '" + subfield_id + "' assigned to conflicting fields '" + it->second.field_id +
                        "' and '" + info.field_id + "'");
    }
    return;
  }
  if (auto f = fields_.find(info.field_id); f == fields_.end()) {
    fields_.emplace(info.field_id, info.field_name);
  }
  subfields_.emplace(subfield_id, std::move(info));
}

const SubfieldInfo* FieldTaxonomy::find(std::string_view subfield_id) const {
  auto it = subfields_.find(subfield_id);
  return it == subfields_.end() ? nullptr : &it->second;
}

std::optional<std::string> FieldTaxonomy::field_name(std::string_view field_id) const {
  auto it = fields_.find(field_id);
  if (it == fields_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t CorpusBuilder::intern_paper(std::string_view id) {
  auto [it, inserted] = paper_lookup_.try_emplace(std::string(id), static_cast<std::uint32_t>(paper_names_.size()));
  if (inserted) {
    paper_names_.emplace_back(id);
    paper_slots_.emplace_back();
  }
  return it->second;
}

std::uint32_t CorpusBuilder::intern_author(std::string_view id) {
  auto [it, inserted] = author_lookup_.try_emplace(std::string(id), static_cast<std::uint32_t>(author_names_.size()));
  if (inserted) author_names_.emplace_back(id);
  return it->second;
}

void CorpusBuilder::add_paper(const PaperRecord& paper) {
  if (paper.paper_id.empty()) throw CorpusError("paper with empty paper_id");
  PaperSlot& slot = paper_slots_[intern_paper(paper.paper_id)];
  if (slot.defined) {
    if (slot.doc_type != paper.doc_type || slot.subfield_id != paper.subfield_id) {
      throw CorpusError("paper '" + paper.paper_id + "' listed twice with conflicting records");
    }
    ++report_.duplicate_papers;
    return;
  }
  slot.defined = true;
  slot.doc_type = paper.doc_type;
  slot.subfield_id = paper.subfield_id;
}

void CorpusBuilder::add_authorship(std::string_view paper_id, std::string_view author_id) {
  if (paper_id.empty() || author_id.empty()) throw CorpusError("authorship with empty id");
  const auto p = intern_paper(paper_id);
  authorships_.emplace_back(p, intern_author(author_id));
}

void CorpusBuilder::add_citation(std::string_view citing_paper_id, std::string_view cited_paper_id) {
  if (citing_paper_id.empty() || cited_paper_id.empty()) throw CorpusError("citation with empty id");
  if (citing_paper_id == cited_paper_id) {
    ++report_.citations_self_loop;
    return;
  }
  const auto citing = intern_paper(citing_paper_id);
  citations_.emplace_back(citing, intern_paper(cited_paper_id));
}

CorpusIndex CorpusBuilder::build() && {
  CorpusIndex index;
  index.report_ = report_;
  BuildReport& report = index.report_;

  // Only papers defined by a paper record survive; references to the rest
  // are dropped below.
  std::vector<std::uint32_t> paper_map(paper_names_.size(), UINT32_MAX);
  {
    std::vector<std::uint32_t> defined;
    for (std::uint32_t i = 0; i < paper_slots_.size(); ++i) {
      if (paper_slots_[i].defined) defined.push_back(i);
    }
    std::sort(defined.begin(), defined.end(),
              [&](std::uint32_t a, std::uint32_t b) { return paper_names_[a] < paper_names_[b]; });
    index.papers_.reserve(defined.size());
    for (std::uint32_t rank = 0; rank < defined.size(); ++rank) {
      const std::uint32_t old = defined[rank];
      paper_map[old] = rank;
      PaperSlot& slot = paper_slots_[old];
      index.papers_.push_back(PaperRecord{std::move(paper_names_[old]), slot.doc_type, std::move(slot.subfield_id)});
    }
  }
  paper_names_.clear();
  paper_names_.shrink_to_fit();
  paper_lookup_.clear();
  paper_slots_.clear();
  paper_slots_.shrink_to_fit();

  // Authorships, remapped to dense ranks.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pa;
  pa.reserve(authorships_.size());
  {
    // Authors only attached to unknown papers are dropped along with the row.
    std::vector<char> author_used(author_names_.size(), 0);
    for (const auto& [p, a] : authorships_) {
      if (paper_map[p] == UINT32_MAX) {
        ++report.authorships_unknown_paper;
        continue;
      }
      author_used[a] = 1;
    }
    std::vector<std::uint32_t> order(author_names_.size());
    std::iota(order.begin(), order.end(), 0U);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t x, std::uint32_t y) { return author_names_[x] < author_names_[y]; });
    std::vector<std::uint32_t> author_map(author_names_.size(), UINT32_MAX);
    for (std::uint32_t old : order) {
      if (!author_used[old]) continue;
      author_map[old] = static_cast<std::uint32_t>(index.author_ids_.size());
      index.author_ids_.push_back(std::move(author_names_[old]));
    }
    for (const auto& [p, a] : authorships_) {
      if (paper_map[p] == UINT32_MAX) continue;
      pa.emplace_back(paper_map[p], author_map[a]);
    }
  }
  authorships_.clear();
  authorships_.shrink_to_fit();
  author_names_.clear();
  author_lookup_.clear();

  std::sort(pa.begin(), pa.end());
  {
    const auto before = pa.size();
    pa.erase(std::unique(pa.begin(), pa.end()), pa.end());
    report.duplicate_authorships += before - pa.size();
  }
  fill_csr(pa, index.papers_.size(), index.author_offsets_, index.author_list_);
  for (auto& [p, a] : pa) std::swap(p, a);
  std::sort(pa.begin(), pa.end());
  fill_csr(pa, index.author_ids_.size(), index.paper_offsets_, index.paper_list_);
  pa.clear();
  pa.shrink_to_fit();

  // Citations keyed on the cited paper.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cc;
  cc.reserve(citations_.size());
  for (const auto& [citing, cited] : citations_) {
    if (paper_map[citing] == UINT32_MAX || paper_map[cited] == UINT32_MAX) {
      ++report.citations_unknown_paper;
      continue;
    }
    cc.emplace_back(paper_map[cited], paper_map[citing]);
  }
  citations_.clear();
  citations_.shrink_to_fit();
  std::sort(cc.begin(), cc.end());
  {
    const auto before = cc.size();
    cc.erase(std::unique(cc.begin(), cc.end()), cc.end());
    report.duplicate_citations += before - cc.size();
  }
  fill_csr(cc, index.papers_.size(), index.citer_offsets_, index.citer_list_);

  // Subfield lookup table.
  index.taxonomy_ = std::move(taxonomy_);
  std::map<std::string_view, std::int32_t> slot_of;
  for (const auto& [id, info] : index.taxonomy_.subfields()) {
    slot_of.emplace(id, static_cast<std::int32_t>(index.subfield_table_.size()));
    index.subfield_table_.push_back(info);
  }
  index.paper_subfield_.assign(index.papers_.size(), -1);
  for (std::size_t p = 0; p < index.papers_.size(); ++p) {
    const auto& sub = index.papers_[p].subfield_id;
    if (!sub) continue;
    if (auto it = slot_of.find(*sub); it != slot_of.end()) {
      index.paper_subfield_[p] = it->second;
    } else {
      ++report.papers_unknown_subfield;
    }
  }
  return index;
}

std::optional<PaperIdx> CorpusIndex::find_paper(std::string_view paper_id) const {
  auto it = std::lower_bound(papers_.begin(), papers_.end(), paper_id,
                             [](const PaperRecord& p, std::string_view id) { return p.paper_id < id; });
  if (it == papers_.end() || it->paper_id != paper_id) return std::nullopt;
  return static_cast<PaperIdx>(it - papers_.begin());
}

std::optional<AuthorIdx> CorpusIndex::find_author(std::string_view author_id) const {
  auto it = std::lower_bound(author_ids_.begin(), author_ids_.end(), author_id,
                             [](const std::string& a, std::string_view id) { return a < id; });
  if (it == author_ids_.end() || *it != author_id) return std::nullopt;
  return static_cast<AuthorIdx>(it - author_ids_.begin());
}

const SubfieldInfo* CorpusIndex::subfield_of(PaperIdx p) const {
  const auto slot = paper_subfield_[p];
  return slot < 0 ? nullptr : &subfield_table_[static_cast<std::size_t>(slot)];
}

std::vector<AuthorshipRecord> CorpusIndex::authorship_records() const {
  std::vector<AuthorshipRecord> out;
  out.reserve(author_list_.size());
  for (PaperIdx p = 0; p < papers_.size(); ++p) {
    for (AuthorIdx a : authors_of(p)) out.push_back({papers_[p].paper_id, author_ids_[a]});
  }
  return out;
}

std::vector<CitationEdge> CorpusIndex::citation_records() const {
  std::vector<CitationEdge> out;
  out.reserve(citer_list_.size());
  for (PaperIdx p = 0; p < papers_.size(); ++p) {
    for (PaperIdx citing : citers_of(p)) out.push_back({papers_[citing].paper_id, papers_[p].paper_id});
  }
  return out;
}

std::size_t CorpusIndex::memory_footprint() const {
  std::size_t bytes = 0;
  for (const auto& p : papers_) {
    bytes += sizeof(PaperRecord) + p.paper_id.capacity() + (p.subfield_id ? p.subfield_id->capacity() : 0);
  }
  for (const auto& a : author_ids_) bytes += sizeof(std::string) + a.capacity();
  bytes += paper_subfield_.capacity() * sizeof(std::int32_t);
  bytes += (author_offsets_.capacity() + paper_offsets_.capacity() + citer_offsets_.capacity()) * sizeof(std::uint64_t);
  bytes += (author_list_.capacity() + paper_list_.capacity() + citer_list_.capacity()) * sizeof(std::uint32_t);
  return bytes;
}

CorpusIndex build_index(std::span<const PaperRecord> papers, std::span<const AuthorshipRecord> authorships,
                        std::span<const CitationEdge> citations, FieldTaxonomy taxonomy) {
  CorpusBuilder builder;
  for (const auto& p : papers) builder.add_paper(p);
  for (const auto& a : authorships) builder.add_authorship(a.paper_id, a.author_id);
  for (const auto& c : citations) builder.add_citation(c.citing_paper_id, c.cited_paper_id);
  builder.set_taxonomy(std::move(taxonomy));
  return std::move(builder).build();
}

}  // namespace citorch
