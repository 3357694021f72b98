#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citorch/corpus.hpp"
#include "citorch/metrics.hpp"

namespace citorch {

struct EligibilityConfig {
  std::uint32_t min_full_papers = 5;   // strictly more than this many full papers
  std::uint64_t min_citations = 1000;  // at least this many citations
  std::uint64_t seed = 0;
};

struct FieldAssignment {
  std::string field_id;
  std::string subfield_id;

  friend bool operator==(const FieldAssignment&, const FieldAssignment&) = default;
};

/// Deterministic draw in [0, 2^64) keyed on (seed, author_id, candidate).
/// Used to break ties that survive the paper-count and citation rules.
std::uint64_t tie_break_key(std::uint64_t seed, std::string_view author_id, std::string_view candidate);

/// Field holding most of the author's classified full papers; ties go to the
/// field whose papers (by this author) received more citations, then to the
/// smallest tie_break_key. The subfield is chosen the same way among the
/// subfields of the winning field. None when no full paper is classified.
std::optional<FieldAssignment> assign_field(const CorpusIndex& index, AuthorIdx author, std::uint64_t seed,
                                            const MetricsConfig& counting = {});

/// Authors with more than `min_full_papers` full papers, at least
/// `min_citations` citations and an assignable field. Sorted.
std::vector<AuthorIdx> eligible_authors(const CorpusIndex& index, const EligibilityConfig& cfg,
                                        const MetricsConfig& counting = {});

}  // namespace citorch
