#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "citorch/corpus.hpp"
#include "citorch/rational.hpp"

namespace citorch {

/// A metric requested for an author it is not defined for (h = 0 for C/h²,
/// no citations for A50%C).
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Counting rules shared by every indicator.
///
/// Only full papers of the examined author receive countable citations and
/// enter the h-index and shared-paper counts. A citation is one
/// (citing paper, cited paper) edge, so a paper citing k of the author's
/// papers contributes k. Citing papers may be of any type unless
/// `citing_full_only` is set.
struct MetricsConfig {
  bool citing_full_only = false;
  std::uint32_t a50_threshold = 50;
  std::uint64_t seed = 0;  // field-assignment tie-break
  unsigned threads = 1;
};

struct AuthorMetrics {
  std::string author_id;
  std::uint32_t n_full_papers = 0;
  std::uint64_t citations = 0;
  std::uint32_t h_index = 0;
  std::optional<Rational> c_over_h2;   // absent when h = 0
  std::optional<std::uint32_t> a50pc;  // absent when C = 0
  std::uint32_t a50 = 0;
  std::optional<std::string> field_id;
  std::optional<std::string> subfield_id;

  friend bool operator==(const AuthorMetrics&, const AuthorMetrics&) = default;
};

/// Largest h such that at least h entries are >= h.
std::uint32_t h_index(std::span<const std::uint64_t> citation_counts);

/// C / h², exact. Throws UndefinedMetric for h = 0.
Rational c_over_h2(std::uint64_t citations, std::uint32_t h);

/// Full papers of `author`, ascending.
std::vector<PaperIdx> full_papers_of(const CorpusIndex& index, AuthorIdx author);

/// Citations received by one paper under the counting rules.
std::uint64_t citations_received(const CorpusIndex& index, PaperIdx paper, const MetricsConfig& cfg = {});

/// Citations on each of the author's full papers, in paper order.
std::vector<std::uint64_t> citation_profile(const CorpusIndex& index, AuthorIdx author, const MetricsConfig& cfg = {});

/// Reusable scratch space for the greedy A50%C computation. Sized lazily to
/// the index; one per thread.
class A50Workspace {
 public:
  void prepare(const CorpusIndex& index);

 private:
  friend std::uint32_t a50pc_greedy(const CorpusIndex&, AuthorIdx, const MetricsConfig&, A50Workspace&);

  std::vector<std::uint32_t> paper_weight;  // edges from a live citing paper into the examined author
  std::vector<std::int64_t> contribution;   // per candidate author
  std::vector<char> consumed;               // per candidate author
  std::vector<PaperIdx> touched_papers;
  std::vector<AuthorIdx> touched_authors;
};

/// Number of citing authors the greedy covering selects until they explain
/// at least half of the author's citations. Each round picks the candidate
/// contributing the most citations from still-unconsumed citing papers
/// (ties: smallest author_id), then consumes every paper that candidate
/// wrote. The examined author is a candidate. Citing papers without any
/// authorship row act as one anonymous candidate each, ordered after all
/// named authors by paper id. Throws UndefinedMetric when C = 0.
std::uint32_t a50pc_greedy(const CorpusIndex& index, AuthorIdx author, const MetricsConfig& cfg, A50Workspace& ws);
std::uint32_t a50pc_greedy(const CorpusIndex& index, AuthorIdx author, const MetricsConfig& cfg = {});

/// Straightforward re-implementation of the same procedure over string ids,
/// recomputing every contribution from scratch each round. Test oracle.
std::uint32_t a50pc_oracle(const CorpusIndex& index, std::string_view author_id, const MetricsConfig& cfg = {});

/// Distinct other authors sharing strictly more than `threshold` full papers
/// with `author`.
std::uint32_t a50_coauthors(const CorpusIndex& index, AuthorIdx author, std::uint32_t threshold = 50);

/// Indicators for one author, without field assignment.
AuthorMetrics compute_author_metrics(const CorpusIndex& index, AuthorIdx author, const MetricsConfig& cfg,
                                     A50Workspace& ws);

/// Indicators plus assigned field for every cohort member, sorted by
/// author_id. The cohort is partitioned across `cfg.threads` workers; the
/// result does not depend on the thread count or cohort order.
std::vector<AuthorMetrics> compute_all_metrics(const CorpusIndex& index, std::span<const AuthorIdx> cohort,
                                               const MetricsConfig& cfg = {});

}  // namespace citorch
