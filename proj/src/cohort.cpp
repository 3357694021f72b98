#include "citorch/cohort.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace citorch {
namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Tally {
  std::uint64_t papers = 0;
  std::uint64_t citations = 0;
};

// Winner among tallies: most papers, then most citations, then smallest
// tie-break key.
std::string pick(const std::map<std::string, Tally, std::less<>>& tallies, std::uint64_t seed,
                 std::string_view author_id) {
  const std::string* best = nullptr;
  std::tuple<std::uint64_t, std::uint64_t, std::uint64_t> best_rank{};
  for (const auto& [name, t] : tallies) {
    // Larger is better on every component; the key is negated into "larger".
    const std::tuple<std::uint64_t, std::uint64_t, std::uint64_t> rank{t.papers, t.citations,
                                                                       ~tie_break_key(seed, author_id, name)};
    if (best == nullptr || rank > best_rank) {
      best = &name;
      best_rank = rank;
    }
  }
  return *best;
}

}  // namespace

std::uint64_t tie_break_key(std::uint64_t seed, std::string_view author_id, std::string_view candidate) {
  std::uint64_t h = fnv1a(0xcbf29ce484222325ULL, author_id);
  h = fnv1a(h ^ 0x1f, candidate);
  return splitmix64(splitmix64(seed) ^ h);
}

std::optional<FieldAssignment> assign_field(const CorpusIndex& index, AuthorIdx author, std::uint64_t seed,
                                            const MetricsConfig& counting) {
  std::map<std::string, Tally, std::less<>> fields;
  for (PaperIdx p : index.papers_of(author)) {
    if (!index.is_full(p)) continue;
    const SubfieldInfo* sub = index.subfield_of(p);
    if (sub == nullptr) continue;
    Tally& t = fields[sub->field_id];
    ++t.papers;
    t.citations += citations_received(index, p, counting);
  }
  if (fields.empty()) return std::nullopt;

  const std::string& author_id = index.author_id(author);
  FieldAssignment out;
  out.field_id = pick(fields, seed, author_id);

  std::map<std::string, Tally, std::less<>> subfields;
  for (PaperIdx p : index.papers_of(author)) {
    if (!index.is_full(p)) continue;
    const SubfieldInfo* sub = index.subfield_of(p);
    if (sub == nullptr || sub->field_id != out.field_id) continue;
    Tally& t = subfields[*index.paper(p).subfield_id];
    ++t.papers;
    t.citations += citations_received(index, p, counting);
  }
  out.subfield_id = pick(subfields, seed, author_id);
  return out;
}

std::vector<AuthorIdx> eligible_authors(const CorpusIndex& index, const EligibilityConfig& cfg,
                                        const MetricsConfig& counting) {
  std::vector<AuthorIdx> out;
  for (AuthorIdx a = 0; a < index.author_count(); ++a) {
    std::uint64_t full = 0;
    std::uint64_t citations = 0;
    bool classified = false;
    for (PaperIdx p : index.papers_of(a)) {
      if (!index.is_full(p)) continue;
      ++full;
      citations += citations_received(index, p, counting);
      classified = classified || index.subfield_of(p) != nullptr;
    }
    if (full > cfg.min_full_papers && citations >= cfg.min_citations && classified) out.push_back(a);
  }
  return out;
}

}  // namespace citorch
