#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "citorch/corpus.hpp"

namespace citorch::testing {

// Small hand-built corpora. Subfields "s1".."s4" belong to fields F1/F2.
struct MiniCorpus {
  std::vector<PaperRecord> papers;
  std::vector<AuthorshipRecord> authorships;
  std::vector<CitationEdge> citations;
  FieldTaxonomy taxonomy = default_taxonomy();

  static FieldTaxonomy default_taxonomy() {
    FieldTaxonomy t;
    t.add("s1", {"Sub One", "F1", "Field One"});
    t.add("s2", {"Sub Two", "F1", "Field One"});
    t.add("s3", {"Sub Three", "F2", "Field Two"});
    t.add("s4", {"Sub Four", "F2", "Field Two"});
    return t;
  }

  MiniCorpus& paper(const std::string& id, std::initializer_list<std::string> authors,
                    std::optional<std::string> subfield = "s1", DocType type = DocType::article) {
    papers.push_back({id, type, std::move(subfield)});
    for (const auto& a : authors) authorships.push_back({id, a});
    return *this;
  }

  MiniCorpus& cite(const std::string& from, const std::string& to, int times = 1) {
    for (int i = 0; i < times; ++i) citations.push_back({from, to});
    return *this;
  }

  CorpusIndex build() const { return build_index(papers, authorships, citations, taxonomy); }
};

struct RandomCorpusShape {
  std::uint32_t max_authors = 50;
  std::uint32_t max_papers = 60;
  std::uint32_t max_edges = 300;
  std::uint32_t max_authors_per_paper = 4;
};

// Random corpus with repeated edges, unauthored papers and non-full papers
// mixed in, so every counting rule gets exercised.
inline MiniCorpus random_corpus(std::mt19937_64& rng, const RandomCorpusShape& shape = {}) {
  auto pick = [&](std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
  };
  MiniCorpus c;
  const std::uint32_t n_authors = pick(1, shape.max_authors);
  const std::uint32_t n_papers = pick(2, shape.max_papers);
  const std::uint32_t n_edges = pick(0, shape.max_edges);
  static const char* subs[] = {"s1", "s2", "s3", "s4"};
  for (std::uint32_t p = 0; p < n_papers; ++p) {
    const std::string pid = "p" + std::to_string(p);
    const DocType type = pick(0, 9) == 0 ? DocType::other : static_cast<DocType>(pick(0, 2));
    std::optional<std::string> sub;
    if (pick(0, 9) != 0) sub = subs[pick(0, 3)];
    c.papers.push_back({pid, type, sub});
    const std::uint32_t k = pick(0, 9) == 0 ? 0 : pick(1, shape.max_authors_per_paper);
    for (std::uint32_t i = 0; i < k; ++i) c.authorships.push_back({pid, "a" + std::to_string(pick(0, n_authors - 1))});
  }
  for (std::uint32_t e = 0; e < n_edges; ++e) {
    c.citations.push_back({"p" + std::to_string(pick(0, n_papers - 1)), "p" + std::to_string(pick(0, n_papers - 1))});
  }
  return c;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("citorch-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace citorch::testing
