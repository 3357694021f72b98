#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "citorch/corpus.hpp"
#include "citorch/stats.hpp"

namespace citorch {

/// Generator parameters. Background authors publish in small lab groups and
/// cite by preferential attachment; planted authors get hand-placed edges.
struct SynthConfig {
  std::uint64_t seed = 42;

  // Background.
  std::uint32_t n_background_authors = 10000;
  std::uint32_t group_size_min = 8;
  std::uint32_t group_size_max = 20;
  std::uint32_t papers_per_author_min = 6;
  std::uint32_t papers_per_author_max = 45;  // < 50 keeps background A50 at 0
  std::uint32_t team_size_min = 3;
  std::uint32_t team_size_max = 12;
  std::uint32_t refs_per_paper_min = 40;
  std::uint32_t refs_per_paper_max = 100;
  double attachment_exponent = 1.0;  // target weight (citations + 1)^exponent
  double nonfull_fraction = 0.04;    // background papers typed as editorials
  double unclassified_fraction = 0.01;
  double off_subfield_fraction = 0.15;  // papers outside the group's home subfield

  // Self-citers: `self_citer_h` core papers, each cited exactly h times, at
  // least `self_citer_share` of it from the author's own papers.
  std::uint32_t n_self_citers = 20;
  std::uint32_t self_citer_papers = 40;
  std::uint32_t self_citer_h = 32;
  double self_citer_share = 0.6;

  // Cartels: members cite each other's core papers exactly h times each.
  std::uint32_t n_cartels = 3;
  std::uint32_t cartel_size = 5;
  std::uint32_t cartel_papers = 36;
  std::uint32_t cartel_h = 32;

  // Hyperteams: cliques signing every joint paper, citing inside the team.
  std::uint32_t n_hyperteams = 1;
  std::uint32_t team_size = 10;
  std::uint32_t joint_papers = 60;
  std::uint32_t team_refs_per_paper = 20;

  /// Relative weight per field, indexed like the built-in 22-field taxonomy.
  /// Empty means the built-in default mixture.
  std::vector<double> field_weights;
  std::string plant_field_id = "F05";      // self-citers and cartels
  std::string hyperteam_field_id = "F06";  // hyperteams
};

class SynthConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws SynthConfigError for infeasible parameter combinations.
void validate(const SynthConfig& cfg);

enum class PlantLabel { background, self_citer, cartel_member, hyperteam_member };
std::string_view to_string(PlantLabel label);
PlantLabel parse_plant_label(std::string_view text);

struct TruthRow {
  std::string author_id;
  PlantLabel label = PlantLabel::background;
  std::optional<std::uint32_t> group_id;  // cartel or team number

  friend bool operator==(const TruthRow&, const TruthRow&) = default;
};

/// One row per author; labels partition the author set.
struct GroundTruth {
  std::vector<TruthRow> rows;  // sorted by author_id

  std::set<std::string> authors_with(PlantLabel label) const;
};

struct TaxonomyRow {
  std::string subfield_id;
  SubfieldInfo info;
};

struct SynthCorpus {
  std::vector<TaxonomyRow> taxonomy;
  std::vector<PaperRecord> papers;
  std::vector<AuthorshipRecord> authorships;
  std::vector<CitationEdge> citations;
  GroundTruth truth;

  FieldTaxonomy field_taxonomy() const;
  CorpusIndex index() const;
};

/// The 22 fields with eight subfields each used by the generator.
std::vector<TaxonomyRow> builtin_taxonomy();

/// Deterministic for a fixed config: same seed, same corpus, same row order.
SynthCorpus generate(const SynthConfig& cfg);

/// Writes papers.csv, authorships.csv, citations.csv, taxonomy.csv and
/// truth.csv into `dir` (created if needed).
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

GroundTruth read_truth(std::istream& in);

struct DetectionScore {
  std::string motif;  // self_citer, cartel_member, small_scale, hyperteam_member
  Metric metric = Metric::c_over_h2;
  std::uint64_t planted = 0;
  std::uint64_t tail_size = 0;
  std::uint64_t detected = 0;       // planted authors inside the tail
  std::optional<double> recall;     // none when nothing was planted
  std::optional<double> precision;  // none when the tail is empty
};

/// Recall and precision of each motif against the tail designed to catch
/// it: small-scale motifs against the c_over_h2 and a50pc tails,
/// hyperteams against the a50 tail. Tails missing from `tails` are skipped.
std::vector<DetectionScore> evaluate_detection(const GroundTruth& truth,
                                               const std::map<Metric, std::set<std::string>>& tails);

}  // namespace citorch
