#include "citorch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "citorch/ingest.hpp"

namespace citorch {
namespace {

constexpr std::array<std::string_view, 22> kFieldNames{
    "Agriculture, Fisheries & Forestry",
    "Biology",
    "Biomedical Research",
    "Built Environment & Design",
    "Chemistry",
    "Clinical Medicine",
    "Communication & Textual Studies",
    "Earth & Environmental Sciences",
    "Economics & Business",
    "Enabling & Strategic Technologies",
    "Engineering",
    "General Arts, Humanities & Social Sciences",
    "General Science & Technology",
    "Historical Studies",
    "Information & Communication Technologies",
    "Mathematics & Statistics",
    "Philosophy & Theology",
    "Physics & Astronomy",
    "Psychology & Cognitive Sciences",
    "Public Health & Health Services",
    "Social Sciences",
    "Visual & Performing Arts",
};

// Share of eligible authors per field, in percent.
constexpr std::array<double, 22> kDefaultFieldWeights{2.39, 4.33,  12.66, 0.24, 6.13, 38.71, 0.11, 3.88,
                                                      1.39, 6.80,  3.75,  0.00, 0.01, 0.10,  3.82, 0.64,
                                                      0.03, 11.63, 1.22,  1.33, 0.83, 0.00};

constexpr std::uint32_t kSubfieldsPerField = 8;

std::string field_id_of(std::size_t field) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "F%02zu", field + 1);
  return buf;
}

std::string subfield_id_of(std::size_t field, std::uint32_t k) { return std::to_string((field + 1) * 100 + k + 1); }

std::string padded(const char* prefix, std::uint64_t n, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*llu", prefix, width, static_cast<unsigned long long>(n));
  return buf;
}

/// Engine output is fully specified by the standard; the helpers below avoid
/// the implementation-defined std distributions so corpora are portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {  // uniform in [0, n)
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  std::size_t weighted(const std::vector<double>& weights, double total) {
    double x = unit() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (x < weights[i]) return i;
      x -= weights[i];
    }
    for (std::size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0) return i;
    }
    return 0;
  }

 private:
  std::mt19937_64 engine_;
};

/// Fenwick tree over non-negative weights supporting sampling by prefix sum.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::size_t n) : tree_(n + 1, 0.0), weight_(n, 0.0) {}

  void set(std::size_t i, double w) {
    const double delta = w - weight_[i];
    weight_[i] = w;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }

  double total() const {
    double s = 0;
    for (std::size_t k = tree_.size() - 1; k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }

  std::size_t sample(Rng& rng) const {
    double x = rng.unit() * total();
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= x) {
        pos += step;
        x -= tree_[pos];
      }
    }
    return std::min(pos, weight_.size() - 1);
  }

 private:
  std::vector<double> tree_;
  std::vector<double> weight_;
};

struct Builder {
  SynthCorpus corpus;

  std::size_t add_paper(std::string id, DocType type, std::optional<std::string> subfield,
                        const std::vector<std::string>& authors) {
    for (const auto& a : authors) corpus.authorships.push_back({id, a});
    corpus.papers.push_back({std::move(id), type, std::move(subfield)});
    return corpus.papers.size() - 1;
  }
  void cite(std::size_t citing, std::size_t cited) {
    corpus.citations.push_back({corpus.papers[citing].paper_id, corpus.papers[cited].paper_id});
  }
};

std::size_t field_index(const std::string& field_id) {
  for (std::size_t f = 0; f < kFieldNames.size(); ++f) {
    if (field_id_of(f) == field_id) return f;
  }
  throw SynthConfigError("unknown field id: " + field_id);
}

}  // namespace

std::vector<TaxonomyRow> builtin_taxonomy() {
  std::vector<TaxonomyRow> rows;
  for (std::size_t f = 0; f < kFieldNames.size(); ++f) {
    for (std::uint32_t k = 0; k < kSubfieldsPerField; ++k) {
      std::string name = std::string(kFieldNames[f]) + " " + std::to_string(k + 1);
      if (kFieldNames[f] == "Physics & Astronomy" && k == 0) name = "Nuclear & Particle Physics";
      rows.push_back({subfield_id_of(f, k), {std::move(name), field_id_of(f), std::string(kFieldNames[f])}});
    }
  }
  return rows;
}

void validate(const SynthConfig& cfg) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw SynthConfigError("infeasible synth config: " + what);
  };
  require(cfg.group_size_min >= 1 && cfg.group_size_min <= cfg.group_size_max, "group size bounds");
  require(cfg.papers_per_author_min >= 1 && cfg.papers_per_author_min <= cfg.papers_per_author_max,
          "papers-per-author bounds");
  require(cfg.team_size_min >= 1 && cfg.team_size_min <= cfg.team_size_max, "team size bounds");
  require(cfg.refs_per_paper_min <= cfg.refs_per_paper_max, "reference count bounds");
  require(cfg.attachment_exponent >= 0.0, "attachment exponent must be >= 0");
  require(cfg.nonfull_fraction >= 0 && cfg.nonfull_fraction <= 1, "nonfull fraction");
  require(cfg.unclassified_fraction >= 0 && cfg.unclassified_fraction <= 1, "unclassified fraction");
  require(cfg.off_subfield_fraction >= 0 && cfg.off_subfield_fraction <= 1, "off-subfield fraction");
  if (cfg.n_self_citers > 0) {
    require(cfg.self_citer_h >= 1 && cfg.self_citer_h <= cfg.self_citer_papers, "self-citer h exceeds its papers");
    require(cfg.self_citer_share >= 0 && cfg.self_citer_share <= 1, "self-citation share");
    const auto own = static_cast<std::uint32_t>(std::ceil(cfg.self_citer_share * cfg.self_citer_h));
    require(own <= cfg.self_citer_papers - 1, "self-citer has too few papers to self-cite");
    require(cfg.self_citer_h - own == 0 || cfg.n_background_authors > 0, "self-citer needs background citers");
  }
  if (cfg.n_cartels > 0) {
    require(cfg.cartel_size >= 2, "cartel_size must be >= 2 when cartels are requested");
    require(cfg.cartel_h >= 1 && cfg.cartel_h <= cfg.cartel_papers, "cartel h exceeds its papers");
    const std::uint32_t per_member = (cfg.cartel_h + cfg.cartel_size - 2) / (cfg.cartel_size - 1);
    require(per_member <= cfg.cartel_papers, "cartel too small to place h citations per core paper");
  }
  if (cfg.n_hyperteams > 0) {
    require(cfg.team_size >= 2, "team_size must be >= 2 when hyperteams are requested");
    require(cfg.joint_papers > 50, "hyperteams need more than 50 joint papers");
    require(cfg.team_refs_per_paper < cfg.joint_papers, "team references exceed available team papers");
  }
  if (!cfg.field_weights.empty()) {
    require(cfg.field_weights.size() == kFieldNames.size(), "field_weights must have 22 entries");
    double total = 0;
    for (double w : cfg.field_weights) {
      require(w >= 0, "negative field weight");
      total += w;
    }
    require(total > 0, "field weights sum to zero");
  }
  field_index(cfg.plant_field_id);
  field_index(cfg.hyperteam_field_id);
}

std::string_view to_string(PlantLabel label) {
  switch (label) {
    case PlantLabel::background:
      return "background";
    case PlantLabel::self_citer:
      return "self_citer";
    case PlantLabel::cartel_member:
      return "cartel_member";
    case PlantLabel::hyperteam_member:
      break;
  }
  return "hyperteam_member";
}

PlantLabel parse_plant_label(std::string_view text) {
  for (auto l :
       {PlantLabel::background, PlantLabel::self_citer, PlantLabel::cartel_member, PlantLabel::hyperteam_member}) {
    if (to_string(l) == text) return l;
  }
  throw std::invalid_argument("unknown label: " + std::string(text));
}

std::set<std::string> GroundTruth::authors_with(PlantLabel label) const {
  std::set<std::string> out;
  for (const auto& r : rows) {
    if (r.label == label) out.insert(r.author_id);
  }
  return out;
}

FieldTaxonomy SynthCorpus::field_taxonomy() const {
  FieldTaxonomy t;
  for (const auto& row : taxonomy) t.add(row.subfield_id, row.info);
  return t;
}

CorpusIndex SynthCorpus::index() const { return build_index(papers, authorships, citations, field_taxonomy()); }

SynthCorpus generate(const SynthConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  Builder b;
  b.corpus.taxonomy = builtin_taxonomy();

  std::vector<double> weights(cfg.field_weights.begin(), cfg.field_weights.end());
  if (weights.empty()) weights.assign(kDefaultFieldWeights.begin(), kDefaultFieldWeights.end());
  double weight_total = 0;
  for (double w : weights) weight_total += w;

  auto random_subfield = [&] {
    const std::size_t f = rng.below(kFieldNames.size());
    return subfield_id_of(f, static_cast<std::uint32_t>(rng.below(kSubfieldsPerField)));
  };
  auto full_type = [&] {
    const std::uint64_t r = rng.below(10);
    return r < 8 ? DocType::article : (r == 8 ? DocType::review : DocType::conference_paper);
  };

  // Background: lab groups writing team papers.
  const double log_lo = std::log(static_cast<double>(cfg.papers_per_author_min));
  const double log_hi = std::log(static_cast<double>(cfg.papers_per_author_max) + 1.0);
  std::vector<std::size_t> background_papers;
  std::uint32_t next_author = 0;
  std::uint64_t next_paper = 0;
  while (next_author < cfg.n_background_authors) {
    const auto size = static_cast<std::uint32_t>(std::min<std::uint64_t>(
        rng.between(cfg.group_size_min, cfg.group_size_max), cfg.n_background_authors - next_author));
    const std::size_t field = rng.weighted(weights, weight_total);
    const std::string home = subfield_id_of(field, static_cast<std::uint32_t>(rng.below(kSubfieldsPerField)));

    std::vector<std::string> members;
    std::vector<std::uint32_t> quota;
    for (std::uint32_t i = 0; i < size; ++i) {
      members.push_back(padded("a", ++next_author, 6));
      const double papers = std::floor(std::exp(log_lo + rng.unit() * (log_hi - log_lo)));
      quota.push_back(
          std::clamp(static_cast<std::uint32_t>(papers), cfg.papers_per_author_min, cfg.papers_per_author_max));
    }

    while (true) {
      std::vector<std::uint32_t> open;
      for (std::uint32_t i = 0; i < size; ++i) {
        if (quota[i] > 0) open.push_back(i);
      }
      if (open.empty()) break;
      // The member with the largest remaining quota leads; the rest are drawn at random.
      const auto lead_it = std::max_element(open.begin(), open.end(),
                                            [&](std::uint32_t x, std::uint32_t y) { return quota[x] < quota[y]; });
      std::swap(*lead_it, open.front());
      const std::size_t team = std::min<std::size_t>(rng.between(cfg.team_size_min, cfg.team_size_max), open.size());
      for (std::size_t k = 1; k < team; ++k) std::swap(open[k], open[k + rng.below(open.size() - k)]);
      std::vector<std::uint32_t> chosen(open.begin(), open.begin() + static_cast<std::ptrdiff_t>(team));
      std::sort(chosen.begin(), chosen.end());
      std::vector<std::string> authors;
      for (auto i : chosen) {
        authors.push_back(members[i]);
        --quota[i];
      }

      const DocType type = rng.chance(cfg.nonfull_fraction) ? DocType::other : full_type();
      std::optional<std::string> subfield;
      if (!rng.chance(cfg.unclassified_fraction)) {
        subfield = rng.chance(cfg.off_subfield_fraction) ? random_subfield() : home;
      }
      background_papers.push_back(b.add_paper(padded("p", ++next_paper, 7), type, std::move(subfield), authors));
    }
  }

  // Background citations by preferential attachment over background papers.
  const std::size_t n_bg = background_papers.size();
  if (n_bg > 1) {
    WeightedSampler sampler(n_bg);
    std::vector<std::uint32_t> received(n_bg, 0);
    auto weight_of = [&](std::uint32_t k) { return std::pow(static_cast<double>(k) + 1.0, cfg.attachment_exponent); };
    for (std::size_t i = 0; i < n_bg; ++i) sampler.set(i, weight_of(0));

    std::vector<std::size_t> order(n_bg);
    for (std::size_t i = 0; i < n_bg; ++i) order[i] = i;
    for (std::size_t i = n_bg; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    std::vector<std::size_t> picked;
    for (std::size_t citing : order) {
      const auto refs = std::min<std::uint64_t>(rng.between(cfg.refs_per_paper_min, cfg.refs_per_paper_max), n_bg - 1);
      picked.clear();
      while (picked.size() < refs) {
        const std::size_t target = sampler.sample(rng);
        if (target == citing || std::find(picked.begin(), picked.end(), target) != picked.end()) continue;
        picked.push_back(target);
      }
      for (std::size_t target : picked) {
        b.cite(background_papers[citing], background_papers[target]);
        sampler.set(target, weight_of(++received[target]));
      }
    }
  }

  std::vector<TruthRow> truth;
  for (std::uint32_t i = 1; i <= next_author; ++i) truth.push_back({padded("a", i, 6), PlantLabel::background, {}});

  const std::size_t plant_field = field_index(cfg.plant_field_id);
  const std::string plant_subfield = subfield_id_of(plant_field, 0);

  // Self-citers: each core paper is cited exactly h times, `own` of them by
  // the author's other papers and the rest by distinct background papers.
  const auto own_per_core = static_cast<std::uint32_t>(std::ceil(cfg.self_citer_share * cfg.self_citer_h));
  for (std::uint32_t s = 0; s < cfg.n_self_citers; ++s) {
    const std::string author = padded("s", s + 1, 4);
    truth.push_back({author, PlantLabel::self_citer, {}});
    std::vector<std::size_t> own;
    for (std::uint32_t k = 0; k < cfg.self_citer_papers; ++k) {
      own.push_back(b.add_paper(author + "-p" + padded("", k + 1, 3), full_type(), plant_subfield, {author}));
    }
    for (std::uint32_t core = 0; core < cfg.self_citer_h; ++core) {
      for (std::uint32_t j = 1; j <= own_per_core; ++j) b.cite(own[(core + j) % own.size()], own[core]);
      std::vector<std::size_t> outside;
      while (outside.size() < cfg.self_citer_h - own_per_core) {
        const std::size_t citer = background_papers[rng.below(n_bg)];
        if (std::find(outside.begin(), outside.end(), citer) == outside.end()) outside.push_back(citer);
      }
      for (std::size_t citer : outside) b.cite(citer, own[core]);
    }
  }

  // Cartels: core paper `core` of a member is cited by papers of the other
  // members in rotation, never reusing a (citing, cited) pair.
  for (std::uint32_t c = 0; c < cfg.n_cartels; ++c) {
    std::vector<std::string> members;
    std::vector<std::vector<std::size_t>> papers(cfg.cartel_size);
    for (std::uint32_t m = 0; m < cfg.cartel_size; ++m) {
      members.push_back("c" + padded("", c + 1, 2) + "m" + padded("", m + 1, 2));
      truth.push_back({members.back(), PlantLabel::cartel_member, c + 1});
      for (std::uint32_t k = 0; k < cfg.cartel_papers; ++k) {
        papers[m].push_back(
            b.add_paper(members.back() + "-p" + padded("", k + 1, 3), full_type(), plant_subfield, {members.back()}));
      }
    }
    const std::uint32_t others = cfg.cartel_size - 1;
    for (std::uint32_t m = 0; m < cfg.cartel_size; ++m) {
      for (std::uint32_t core = 0; core < cfg.cartel_h; ++core) {
        for (std::uint32_t j = 0; j < cfg.cartel_h; ++j) {
          const std::uint32_t other = (m + 1 + j % others) % cfg.cartel_size;
          const std::uint32_t k = (core + j / others) % cfg.cartel_papers;
          b.cite(papers[other][k], papers[m][core]);
        }
      }
    }
  }

  // Hyperteams: every member signs every joint paper; citations stay inside
  // the team with a 1/(rank+1) preference so the citation profile is skewed.
  const std::string team_subfield = subfield_id_of(field_index(cfg.hyperteam_field_id), 0);
  std::vector<double> rank_weights(cfg.joint_papers);
  double rank_total = 0;
  for (std::uint32_t k = 0; k < cfg.joint_papers; ++k) rank_total += rank_weights[k] = 1.0 / (k + 1.0);
  for (std::uint32_t t = 0; t < cfg.n_hyperteams; ++t) {
    std::vector<std::string> members;
    for (std::uint32_t m = 0; m < cfg.team_size; ++m) {
      members.push_back("h" + padded("", t + 1, 2) + "m" + padded("", m + 1, 2));
      truth.push_back({members.back(), PlantLabel::hyperteam_member, t + 1});
    }
    std::vector<std::size_t> papers;
    for (std::uint32_t k = 0; k < cfg.joint_papers; ++k) {
      papers.push_back(
          b.add_paper("h" + padded("", t + 1, 2) + "-p" + padded("", k + 1, 3), full_type(), team_subfield, members));
    }
    for (std::uint32_t k = 0; k < cfg.joint_papers; ++k) {
      std::vector<std::size_t> picked;
      while (picked.size() < cfg.team_refs_per_paper) {
        const std::size_t target = rng.weighted(rank_weights, rank_total);
        if (target == k || std::find(picked.begin(), picked.end(), target) != picked.end()) continue;
        picked.push_back(target);
      }
      for (std::size_t target : picked) b.cite(papers[k], papers[target]);
    }
  }

  std::sort(truth.begin(), truth.end(), [](const TruthRow& x, const TruthRow& y) { return x.author_id < y.author_id; });
  b.corpus.truth.rows = std::move(truth);
  return std::move(b.corpus);
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("taxonomy.csv");
    out << "subfield_id,subfield_name,field_id,field_name\n";
    for (const auto& r : corpus.taxonomy) {
      out << csv_escape(r.subfield_id) << ',' << csv_escape(r.info.subfield_name) << ',' << csv_escape(r.info.field_id)
          << ',' << csv_escape(r.info.field_name) << '\n';
    }
  }
  {
    auto out = open("papers.csv");
    out << "paper_id,doc_type,subfield_id\n";
    for (const auto& p : corpus.papers) {
      out << csv_escape(p.paper_id) << ',' << (p.doc_type == DocType::other ? "editorial" : to_string(p.doc_type))
          << ',' << csv_escape(p.subfield_id.value_or("")) << '\n';
    }
  }
  {
    auto out = open("authorships.csv");
    out << "paper_id,author_id\n";
    for (const auto& a : corpus.authorships) out << csv_escape(a.paper_id) << ',' << csv_escape(a.author_id) << '\n';
  }
  {
    auto out = open("citations.csv");
    out << "citing_paper_id,cited_paper_id\n";
    for (const auto& c : corpus.citations) {
      out << csv_escape(c.citing_paper_id) << ',' << csv_escape(c.cited_paper_id) << '\n';
    }
  }
  {
    auto out = open("truth.csv");
    out << "author_id,label,group_id\n";
    for (const auto& r : corpus.truth.rows) {
      out << csv_escape(r.author_id) << ',' << to_string(r.label) << ','
          << (r.group_id ? std::to_string(*r.group_id) : "") << '\n';
    }
  }
}

GroundTruth read_truth(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row) || row != std::vector<std::string>{"author_id", "label", "group_id"}) {
    throw IngestError("bad header, expected 'author_id,label,group_id'", 1);
  }
  GroundTruth truth;
  while (reader.next(row)) {
    if (row.size() != 3 || row[0].empty()) throw IngestError("malformed truth row", reader.row_line());
    TruthRow r;
    r.author_id = row[0];
    try {
      r.label = parse_plant_label(row[1]);
      if (!row[2].empty()) r.group_id = static_cast<std::uint32_t>(std::stoul(row[2]));
    } catch (const std::exception& e) {
      throw IngestError(e.what(), reader.row_line());
    }
    truth.rows.push_back(std::move(r));
  }
  std::sort(truth.rows.begin(), truth.rows.end(),
            [](const TruthRow& x, const TruthRow& y) { return x.author_id < y.author_id; });
  return truth;
}

std::vector<DetectionScore> evaluate_detection(const GroundTruth& truth,
                                               const std::map<Metric, std::set<std::string>>& tails) {
  const auto self = truth.authors_with(PlantLabel::self_citer);
  const auto cartel = truth.authors_with(PlantLabel::cartel_member);
  const auto team = truth.authors_with(PlantLabel::hyperteam_member);
  std::set<std::string> small = self;
  small.insert(cartel.begin(), cartel.end());

  const std::vector<std::tuple<std::string, const std::set<std::string>*, Metric>> plan{
      {"self_citer", &self, Metric::c_over_h2},      {"self_citer", &self, Metric::a50pc},
      {"cartel_member", &cartel, Metric::c_over_h2}, {"cartel_member", &cartel, Metric::a50pc},
      {"small_scale", &small, Metric::c_over_h2},    {"small_scale", &small, Metric::a50pc},
      {"hyperteam_member", &team, Metric::a50},
  };
  std::vector<DetectionScore> out;
  for (const auto& [motif, planted, metric] : plan) {
    auto it = tails.find(metric);
    if (it == tails.end()) continue;
    const auto& tail = it->second;
    DetectionScore s;
    s.motif = motif;
    s.metric = metric;
    s.planted = planted->size();
    s.tail_size = tail.size();
    for (const auto& a : *planted) s.detected += tail.contains(a) ? 1 : 0;
    if (s.planted > 0) s.recall = static_cast<double>(s.detected) / static_cast<double>(s.planted);
    if (s.tail_size > 0) s.precision = static_cast<double>(s.detected) / static_cast<double>(s.tail_size);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace citorch
