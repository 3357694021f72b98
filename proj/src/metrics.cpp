#include "citorch/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <queue>
#include <thread>

#include "citorch/cohort.hpp"

namespace citorch {

std::uint32_t h_index(std::span<const std::uint64_t> citation_counts) {
  std::vector<std::uint64_t> sorted(citation_counts.begin(), citation_counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::uint32_t h = 0;
  while (h < sorted.size() && sorted[h] >= h + 1) ++h;
  return h;
}

Rational c_over_h2(std::uint64_t citations, std::uint32_t h) {
  if (h == 0) throw UndefinedMetric("C/h^2 is undefined for h = 0");
  const auto h2 = static_cast<std::int64_t>(h) * static_cast<std::int64_t>(h);
  return Rational(static_cast<std::int64_t>(citations), h2);
}

std::vector<PaperIdx> full_papers_of(const CorpusIndex& index, AuthorIdx author) {
  std::vector<PaperIdx> out;
  for (PaperIdx p : index.papers_of(author)) {
    if (index.is_full(p)) out.push_back(p);
  }
  return out;
}

std::uint64_t citations_received(const CorpusIndex& index, PaperIdx paper, const MetricsConfig& cfg) {
  const auto citers = index.citers_of(paper);
  if (!cfg.citing_full_only) return citers.size();
  return static_cast<std::uint64_t>(
      std::count_if(citers.begin(), citers.end(), [&](PaperIdx u) { return index.is_full(u); }));
}

std::vector<std::uint64_t> citation_profile(const CorpusIndex& index, AuthorIdx author, const MetricsConfig& cfg) {
  std::vector<std::uint64_t> out;
  for (PaperIdx p : index.papers_of(author)) {
    if (index.is_full(p)) out.push_back(citations_received(index, p, cfg));
  }
  return out;
}

void A50Workspace::prepare(const CorpusIndex& index) {
  if (paper_weight.size() != index.paper_count()) paper_weight.assign(index.paper_count(), 0);
  if (contribution.size() != index.author_count()) {
    contribution.assign(index.author_count(), 0);
    consumed.assign(index.author_count(), 0);
  }
}

namespace {

struct Candidate {
  std::int64_t contribution;
  std::uint64_t key;  // author index, or author_count + paper index for anonymous papers
};

struct CandidateOrder {
  // Max-heap on contribution, then smallest key.
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.contribution != b.contribution) return a.contribution < b.contribution;
    return a.key > b.key;
  }
};

}  // namespace

std::uint32_t a50pc_greedy(const CorpusIndex& index, AuthorIdx author, const MetricsConfig& cfg, A50Workspace& ws) {
  ws.prepare(index);
  const std::uint64_t n_authors = index.author_count();

  std::int64_t total = 0;
  for (PaperIdx p : index.papers_of(author)) {
    if (!index.is_full(p)) continue;
    for (PaperIdx u : index.citers_of(p)) {
      if (cfg.citing_full_only && !index.is_full(u)) continue;
      if (ws.paper_weight[u]++ == 0) ws.touched_papers.push_back(u);
      ++total;
    }
  }

  auto reset = [&] {
    for (PaperIdx u : ws.touched_papers) ws.paper_weight[u] = 0;
    for (AuthorIdx x : ws.touched_authors) {
      ws.contribution[x] = 0;
      ws.consumed[x] = 0;
    }
    ws.touched_papers.clear();
    ws.touched_authors.clear();
  };

  if (total == 0) {
    reset();
    throw UndefinedMetric("A50%C is undefined for an author without citations: " + index.author_id(author));
  }

  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> heap;
  for (PaperIdx u : ws.touched_papers) {
    const std::int64_t w = ws.paper_weight[u];
    const auto writers = index.authors_of(u);
    if (writers.empty()) {
      heap.push({w, n_authors + u});
      continue;
    }
    for (AuthorIdx x : writers) {
      if (ws.contribution[x] == 0) ws.touched_authors.push_back(x);
      ws.contribution[x] += w;
    }
  }
  for (AuthorIdx x : ws.touched_authors) heap.push({ws.contribution[x], x});

  std::int64_t explained = 0;
  std::uint32_t selected = 0;
  while (2 * explained < total) {
    const Candidate top = heap.top();
    heap.pop();
    if (top.key >= n_authors) {
      const auto u = static_cast<PaperIdx>(top.key - n_authors);
      if (ws.paper_weight[u] == 0) continue;
      explained += ws.paper_weight[u];
      ws.paper_weight[u] = 0;
      ++selected;
      continue;
    }
    const auto x = static_cast<AuthorIdx>(top.key);
    if (ws.consumed[x] || ws.contribution[x] != top.contribution) continue;  // stale entry
    ws.consumed[x] = 1;
    explained += top.contribution;
    ++selected;
    for (PaperIdx u : index.papers_of(x)) {
      const std::int64_t w = ws.paper_weight[u];
      if (w == 0) continue;
      ws.paper_weight[u] = 0;
      for (AuthorIdx y : index.authors_of(u)) {
        if (y == x || ws.consumed[y]) continue;
        ws.contribution[y] -= w;
        if (ws.contribution[y] > 0) heap.push({ws.contribution[y], y});
      }
    }
    ws.contribution[x] = 0;
  }
  reset();
  return selected;
}

std::uint32_t a50pc_greedy(const CorpusIndex& index, AuthorIdx author, const MetricsConfig& cfg) {
  A50Workspace ws;
  return a50pc_greedy(index, author, cfg, ws);
}

std::uint32_t a50pc_oracle(const CorpusIndex& index, std::string_view author_id, const MetricsConfig& cfg) {
  const auto author = index.find_author(author_id);
  if (!author) throw UndefinedMetric("unknown author: " + std::string(author_id));

  // citing paper id -> number of edges into the examined author's full papers
  std::map<std::string, std::uint64_t> live;
  std::uint64_t total = 0;
  for (PaperIdx p : index.papers_of(*author)) {
    if (!index.is_full(p)) continue;
    for (PaperIdx u : index.citers_of(p)) {
      if (cfg.citing_full_only && !index.is_full(u)) continue;
      ++live[index.paper(u).paper_id];
      ++total;
    }
  }
  if (total == 0)
    throw UndefinedMetric("A50%C is undefined for an author without citations: " + std::string(author_id));

  auto writers_of = [&](const std::string& paper_id) {
    std::vector<std::string> names;
    for (AuthorIdx a : index.authors_of(*index.find_paper(paper_id))) names.push_back(index.author_id(a));
    return names;
  };

  // (0, author id) for named candidates, (1, paper id) for anonymous papers.
  using Key = std::pair<int, std::string>;
  std::uint64_t explained = 0;
  std::uint32_t rounds = 0;
  while (2 * explained < total) {
    std::map<Key, std::uint64_t> contribution;
    for (const auto& [paper_id, weight] : live) {
      const auto names = writers_of(paper_id);
      if (names.empty()) contribution[{1, paper_id}] += weight;
      for (const auto& name : names) contribution[{0, name}] += weight;
    }
    const Key* best = nullptr;
    std::uint64_t best_value = 0;
    for (const auto& [key, value] : contribution) {
      if (best == nullptr || value > best_value) {
        best = &key;
        best_value = value;
      }
    }
    const Key chosen = *best;
    explained += best_value;
    ++rounds;
    for (auto it = live.begin(); it != live.end();) {
      bool remove = false;
      if (chosen.first == 1) {
        remove = it->first == chosen.second;
      } else {
        const auto names = writers_of(it->first);
        remove = std::find(names.begin(), names.end(), chosen.second) != names.end();
      }
      it = remove ? live.erase(it) : std::next(it);
    }
  }
  return rounds;
}

std::uint32_t a50_coauthors(const CorpusIndex& index, AuthorIdx author, std::uint32_t threshold) {
  std::vector<AuthorIdx> coauthors;
  for (PaperIdx p : index.papers_of(author)) {
    if (!index.is_full(p)) continue;
    for (AuthorIdx b : index.authors_of(p)) {
      if (b != author) coauthors.push_back(b);
    }
  }
  std::sort(coauthors.begin(), coauthors.end());
  std::uint32_t count = 0;
  for (std::size_t i = 0; i < coauthors.size();) {
    std::size_t j = i;
    while (j < coauthors.size() && coauthors[j] == coauthors[i]) ++j;
    if (j - i > threshold) ++count;
    i = j;
  }
  return count;
}

AuthorMetrics compute_author_metrics(const CorpusIndex& index, AuthorIdx author, const MetricsConfig& cfg,
                                     A50Workspace& ws) {
  AuthorMetrics m;
  m.author_id = index.author_id(author);
  const auto profile = citation_profile(index, author, cfg);
  m.n_full_papers = static_cast<std::uint32_t>(profile.size());
  for (auto c : profile) m.citations += c;
  m.h_index = h_index(profile);
  if (m.h_index > 0) m.c_over_h2 = c_over_h2(m.citations, m.h_index);
  if (m.citations > 0) m.a50pc = a50pc_greedy(index, author, cfg, ws);
  m.a50 = a50_coauthors(index, author, cfg.a50_threshold);
  return m;
}

std::vector<AuthorMetrics> compute_all_metrics(const CorpusIndex& index, std::span<const AuthorIdx> cohort,
                                               const MetricsConfig& cfg) {
  std::vector<AuthorIdx> order(cohort.begin(), cohort.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::vector<AuthorMetrics> out(order.size());
  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 64;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    A50Workspace ws;
    try {
      while (true) {
        const std::size_t begin = next.fetch_add(kChunk);
        if (begin >= order.size()) break;
        const std::size_t end = std::min(order.size(), begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) {
          AuthorMetrics m = compute_author_metrics(index, order[i], cfg, ws);
          if (auto field = assign_field(index, order[i], cfg.seed, cfg)) {
            m.field_id = std::move(field->field_id);
            m.subfield_id = std::move(field->subfield_id);
          }
          out[i] = std::move(m);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = order.size();
    }
  };

  const unsigned threads =
      std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(order.size() / kChunk + 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace citorch
