#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "citorch/stats.hpp"

using namespace citorch;

namespace {

std::vector<Rational> ints(std::initializer_list<int> xs) {
  std::vector<Rational> v;
  for (int x : xs) v.emplace_back(x);
  return v;
}

AuthorMetrics author(const std::string& id, const std::string& field, std::int64_t ch_num, std::uint32_t a50pc,
                     std::uint32_t a50) {
  AuthorMetrics m;
  m.author_id = id;
  m.field_id = field;
  m.h_index = 10;
  m.citations = ch_num;
  m.c_over_h2 = Rational(ch_num, 100);
  m.a50pc = a50pc;
  m.a50 = a50;
  return m;
}

}  // namespace

TEST_CASE("nearest-rank percentile examples") {
  std::vector<Rational> v;
  for (int i = 1; i <= 100; ++i) v.emplace_back(i);
  CHECK(percentile_threshold(v, Rational(1)) == Rational(1));
  CHECK(percentile_threshold(v, Rational(50)) == Rational(50));
  CHECK(percentile_threshold(ints({5, 5, 5, 5}), Rational(25)) == Rational(5));
  CHECK(percentile_threshold(ints({3, 1, 2}), Rational(50)) == Rational(2));
  CHECK_THROWS(percentile_threshold(std::vector<Rational>{}, Rational(1)));
  CHECK_THROWS(percentile_threshold(v, Rational(0)));
  CHECK_THROWS(percentile_threshold(v, Rational(100)));
}

TEST_CASE("property: percentile is permutation-invariant and within range") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 500; ++round) {
    std::vector<Rational> v(std::uniform_int_distribution<int>(1, 300)(rng));
    for (auto& x : v)
      x = Rational(std::uniform_int_distribution<int>(0, 500)(rng), std::uniform_int_distribution<int>(1, 7)(rng));
    const Rational p(std::uniform_int_distribution<int>(1, 990)(rng), 10);
    const Rational t = percentile_threshold(v, p);
    std::shuffle(v.begin(), v.end(), rng);
    CHECK(percentile_threshold(v, p) == t);
    CHECK(t >= *std::min_element(v.begin(), v.end()));
    CHECK(t <= *std::max_element(v.begin(), v.end()));
  }
}

TEST_CASE("histogram counts right-open bins and reports exclusions") {
  const Histogram h = histogram(ints({1, 1, 2, 9}), Rational(1), Rational(0), Rational(5));
  REQUIRE(h.counts.size() == 5);
  CHECK(h.counts == std::vector<std::uint64_t>{0, 2, 1, 0, 0});
  CHECK(h.bin_start(1) == Rational(1));
  CHECK(h.excluded() == 1);
  CHECK(h.above == 1);

  const Histogram empty = histogram({}, Rational(1, 10), Rational(0), Rational(1));
  CHECK(empty.counts.size() == 10);
  CHECK(std::accumulate(empty.counts.begin(), empty.counts.end(), std::uint64_t{0}) == 0);

  const Histogram edge = histogram(ints({0, 5}), Rational(2), Rational(0), Rational(5));
  CHECK(edge.counts == std::vector<std::uint64_t>{1, 0, 0});
  CHECK(edge.above == 1);
}

TEST_CASE("fold enrichment") {
  CHECK(std::abs(fold_enrichment(6.13, 13.80) - 2.25) <= 0.01);
  CHECK(std::abs(fold_enrichment(38.71, 73.29) - 1.89) <= 0.01);
  CHECK(fold_enrichment(5.0, 5.0) == 1.0);
  CHECK(fold_enrichment(0.0, 0.0) == 0.0);
}

TEST_CASE("tail membership is strict and honours exclusions") {
  std::vector<AuthorMetrics> ms;
  for (int i = 0; i < 200; ++i)
    ms.push_back(author("a" + std::to_string(1000 + i), i % 2 ? "F1" : "F2", 300 + i, 10 + i, i % 3));
  ms[0].c_over_h2 = Rational(1);
  ms[1].c_over_h2 = Rational(1);
  TailSpec spec;
  spec.metric = Metric::c_over_h2;
  spec.percentile = Rational(1);
  const TailReport lower = tail_members(ms, spec);
  CHECK(lower.threshold == Rational(1));  // rank 2 of 200
  CHECK(lower.members.empty());           // both equal the threshold

  ms[0].c_over_h2 = Rational(1, 2);
  const TailReport lower2 = tail_members(ms, spec);
  REQUIRE(lower2.members.size() == 1);
  CHECK(lower2.members[0].author_id == "a1000");

  spec.metric = Metric::a50;
  spec.tail = Tail::upper;
  spec.excluded_fields = {"F2"};
  ms[5].a50 = 9;
  ms[6].a50 = 9;
  const TailReport upper = tail_members(ms, spec);
  CHECK(upper.cohort_size == 100);
  for (const auto& m : upper.members) CHECK(m.field_id != "F2");
  REQUIRE(upper.members.size() == 1);
  CHECK(upper.members[0].author_id == "a1005");

  std::uint64_t sum = 0;
  double share = 0;
  for (const auto& f : upper.allocation) {
    sum += f.tail_count;
    share += f.cohort_share;
  }
  CHECK(sum == upper.members.size());
  CHECK(share == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("authors without a defined metric or field are outside the cohort") {
  std::vector<AuthorMetrics> ms;
  for (int i = 0; i < 10; ++i) ms.push_back(author("a" + std::to_string(i), "F1", 200 + i, 5, 0));
  ms[0].c_over_h2.reset();
  ms[1].field_id.reset();
  TailSpec spec;
  CHECK(tail_members(ms, spec).cohort_size == 8);
}

TEST_CASE("enrichment flags need fold above the cutoff and a tail member") {
  TailReport r;
  r.allocation = {{"F05", "Chemistry", 613, 138, 0.0613, 0.1380, fold_enrichment(0.0613, 0.1380)},
                  {"F06", "Clinical Medicine", 3871, 7329, 0.3871, 0.7329, fold_enrichment(0.3871, 0.7329)},
                  {"F07", "Equal", 100, 100, 0.1, 0.1, 1.0},
                  {"F08", "Below", 500, 10, 0.05, 0.01, 0.2}};
  const auto flagged = enrichment_flags(r, 1.5);
  CHECK(flagged == std::set<std::string>{"F05", "F06"});
}

TEST_CASE("contingency odds ratio and interval") {
  const ContingencyTable t = contingency(10, 10, 10, 10);
  CHECK(t.odds_ratio == 1.0);
  CHECK_FALSE(t.degenerate);
  CHECK(t.ci_low < 1.0);
  CHECK(t.ci_high > 1.0);
  CHECK(t.ci_low * t.ci_high == doctest::Approx(1.0));

  const ContingencyTable z = contingency(0, 5, 5, 5);
  CHECK(z.degenerate);

  const ContingencyTable row = contingency(659, 12566, 10618, 1298809);
  CHECK(format_significant(row.odds_ratio) == "6.4");
  CHECK(format_significant(row.ci_low) == "5.9");
}

TEST_CASE("format_significant") {
  CHECK(format_significant(6.4158) == "6.4");
  CHECK(format_significant(0.0902) == "0.09");
  CHECK(format_significant(1.4999) == "1.5");
  CHECK(format_significant(0.1549) == "0.15");
  CHECK(format_significant(12.6) == "13");
  CHECK(format_significant(2.0) == "2");
}

TEST_CASE("property: cooccurrence cells sum to the cohort and swap transposes") {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 100; ++round) {
    std::vector<AuthorMetrics> ms;
    const int n = std::uniform_int_distribution<int>(10, 400)(rng);
    for (int i = 0; i < n; ++i) {
      auto m = author("a" + std::to_string(i), "F" + std::to_string(i % 3),
                      std::uniform_int_distribution<int>(100, 900)(rng),
                      std::uniform_int_distribution<std::uint32_t>(1, 30)(rng),
                      std::uniform_int_distribution<std::uint32_t>(0, 4)(rng));
      if (i % 17 == 0) m.a50pc.reset();
      ms.push_back(m);
    }
    TailSpec a{Metric::c_over_h2, Tail::lower, Rational(10), {}};
    TailSpec b{Metric::a50pc, Tail::lower, Rational(10), {"F1"}};
    const ContingencyTable ab = cooccurrence(ms, a, b);
    const ContingencyTable ba = cooccurrence(ms, b, a);
    std::uint64_t cohort = 0;
    for (const auto& m : ms) cohort += m.a50pc.has_value() && m.field_id != "F1";
    CHECK(ab.total() == cohort);
    CHECK(ab.a == ba.a);
    CHECK(ab.b == ba.c);
    CHECK(ab.c == ba.b);
    CHECK(ab.d == ba.d);
    CHECK(ab.degenerate == ba.degenerate);
    if (!ab.degenerate) CHECK(ab.odds_ratio == doctest::Approx(ba.odds_ratio));
  }
}
