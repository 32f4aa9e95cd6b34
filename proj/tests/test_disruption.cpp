#include <doctest.h>

#include <cmath>

#include "dxg/disruption.hpp"
#include "dxg/error.hpp"
#include "dxg/ingest.hpp"
#include "support.hpp"

using namespace dxg;
using dxg::test::make_graph;
using dxg::test::paper;

namespace {

// F cites R. X1, X2 cite F only; Y cites F and R; Z cites R only.
CitationGraph two_one_one() {
  return make_graph({paper("F", 2000), paper("R", 1990), paper("X1", 2001), paper("X2", 2002), paper("Y", 2003),
                     paper("Z", 2004)},
                    {{"F", "R"}, {"X1", "F"}, {"X2", "F"}, {"Y", "F"}, {"Y", "R"}, {"Z", "R"}});
}

DisruptionResult compute_one(const CitationGraph& g, const std::string& id, WindowSpec w = WindowSpec::unlimited(),
                             ResolvedVariantConfig cfg = {}) {
  DisruptionScratch s(g.size());
  return DisruptionEngine(g, w, cfg).compute(g.index_of(id), s);
}

}  // namespace

TEST_SUITE("disruption") {

TEST_CASE("formula values on count triples") {
  CHECK(*disruption_index({2, 1, 1}) == 0.25);
  CHECK(*disruption_index({0, 5, 0}) == -1.0);
  CHECK(*disruption_index({3, 3, 4}) == 0.0);
  CHECK_FALSE(disruption_index({0, 0, 0}).has_value());
  CHECK(*local_displacement({2, 1, 1}) == doctest::Approx(1.0 / 3.0));
  CHECK(*reference_ratio({2, 1, 1}) == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(local_displacement({0, 0, 7}).has_value());
  CHECK_FALSE(reference_ratio({0, 0, 7}).has_value());
}

TEST_CASE("toy graph classification") {
  const auto g = make_graph({paper("F", 2000), paper("R", 1990), paper("X", 2001), paper("Y", 2002), paper("Z", 2003)},
                            {{"F", "R"}, {"X", "F"}, {"Y", "F"}, {"Y", "R"}, {"Z", "R"}});
  const auto c = classify_citers(g, g.index_of("F"), WindowSpec::unlimited());
  REQUIRE(c.set_i.size() == 1);
  REQUIRE(c.set_j.size() == 1);
  REQUIRE(c.set_k.size() == 1);
  CHECK(g.id(c.set_i[0]) == "X");
  CHECK(g.id(c.set_j[0]) == "Y");
  CHECK(g.id(c.set_k[0]) == "Z");
  CHECK(c.counts == DisruptionCounts{1, 1, 1});
  CHECK(c.flags == 0);
  CHECK(*d_index(g, g.index_of("F"), WindowSpec::unlimited()) == 0.0);
}

TEST_CASE("two-one-one fixture gives 0.25 and the exact decomposition") {
  const auto g = two_one_one();
  const auto f = g.index_of("F");
  CHECK(*d_index(g, f, WindowSpec::unlimited()) == 0.25);
  const auto d = decompose(g, f, WindowSpec::unlimited());
  REQUIRE(d);
  CHECK(d->d_p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(d->r_k == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(d->reconstruction - 0.25) <= 1e-12);
  CHECK(d->c_p == 3);
  // R is cited by F, Y and Z.
  CHECK(d->c_max == 3);
  CHECK(*d->b_p == 1.0);
}

TEST_CASE("pure consolidation") {
  std::vector<PaperRecord> recs{paper("F", 2000), paper("R", 1990)};
  std::vector<EdgePair> edges{{"F", "R"}};
  for (int i = 0; i < 5; ++i) {
    const std::string id = "C" + std::to_string(i);
    recs.push_back(paper(id, 2001));
    edges.push_back({id, "F"});
    edges.push_back({id, "R"});
  }
  const auto g = make_graph(recs, edges);
  const auto r = compute_one(g, "F");
  CHECK(r.counts == DisruptionCounts{0, 5, 0});
  CHECK(*r.d0 == -1.0);
}

TEST_CASE("no citers is a flagged null, never zero") {
  const auto g = make_graph({paper("F", 2000), paper("R", 1990), paper("Z", 2001)}, {{"F", "R"}, {"Z", "R"}});
  const auto r = compute_one(g, "F");
  CHECK_FALSE(r.d0.has_value());
  CHECK_FALSE(r.d_p.has_value());
  CHECK((r.flags & kNoCiters) != 0);
  CHECK_FALSE(decompose(g, g.index_of("F"), WindowSpec::unlimited()).has_value());
  CHECK_FALSE(d_index(g, g.index_of("F"), WindowSpec::unlimited()).has_value());
}

TEST_CASE("no references is a flagged null") {
  const auto g = make_graph({paper("F", 2000), paper("X", 2001)}, {{"X", "F"}});
  const auto r = compute_one(g, "F");
  CHECK_FALSE(r.d0.has_value());
  CHECK((r.flags & kNoRefs) != 0);
  CHECK(r.d_p == 1.0);  // d_p only needs citers
  CHECK_FALSE(r.b_p.has_value());
}

TEST_CASE("references nobody else cites give maximal disruption") {
  const auto g = make_graph({paper("F", 2000), paper("R", 1990), paper("X", 2001), paper("Y", 2005)},
                            {{"F", "R"}, {"X", "F"}, {"Y", "F"}});
  const auto r = compute_one(g, "F");
  CHECK(r.counts == DisruptionCounts{2, 0, 0});
  CHECK(*r.d0 == 1.0);
  CHECK(*r.r_k == 0.0);
  CHECK(*r.d0 == *r.d_p);
}

TEST_CASE("citers of a reference published before the focal paper are not type k") {
  const auto g = make_graph(
      {paper("F", 2000), paper("R", 1990), paper("X", 2001), paper("Old", 1995), paper("Same", 2000)},
      {{"F", "R"}, {"X", "F"}, {"Old", "R"}, {"Same", "R"}});
  const auto c = classify_citers(g, g.index_of("F"), WindowSpec::unlimited());
  REQUIRE(c.set_k.size() == 1);
  CHECK(g.id(c.set_k[0]) == "Same");
}

TEST_CASE("window trims citers relative to the focal year") {
  const auto g = two_one_one();
  const auto f = g.index_of("F");
  // Window 2 admits X1 (2001), X2 (2002); Y (2003) and Z (2004) fall outside.
  const auto c = classify_citers(g, f, WindowSpec::of_years(2));
  CHECK(c.counts == DisruptionCounts{2, 0, 0});
  const auto c3 = classify_citers(g, f, WindowSpec::of_years(3));
  CHECK(c3.counts == DisruptionCounts{2, 1, 0});
}

TEST_CASE("b_p of 119 attenuates D0 to under one percent of d_p") {
  std::vector<PaperRecord> recs{paper("F", 2000), paper("R", 1990), paper("X", 2001)};
  std::vector<EdgePair> edges{{"F", "R"}, {"X", "F"}};
  for (int i = 0; i < 118; ++i) {
    const std::string id = "K" + std::to_string(1000 + i);
    recs.push_back(paper(id, 2001));
    edges.push_back({id, "R"});
  }
  const auto g = make_graph(recs, edges);
  const auto r = compute_one(g, "F");
  CHECK(r.c_max == 119);
  CHECK(r.c_p == 1);
  CHECK(*r.b_p == 119.0);
  CHECK(1.0 / (1.0 + *r.b_p) == doctest::Approx(0.0083).epsilon(0.01));
  CHECK(g.id(*r.top_reference) == "R");
}

TEST_CASE("most cited reference ties go to the smallest id") {
  const auto g = make_graph({paper("F", 2000), paper("Rb", 1990), paper("Ra", 1991), paper("X", 2001)},
                            {{"F", "Ra"}, {"F", "Rb"}, {"X", "Ra"}, {"X", "Rb"}});
  const auto top = g.most_cited_reference(g.index_of("F"), WindowSpec::unlimited());
  REQUIRE(top);
  CHECK(g.id(top->reference) == "Ra");
  CHECK(top->citations == 2);
}

TEST_CASE("unknown paper") {
  const auto g = two_one_one();
  CHECK_THROWS_AS(classify_citers(g, 99, WindowSpec::unlimited()), UnknownPaper);
  CHECK_THROWS_AS(d_index(g, 99, WindowSpec::unlimited()), UnknownPaper);
}

TEST_CASE("D1 drops self-citing citers from every set") {
  // X shares author a1 with F; K shares a1 too and is type k.
  const auto g = make_graph({paper("F", 2000, {"a1", "a2"}), paper("R", 1990, {"r"}), paper("X", 2001, {"a1"}),
                             paper("Y", 2001, {"b"}), paper("Z", 2001, {"c"}), paper("K", 2001, {"a2"})},
                            {{"F", "R"}, {"X", "F"}, {"Y", "F"}, {"Y", "R"}, {"Z", "F"}, {"K", "R"}});
  const auto v = d_variants(g, g.index_of("F"), WindowSpec::unlimited(), {});
  // Without X and K: i={Z}, j={Y}, k={} -> 0.
  CHECK(*v.d1 == 0.0);
  CHECK(*d_index(g, g.index_of("F"), WindowSpec::unlimited()) == doctest::Approx(0.25));

  ResolvedVariantConfig off;
  off.self_citation = SelfCitationRule::off;
  CHECK(*d_variants(g, g.index_of("F"), WindowSpec::unlimited(), off).d1 == doctest::Approx(0.25));
}

TEST_CASE("D1 without author data falls back to D0 with a flag") {
  const auto g = two_one_one();
  const auto v = d_variants(g, g.index_of("F"), WindowSpec::unlimited(), {});
  CHECK(*v.d1 == 0.25);
  CHECK((v.flags & kNoAuthorData) != 0);
}

TEST_CASE("D2 with every reference below the threshold") {
  const auto g = two_one_one();
  ResolvedVariantConfig cfg;
  cfg.popular_min_citations = 100;
  const auto v = d_variants(g, g.index_of("F"), WindowSpec::unlimited(), cfg);
  CHECK(*v.d2 == 1.0);
  CHECK((v.flags & kNoPopularRefs) != 0);
  cfg.popular_min_citations = 1;
  CHECK(*d_variants(g, g.index_of("F"), WindowSpec::unlimited(), cfg).d2 == 0.25);
}

TEST_CASE("D3 and D4 weights") {
  std::vector<PaperRecord> recs{paper("F", 2000), paper("X", 2001), paper("Y", 2001), paper("Z", 2001)};
  std::vector<EdgePair> edges{{"X", "F"}, {"Y", "F"}};
  for (int r = 1; r <= 5; ++r) {
    const std::string id = "R" + std::to_string(r);
    recs.push_back(paper(id, 1990));
    edges.push_back({"F", id});
    edges.push_back({"Y", id});
  }
  edges.push_back({"Z", "R1"});
  edges.push_back({"Z", "R2"});
  const auto g = make_graph(recs, edges);
  const auto f = g.index_of("F");
  const auto v = d_variants(g, f, WindowSpec::unlimited(), {});
  CHECK(*v.d3 == 0.5);
  // Y cites five references of F and counts five times.
  CHECK(*v.d4 == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  ResolvedVariantConfig with_k;
  with_k.d4_denominator = D4Denominator::citers_and_k;
  CHECK(*d_variants(g, f, WindowSpec::unlimited(), with_k).d4 == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("popularity threshold is the nearest-rank quantile of total citations") {
  // Citation totals over cited papers: R1:1, R2:2, R3:3, R4:4.
  std::vector<PaperRecord> recs;
  std::vector<EdgePair> edges;
  for (int r = 1; r <= 4; ++r) recs.push_back(paper("R" + std::to_string(r), 1990));
  for (int c = 0; c < 4; ++c) {
    recs.push_back(paper("C" + std::to_string(c), 2000));
    for (int r = c + 1; r <= 4; ++r) edges.push_back({"C" + std::to_string(c), "R" + std::to_string(r)});
  }
  const auto g = make_graph(recs, edges);
  CHECK(resolve_variants(g, {}).popular_min_citations == 3);
  VariantConfig fixed;
  fixed.popular.min_citations = 24;
  CHECK(resolve_variants(g, fixed).popular_min_citations == 24);
  VariantConfig bad;
  bad.popular.quantile = 0.0;
  CHECK_THROWS_AS(resolve_variants(g, bad), InvalidArgument);
}

TEST_CASE("flag names round-trip") {
  const std::uint32_t all = kNoRefs | kNoCiters | kNoAuthorData | kNoPopularRefs;
  CHECK(flags_to_string(0).empty());
  CHECK(flags_to_string(kNoRefs | kNoCiters) == "no_refs,no_citers");
  CHECK(flags_from_string(flags_to_string(all)) == all);
  CHECK(flags_from_string("") == 0);
}

TEST_CASE("batch covers eligible papers in id order") {
  const auto g = two_one_one();
  std::vector<std::uint8_t> mask(g.size(), 0);
  mask[g.index_of("F")] = 1;
  mask[g.index_of("Z")] = 1;
  const auto results = batch_compute(g.with_eligibility(mask), WindowSpec::unlimited(), {}, 2);
  REQUIRE(results.size() == 2);
  CHECK(g.id(results[0].focal) == "F");
  CHECK(g.id(results[1].focal) == "Z");
  CHECK(*results[0].d0 == 0.25);
  CHECK((results[1].flags & kNoCiters) != 0);
}

TEST_CASE("corpus without references flags every result") {
  const auto g = make_graph({paper("A", 2000), paper("B", 2001), paper("C", 2002)}, {});
  const auto results = batch_compute(g, WindowSpec::unlimited(), {}, 3);
  REQUIRE(results.size() == 3);
  for (const auto& r : results) {
    CHECK((r.flags & kNoRefs) != 0);
    CHECK_FALSE(r.d0.has_value());
  }
}

}  // TEST_SUITE
