#include <doctest.h>

#include <algorithm>

#include "dxg/error.hpp"
#include "dxg/graph.hpp"
#include "support.hpp"

using namespace dxg;
using dxg::test::make_graph;
using dxg::test::paper;

namespace {

std::vector<std::string> ids(const CitationGraph& g, std::span<const NodeIndex> v) {
  std::vector<std::string> out;
  for (auto p : v) out.push_back(g.id(p));
  return out;
}

std::vector<std::string> ids(const CitationGraph& g, const std::vector<NodeIndex>& v) {
  return ids(g, std::span<const NodeIndex>(v));
}

using Names = std::vector<std::string>;

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("adjacency from a three-paper corpus") {
  const auto g = make_graph({paper("A", 2000), paper("B", 2001), paper("C", 2002)}, {{"B", "A"}, {"C", "A"}});
  CHECK(ids(g, g.all_citers(g.index_of("A"))) == Names{"B", "C"});
  CHECK(ids(g, g.references(g.index_of("B"))) == Names{"A"});
  CHECK(g.references(g.index_of("A")).empty());
  CHECK(g.edge_count() == 2);
}

TEST_CASE("empty edge stream leaves every list empty") {
  const auto g = make_graph({paper("A", 2000), paper("B", 2001)}, {});
  for (NodeIndex p = 0; p < g.size(); ++p) {
    CHECK(g.references(p).empty());
    CHECK(g.all_citers(p).empty());
  }
}

TEST_CASE("duplicate edges collapse and are counted") {
  const auto built = build_graph({paper("A", 2000), paper("B", 2001)}, std::vector<EdgePair>{{"B", "A"}, {"B", "A"}});
  CHECK(ids(built.graph, built.graph.all_citers(built.graph.index_of("A"))) == Names{"B"});
  CHECK(built.report.duplicate_edges == 1);
  CHECK(built.report.edges_kept == 1);
}

TEST_CASE("self-loops and dangling edges are dropped with counts") {
  const auto built = build_graph({paper("A", 2000), paper("B", 2001)},
                                 std::vector<EdgePair>{{"A", "A"}, {"B", "Z"}, {"Q", "A"}, {"B", "A"}});
  CHECK(built.report.self_loops == 1);
  CHECK(built.report.dangling_edges == 2);
  REQUIRE(built.report.dangling_samples.size() == 2);
  CHECK(built.report.dangling_samples[0].cited == "Z");
  CHECK(built.graph.edge_count() == 1);
}

TEST_CASE("duplicate paper ids are rejected") {
  CHECK_THROWS_AS(build_graph({paper("A", 2000), paper("A", 2001)}, std::vector<EdgePair>{}), DuplicatePaper);
}

TEST_CASE("record validation") {
  CHECK_THROWS_AS(build_graph({paper("A", 1400)}, std::vector<EdgePair>{}), InvalidRecord);
  CHECK_THROWS_AS(build_graph({paper("A", 2000, {}, {292})}, std::vector<EdgePair>{}), InvalidRecord);
  CHECK_NOTHROW(build_graph({paper("A", 2100, {}, {0, 291})}, std::vector<EdgePair>{}));
}

TEST_CASE("windowed citers") {
  const auto g = make_graph({paper("P", 2000), paper("Early", 1999), paper("Soon", 2001), paper("Late", 2006),
                             paper("Same", 2000)},
                            {{"Early", "P"}, {"Soon", "P"}, {"Late", "P"}, {"Same", "P"}});
  const auto p = g.index_of("P");
  CHECK(ids(g, g.citers(p, WindowSpec::of_years(5))) == Names{"Same", "Soon"});
  CHECK(ids(g, g.citers(p, WindowSpec::unlimited())) == Names{"Late", "Same", "Soon"});
  CHECK(g.count_citers(p, 1990, WindowSpec::of_years(9)) == 1);
  CHECK(g.count_citers(p, 1990, WindowSpec::unlimited()) == 4);
}

TEST_CASE("references are sorted and unique") {
  const auto g = make_graph({paper("A", 1990), paper("B", 1991), paper("C", 1992), paper("P", 2000)},
                            {{"P", "C"}, {"P", "A"}, {"P", "B"}, {"P", "A"}});
  CHECK(ids(g, g.references(g.index_of("P"))) == Names{"A", "B", "C"});
}

TEST_CASE("most cited reference") {
  std::vector<PaperRecord> recs{paper("P", 2000), paper("R5", 1990), paper("R9", 1990), paper("R2", 1990)};
  std::vector<EdgePair> edges{{"P", "R5"}, {"P", "R9"}, {"P", "R2"}};
  const auto add = [&](const std::string& ref, int n) {
    for (int i = 0; i < n; ++i) {
      const std::string id = "C" + ref + "_" + std::to_string(i);
      recs.push_back(paper(id, 2001));
      edges.push_back({id, ref});
    }
  };
  add("R5", 4);
  add("R9", 8);
  add("R2", 1);
  const auto g = make_graph(recs, edges);
  const auto top = g.most_cited_reference(g.index_of("P"), WindowSpec::unlimited());
  REQUIRE(top);
  CHECK(g.id(top->reference) == "R9");
  CHECK(top->citations == 9);  // eight citers plus P itself
  CHECK_FALSE(g.most_cited_reference(g.index_of("R2"), WindowSpec::unlimited()).has_value());
}

TEST_CASE("window specs") {
  CHECK(WindowSpec::parse("unlimited").is_unlimited());
  CHECK(WindowSpec::parse("5").years() == 5);
  CHECK(WindowSpec::of_years(5).to_string() == "5");
  CHECK_THROWS_AS(WindowSpec::parse("0"), InvalidArgument);
  CHECK_THROWS_AS(WindowSpec::parse("five"), InvalidArgument);
  CHECK(WindowSpec::of_years(1).admits(2000, 2000));
  CHECK(WindowSpec::of_years(1).admits(2000, 2001));
  CHECK_FALSE(WindowSpec::of_years(1).admits(2000, 2002));
  CHECK_FALSE(WindowSpec::unlimited().admits(2000, 1999));
}

TEST_CASE("doc types") {
  CHECK(parse_doc_type("journal-article") == DocType::journal_article);
  CHECK(parse_doc_type("book-chapter") == DocType::other);
  CHECK(to_string(DocType::journal_article) == "journal-article");
}

TEST_CASE("unknown ids and indices") {
  const auto g = make_graph({paper("A", 2000)}, {});
  CHECK_THROWS_AS(g.index_of("nope"), UnknownPaper);
  CHECK_FALSE(g.find("nope").has_value());
  CHECK_THROWS_AS(g.check_index(1), UnknownPaper);
}

TEST_CASE("internal order is external id order") {
  const auto g = make_graph({paper("b", 2000), paper("a", 2000), paper("c", 2000)}, {});
  CHECK(g.id(0) == "a");
  CHECK(g.id(1) == "b");
  CHECK(g.id(2) == "c");
}

}  // TEST_SUITE
