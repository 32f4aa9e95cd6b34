#include <doctest.h>

#include <sstream>

#include "dxg/error.hpp"
#include "dxg/results_io.hpp"
#include "support.hpp"

using namespace dxg;
using dxg::test::make_graph;
using dxg::test::paper;

namespace {

CitationGraph fixture() {
  Rng rng(12);
  synth::RandomDagParams p;
  p.papers = 150;
  return make_graph(synth::random_dag(p, rng));
}

std::string write_all(const CitationGraph& g, const std::vector<DisruptionResult>& rs, ResultsFormat f,
                      const ResultsHeader& h) {
  std::ostringstream out;
  ResultsWriter w(out, f, g, h);
  for (const auto& r : rs) w.write(r);
  return out.str();
}

}  // namespace

TEST_SUITE("results_io") {

TEST_CASE("checksum text") {
  CHECK(format_checksum(0xabcULL) == "0x0000000000000abc");
  CHECK(parse_checksum("0x0000000000000abc") == 0xabcULL);
  CHECK(parse_checksum(format_checksum(~0ULL)) == ~0ULL);
  CHECK_THROWS(parse_checksum("xyz"));
  CHECK_THROWS(parse_checksum(""));
}

TEST_CASE("shortest round-trip doubles") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(-1.0) == "-1");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(format_double(third)) == third);
}

TEST_CASE("both formats round-trip every field") {
  const auto g = fixture();
  ResolvedVariantConfig cfg;
  cfg.popular_min_citations = 3;
  const auto rs = batch_compute(g, WindowSpec::of_years(4), cfg, 2);
  ResultsHeader h;
  h.snapshot_checksum = 0x1234abcdULL;
  h.window = WindowSpec::of_years(4);
  h.variants = true;
  h.popular_min_citations = 3;
  for (auto f : {ResultsFormat::jsonl, ResultsFormat::tsv}) {
    std::istringstream in(write_all(g, rs, f, h));
    const auto file = read_results(in);
    CHECK(file.header.snapshot_checksum == h.snapshot_checksum);
    CHECK(file.header.window == h.window);
    CHECK(file.header.variants);
    CHECK(file.header.popular_min_citations == 3);
    const auto back = resolve_rows(g, file.rows);
    REQUIRE(back.size() == rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) CHECK(back[i] == rs[i]);
  }
}

TEST_CASE("undefined values are written as null, not zero") {
  const auto g = make_graph({paper("F", 2000), paper("R", 1990)}, {{"F", "R"}});
  const auto rs = batch_compute(g.with_eligibility({1, 0}), WindowSpec::unlimited(), {}, 1);
  const auto jsonl = write_all(g, rs, ResultsFormat::jsonl, {});
  CHECK(jsonl.find("\"d0\":null") != std::string::npos);
  CHECK(jsonl.find("\"flags\":[\"no_citers\"]") != std::string::npos);
  const auto tsv = write_all(g, rs, ResultsFormat::tsv, {});
  CHECK(tsv.find("\tNA\t") != std::string::npos);
}

TEST_CASE("foreign ids and malformed files") {
  const auto g = fixture();
  std::vector<ResultRow> rows(1);
  rows[0].id = "not-here";
  CHECK_THROWS_AS(resolve_rows(g, rows), UnknownPaper);
  std::istringstream junk("hello\n");
  CHECK_THROWS_AS(read_results(junk), FormatError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_results(empty), FormatError);
}

}  // TEST_SUITE
