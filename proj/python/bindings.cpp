#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>

#include "dxg/analysis.hpp"
#include "dxg/disruption.hpp"
#include "dxg/error.hpp"
#include "dxg/ingest.hpp"
#include "dxg/parallel.hpp"
#include "dxg/snapshot.hpp"
#include "dxg/zipf.hpp"

namespace py = pybind11;
using namespace dxg;

namespace {

// None means unlimited.
WindowSpec window_of(std::optional<int> years) {
  return years ? WindowSpec::of_years(*years) : WindowSpec::unlimited();
}

NodeIndex node(const CitationGraph& g, const std::string& id) { return g.index_of(id); }

std::vector<std::string> ids_of(const CitationGraph& g, std::span<const NodeIndex> v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (auto p : v) out.push_back(g.id(p));
  return out;
}

py::object opt(const std::optional<double>& v) { return v ? py::object(py::float_(*v)) : py::none(); }

py::dict result_dict(const CitationGraph& g, const DisruptionResult& r) {
  py::dict d;
  d["id"] = g.id(r.focal);
  d["year"] = r.year;
  d["n_refs"] = r.n_refs;
  d["team_size"] = r.team_size;
  d["n_i"] = r.counts.n_i;
  d["n_j"] = r.counts.n_j;
  d["n_k"] = r.counts.n_k;
  d["c_p"] = r.c_p;
  d["c_max"] = r.c_max;
  d["top_reference"] = r.top_reference ? py::object(py::str(g.id(*r.top_reference))) : py::none();
  d["d0"] = opt(r.d0);
  d["d_p"] = opt(r.d_p);
  d["r_k"] = opt(r.r_k);
  d["b_p"] = opt(r.b_p);
  d["d1"] = opt(r.d1);
  d["d2"] = opt(r.d2);
  d["d3"] = opt(r.d3);
  d["d4"] = opt(r.d4);
  d["flags"] = flags_to_string(r.flags);
  return d;
}

CitationGraph build(const std::vector<py::dict>& papers, const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<PaperRecord> recs;
  recs.reserve(papers.size());
  for (const auto& p : papers) {
    PaperRecord r;
    r.id = p["id"].cast<std::string>();
    r.year = p["year"].cast<int>();
    if (p.contains("doc_type")) r.doc_type = parse_doc_type(p["doc_type"].cast<std::string>());
    if (p.contains("authors")) r.author_ids = p["authors"].cast<std::vector<std::string>>();
    if (p.contains("fields")) r.field_ids = p["fields"].cast<std::vector<FieldId>>();
    recs.push_back(std::move(r));
  }
  std::vector<EdgePair> ep;
  ep.reserve(edges.size());
  for (const auto& [a, b] : edges) ep.push_back({a, b});
  return build_graph(std::move(recs), ep).graph;
}

CitationGraph ingest(const std::filesystem::path& papers, const std::filesystem::path& edges,
                     std::size_t min_references, std::size_t min_citations, double max_error_rate) {
  std::ifstream pin(papers);
  if (!pin) throw IoError("cannot read " + papers.string());
  std::ifstream ein(edges);
  if (!ein) throw IoError("cannot read " + edges.string());
  ParseOptions po;
  po.max_error_fraction = max_error_rate;
  GraphBuilder b(parse_papers(pin, po).records);
  parse_edges(ein, [&](std::string_view c, std::string_view d) { b.add_edge(c, d); }, po);
  CorpusFilter f;
  f.min_references = min_references;
  f.min_citations = min_citations;
  return apply_filter(std::move(b).build().graph, f).graph;
}

CitationGraph filter(const CitationGraph& g, std::size_t min_references, std::size_t min_citations,
                     std::optional<int> min_year, std::optional<int> max_year) {
  CorpusFilter f;
  f.min_references = min_references;
  f.min_citations = min_citations;
  f.min_year = min_year;
  f.max_year = max_year;
  return apply_filter(g, f).graph;
}

py::list compute(const CitationGraph& g, std::optional<int> window, bool variants, unsigned workers,
                 double popular_quantile, std::optional<std::uint64_t> popular_min_citations, bool d4_include_k) {
  VariantConfig vc;
  vc.popular.quantile = popular_quantile;
  vc.popular.min_citations = popular_min_citations;
  if (d4_include_k) vc.d4_denominator = D4Denominator::citers_and_k;
  const auto cfg = resolve_variants(g, vc);
  std::vector<DisruptionResult> rs;
  {
    py::gil_scoped_release release;
    rs = batch_compute(g, window_of(window), cfg, workers ? workers : default_workers(), variants);
  }
  py::list out;
  for (const auto& r : rs) out.append(result_dict(g, r));
  return out;
}

py::dict zipf(const std::vector<double>& counts, double smoothing) {
  RankSeries s;
  s.citations_by_rank = counts;
  ZipfConfig cfg;
  cfg.smoothing = smoothing;
  const auto f = fit_zipf(s, cfg);
  py::dict d;
  d["a"] = f.a;
  d["b"] = f.b;
  d["c"] = f.c;
  d["sse"] = f.sse;
  d["n_points"] = f.n_points;
  d["converged"] = f.converged;
  d["non_zipf"] = f.non_zipf;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dxg, m) {
  m.doc() = "Disruption index engine for citation graphs";

  py::register_exception<Error>(m, "DxgError", PyExc_RuntimeError);
  py::register_exception<UnknownPaper>(m, "UnknownPaper", PyExc_KeyError);

  py::class_<CitationGraph>(m, "Graph")
      .def(py::init<>())
      .def("__len__", &CitationGraph::size)
      .def_property_readonly("edge_count", &CitationGraph::edge_count)
      .def_property_readonly("eligible_count", &CitationGraph::eligible_count)
      .def("__contains__", [](const CitationGraph& g, const std::string& id) { return g.find(id).has_value(); })
      .def("ids", [](const CitationGraph& g) { return g.data().ids; })
      .def("year", [](const CitationGraph& g, const std::string& id) { return g.year(node(g, id)); })
      .def("eligible", [](const CitationGraph& g, const std::string& id) { return g.eligible(node(g, id)); })
      .def("references",
           [](const CitationGraph& g, const std::string& id) { return ids_of(g, g.references(node(g, id))); })
      .def(
          "citers",
          [](const CitationGraph& g, const std::string& id, std::optional<int> window) {
            return ids_of(g, g.citers(node(g, id), window_of(window)));
          },
          py::arg("id"), py::arg("window") = py::none())
      .def("__eq__", [](const CitationGraph& a, const CitationGraph& b) { return a == b; });

  m.def("build_graph", &build, py::arg("papers"), py::arg("edges"),
        "Build from dicts {id, year[, doc_type, authors, fields]} and (citer, cited) pairs. Every paper is eligible.");
  m.def("ingest", &ingest, py::arg("papers_tsv"), py::arg("edges_tsv"), py::arg("min_references") = 1,
        py::arg("min_citations") = 1, py::arg("max_error_rate") = 0.05);
  m.def("apply_filter", &filter, py::arg("graph"), py::arg("min_references") = 1, py::arg("min_citations") = 1,
        py::arg("min_year") = py::none(), py::arg("max_year") = py::none());
  m.def("save_snapshot", &save_snapshot, py::arg("graph"), py::arg("path"), "Returns the checksum.");
  m.def("load_snapshot", [](const std::filesystem::path& p) { return load_snapshot(p); }, py::arg("path"));

  m.def(
      "d_index",
      [](const CitationGraph& g, const std::string& id, std::optional<int> window) {
        return opt(d_index(g, node(g, id), window_of(window)));
      },
      py::arg("graph"), py::arg("id"), py::arg("window") = py::none());
  m.def(
      "classify",
      [](const CitationGraph& g, const std::string& id, std::optional<int> window) {
        const auto c = classify_citers(g, node(g, id), window_of(window));
        py::dict d;
        d["i"] = ids_of(g, c.set_i);
        d["j"] = ids_of(g, c.set_j);
        d["k"] = ids_of(g, c.set_k);
        d["flags"] = flags_to_string(c.flags);
        return d;
      },
      py::arg("graph"), py::arg("id"), py::arg("window") = py::none());
  m.def("compute", &compute, py::arg("graph"), py::arg("window") = py::none(), py::arg("variants") = true,
        py::arg("workers") = 0, py::arg("popular_quantile") = 0.75, py::arg("popular_min_citations") = py::none(),
        py::arg("d4_include_k") = false, "One result dict per eligible paper, in id order.");

  m.def("fit_zipf", &zipf, py::arg("counts"), py::arg("smoothing") = 1.0);
  m.def("cmax_ratio_theoretical", [](double a, double b) { return cmax_ratio_theoretical(a, b); }, py::arg("a"), py::arg("b"));
  m.def(
      "cmax_ratio_empirical",
      [](const std::vector<double>& counts) {
        RankSeries s;
        s.citations_by_rank = counts;
        return cmax_ratio_empirical(s);
      },
      py::arg("counts"));
  m.def("overlap_baseline", &overlap_baseline, py::arg("taxonomy_size"), py::arg("fields_per_paper"));
}
