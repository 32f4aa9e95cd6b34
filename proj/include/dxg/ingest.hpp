#pragma once
// TSV ingestion and corpus-hygiene filtering.
//
//   papers.tsv: id  year  doc_type  author_ids  field_ids   (lists joined by ';')
//   edges.tsv:  citer_id  cited_id

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dxg/graph.hpp"

namespace dxg {

inline constexpr std::string_view kPapersHeader = "id\tyear\tdoc_type\tauthor_ids\tfield_ids";
inline constexpr std::string_view kEdgesHeader = "citer_id\tcited_id";

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct ParseReport {
  static constexpr std::size_t kMaxIssues = 100;

  std::size_t data_lines = 0;  // non-blank lines after the header
  std::size_t accepted = 0;
  std::size_t errors = 0;
  std::size_t blank_lines = 0;
  std::size_t self_loops = 0;  // edges only
  std::vector<ParseIssue> issues;

  double error_fraction() const {
    return data_lines == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(data_lines);
  }
};

struct ParseOptions {
  // Parsing aborts with TooManyParseErrors once the malformed-line fraction
  // exceeds this bound at end of input.
  double max_error_fraction = 0.05;
};

struct PapersParse {
  std::vector<PaperRecord> records;
  ParseReport report;
};

// Throws MissingHeader, TooManyParseErrors.
PapersParse parse_papers(std::istream& in, const ParseOptions& opts = {});

// Parses one data line; throws InvalidRecord with a description on failure.
PaperRecord parse_paper_line(std::string_view line);

using EdgeSink = std::function<void(std::string_view citer, std::string_view cited)>;

// Streams (citer, cited) pairs in input order. Self-loops are passed through
// and counted in the report; build_graph drops them.
ParseReport parse_edges(std::istream& in, const EdgeSink& sink, const ParseOptions& opts = {});

struct EdgesParse {
  std::vector<EdgePair> edges;
  ParseReport report;
};
EdgesParse parse_edges(std::istream& in, const ParseOptions& opts = {});

struct CorpusFilter {
  std::size_t min_references = 1;
  std::size_t min_citations = 1;
  std::set<DocType> doc_types{DocType::journal_article};
  std::optional<int> min_year;
  std::optional<int> max_year;

  // Throws InvalidArgument when doc_types is empty or the year bounds cross.
  void check() const;
};

struct FilterReport {
  std::size_t considered = 0;
  std::size_t eligible = 0;
  // A paper failing several rules is counted under each of them.
  std::size_t too_few_references = 0;
  std::size_t too_few_citations = 0;
  std::size_t wrong_doc_type = 0;
  std::size_t outside_years = 0;
};

struct FilterResult {
  CitationGraph graph;
  FilterReport report;
};

// Marks focal eligibility; excluded papers stay in the graph as references
// and citers.
FilterResult apply_filter(const CitationGraph& g, const CorpusFilter& f);

}  // namespace dxg
