#include "dxg/ingest.hpp"

#include <charconv>
#include <istream>

#include "dxg/error.hpp"

namespace dxg {
namespace {

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

void record_issue(ParseReport& rep, std::size_t line, std::string msg) {
  ++rep.errors;
  if (rep.issues.size() < ParseReport::kMaxIssues) rep.issues.push_back({line, std::move(msg)});
}

void check_threshold(const ParseReport& rep, const ParseOptions& opts, const char* what) {
  if (rep.error_fraction() > opts.max_error_fraction) {
    throw TooManyParseErrors(std::string(what) + ": " + std::to_string(rep.errors) + " of " +
                             std::to_string(rep.data_lines) + " lines malformed");
  }
}

void expect_header(std::istream& in, std::string_view header, const char* what) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != header) {
    throw MissingHeader(std::string(what) + ": expected header '" + std::string(header) + "'");
  }
}

}  // namespace

PaperRecord parse_paper_line(std::string_view line) {
  const auto cols = split(line, '\t');
  if (cols.size() != 5) {
    throw InvalidRecord("expected 5 columns, got " + std::to_string(cols.size()));
  }
  PaperRecord rec;
  if (cols[0].empty()) throw InvalidRecord("empty id");
  rec.id = std::string(cols[0]);
  if (!parse_int(cols[1], rec.year)) throw InvalidRecord("bad year '" + std::string(cols[1]) + "'");
  if (cols[2].empty()) throw InvalidRecord("empty doc_type");
  rec.doc_type = parse_doc_type(cols[2]);
  if (!cols[3].empty()) {
    for (auto a : split(cols[3], ';')) {
      if (a.empty()) throw InvalidRecord("empty author id");
      rec.author_ids.emplace_back(a);
    }
  }
  if (!cols[4].empty()) {
    for (auto f : split(cols[4], ';')) {
      unsigned v = 0;
      if (!parse_int(f, v) || v >= kTaxonomySize) {
        throw InvalidRecord("bad field id '" + std::string(f) + "'");
      }
      rec.field_ids.push_back(static_cast<FieldId>(v));
    }
  }
  validate(rec);
  return rec;
}

PapersParse parse_papers(std::istream& in, const ParseOptions& opts) {
  expect_header(in, kPapersHeader, "papers");
  PapersParse out;
  std::string buf;
  std::size_t line_no = 1;
  while (std::getline(in, buf)) {
    ++line_no;
    const auto line = strip_cr(buf);
    if (is_blank(line)) {
      ++out.report.blank_lines;
      continue;
    }
    ++out.report.data_lines;
    try {
      out.records.push_back(parse_paper_line(line));
      ++out.report.accepted;
    } catch (const InvalidRecord& e) {
      record_issue(out.report, line_no, e.what());
    }
  }
  check_threshold(out.report, opts, "papers");
  return out;
}

ParseReport parse_edges(std::istream& in, const EdgeSink& sink, const ParseOptions& opts) {
  expect_header(in, kEdgesHeader, "edges");
  ParseReport rep;
  std::string buf;
  std::size_t line_no = 1;
  while (std::getline(in, buf)) {
    ++line_no;
    const auto line = strip_cr(buf);
    if (is_blank(line)) {
      ++rep.blank_lines;
      continue;
    }
    ++rep.data_lines;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      record_issue(rep, line_no, "expected 2 columns");
      continue;
    }
    const auto citer = line.substr(0, tab);
    const auto cited = line.substr(tab + 1);
    if (citer.empty() || cited.empty()) {
      record_issue(rep, line_no, "empty id");
      continue;
    }
    if (citer == cited) ++rep.self_loops;
    ++rep.accepted;
    sink(citer, cited);
  }
  check_threshold(rep, opts, "edges");
  return rep;
}

EdgesParse parse_edges(std::istream& in, const ParseOptions& opts) {
  EdgesParse out;
  out.report = parse_edges(
      in, [&](std::string_view a, std::string_view b) { out.edges.push_back({std::string(a), std::string(b)}); },
      opts);
  return out;
}

void CorpusFilter::check() const {
  if (doc_types.empty()) throw InvalidArgument("corpus filter needs at least one doc type");
  if (min_year && max_year && *min_year > *max_year) {
    throw InvalidArgument("corpus filter min_year exceeds max_year");
  }
}

FilterResult apply_filter(const CitationGraph& g, const CorpusFilter& f) {
  f.check();
  FilterReport rep;
  std::vector<std::uint8_t> eligible(g.size(), 0);
  for (NodeIndex p = 0; p < g.size(); ++p) {
    ++rep.considered;
    bool ok = true;
    if (g.reference_count(p) < f.min_references) {
      ++rep.too_few_references;
      ok = false;
    }
    if (g.citation_count(p) < f.min_citations) {
      ++rep.too_few_citations;
      ok = false;
    }
    if (!f.doc_types.contains(g.doc_type(p))) {
      ++rep.wrong_doc_type;
      ok = false;
    }
    const int y = g.year(p);
    if ((f.min_year && y < *f.min_year) || (f.max_year && y > *f.max_year)) {
      ++rep.outside_years;
      ok = false;
    }
    if (ok) {
      eligible[p] = 1;
      ++rep.eligible;
    }
  }
  return FilterResult{g.with_eligibility(std::move(eligible)), rep};
}

}  // namespace dxg
