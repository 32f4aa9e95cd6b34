#include "dxg/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "dxg/error.hpp"

namespace dxg {

std::string_view to_string(DocType t) {
  return t == DocType::journal_article ? "journal-article" : "other";
}

DocType parse_doc_type(std::string_view label) {
  return label == "journal-article" ? DocType::journal_article : DocType::other;
}

void validate(const PaperRecord& rec) {
  if (rec.id.empty()) throw InvalidRecord("empty paper id");
  if (rec.year < kMinYear || rec.year > kMaxYear) {
    throw InvalidRecord("year " + std::to_string(rec.year) + " out of range for " + rec.id);
  }
  for (FieldId f : rec.field_ids) {
    if (f >= kTaxonomySize) {
      throw InvalidRecord("field id " + std::to_string(f) + " out of range for " + rec.id);
    }
  }
}

WindowSpec WindowSpec::of_years(int years) {
  if (years <= 0) throw InvalidArgument("citation window must be a positive number of years");
  WindowSpec w;
  w.years_ = years;
  return w;
}

std::string WindowSpec::to_string() const {
  return years_ ? std::to_string(*years_) : std::string("unlimited");
}

WindowSpec WindowSpec::parse(std::string_view text) {
  if (text == "unlimited" || text == "all") return unlimited();
  int years = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), years);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("bad citation window: " + std::string(text));
  }
  return of_years(years);
}

void GraphData::rebuild_citers() {
  const std::size_t n = paper_count();
  citer_offsets.assign(n + 1, 0);
  for (NodeIndex cited : refs) ++citer_offsets[cited + 1];
  std::partial_sum(citer_offsets.begin(), citer_offsets.end(), citer_offsets.begin());
  citers.resize(refs.size());
  std::vector<std::uint64_t> cursor(citer_offsets.begin(), citer_offsets.end() - 1);
  // Visiting citers in ascending order keeps each citer list sorted.
  for (NodeIndex citer = 0; citer < n; ++citer) {
    for (std::uint64_t e = ref_offsets[citer]; e < ref_offsets[citer + 1]; ++e) {
      citers[cursor[refs[e]]++] = citer;
    }
  }
}

namespace {

std::shared_ptr<const GraphData> empty_data() {
  auto d = std::make_shared<GraphData>();
  d->author_offsets = d->field_offsets = d->ref_offsets = d->citer_offsets = {0};
  return d;
}

}  // namespace

CitationGraph::CitationGraph() : CitationGraph(empty_data()) {}

CitationGraph::CitationGraph(std::shared_ptr<const GraphData> data)
    : data_(std::move(data)), eligible_(data_->paper_count(), 1) {}

CitationGraph::CitationGraph(std::shared_ptr<const GraphData> data, std::vector<std::uint8_t> eligible)
    : data_(std::move(data)), eligible_(std::move(eligible)) {
  if (eligible_.size() != data_->paper_count()) {
    throw InvalidArgument("eligibility mask size does not match paper count");
  }
}

std::optional<NodeIndex> CitationGraph::find(std::string_view id) const {
  const auto& ids = data_->ids;
  auto it = std::lower_bound(ids.begin(), ids.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == ids.end() || *it != id) return std::nullopt;
  return static_cast<NodeIndex>(it - ids.begin());
}

NodeIndex CitationGraph::index_of(std::string_view id) const {
  auto p = find(id);
  if (!p) throw UnknownPaper(std::string(id));
  return *p;
}

void CitationGraph::check_index(NodeIndex p) const {
  if (p >= size()) throw UnknownPaper("#" + std::to_string(p));
}

std::span<const AuthorIndex> CitationGraph::authors(NodeIndex p) const {
  const auto& d = *data_;
  return {d.authors.data() + d.author_offsets[p], d.author_offsets[p + 1] - d.author_offsets[p]};
}

std::span<const FieldId> CitationGraph::fields(NodeIndex p) const {
  const auto& d = *data_;
  return {d.fields.data() + d.field_offsets[p], d.field_offsets[p + 1] - d.field_offsets[p]};
}

std::span<const NodeIndex> CitationGraph::references(NodeIndex p) const {
  const auto& d = *data_;
  return {d.refs.data() + d.ref_offsets[p], d.ref_offsets[p + 1] - d.ref_offsets[p]};
}

std::span<const NodeIndex> CitationGraph::all_citers(NodeIndex p) const {
  const auto& d = *data_;
  return {d.citers.data() + d.citer_offsets[p], d.citer_offsets[p + 1] - d.citer_offsets[p]};
}

std::vector<NodeIndex> CitationGraph::citers(NodeIndex p, const WindowSpec& w) const {
  check_index(p);
  const int y = year(p);
  std::vector<NodeIndex> out;
  for (NodeIndex c : all_citers(p)) {
    if (w.admits(y, year(c))) out.push_back(c);
  }
  return out;
}

std::size_t CitationGraph::count_citers(NodeIndex p, int anchor_year, const WindowSpec& w) const {
  check_index(p);
  const auto& years = data_->years;
  std::size_t n = 0;
  for (NodeIndex c : all_citers(p)) n += w.admits(anchor_year, years[c]) ? 1 : 0;
  return n;
}

std::optional<MostCitedReference> CitationGraph::most_cited_reference(NodeIndex p,
                                                                      const WindowSpec& w) const {
  check_index(p);
  const int y = year(p);
  std::optional<MostCitedReference> best;
  // References are sorted by index, so a strict > keeps the smallest id on ties.
  for (NodeIndex r : references(p)) {
    const std::uint64_t n = count_citers(r, y, w);
    if (!best || n > best->citations) best = MostCitedReference{r, n};
  }
  return best;
}

std::size_t CitationGraph::eligible_count() const {
  return static_cast<std::size_t>(std::count(eligible_.begin(), eligible_.end(), std::uint8_t{1}));
}

CitationGraph CitationGraph::with_eligibility(std::vector<std::uint8_t> eligible) const {
  return CitationGraph(data_, std::move(eligible));
}

bool operator==(const CitationGraph& a, const CitationGraph& b) {
  if (a.eligible_ != b.eligible_) return false;
  if (a.data_ == b.data_) return true;
  const GraphData& x = *a.data_;
  const GraphData& y = *b.data_;
  return x.ids == y.ids && x.years == y.years && x.doc_types == y.doc_types &&
         x.author_names == y.author_names && x.author_offsets == y.author_offsets &&
         x.authors == y.authors && x.field_offsets == y.field_offsets && x.fields == y.fields &&
         x.ref_offsets == y.ref_offsets && x.refs == y.refs && x.citer_offsets == y.citer_offsets &&
         x.citers == y.citers;
}

GraphBuilder::GraphBuilder(std::vector<PaperRecord> records) : data_(std::make_unique<GraphData>()) {
  for (const auto& r : records) validate(r);
  std::sort(records.begin(), records.end(),
            [](const PaperRecord& a, const PaperRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].id == records[i - 1].id) throw DuplicatePaper(records[i].id);
  }

  GraphData& d = *data_;
  const std::size_t n = records.size();

  std::vector<std::string_view> names;
  for (const auto& r : records) names.insert(names.end(), r.author_ids.begin(), r.author_ids.end());
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  d.author_names.assign(names.begin(), names.end());

  d.ids.reserve(n);
  d.years.reserve(n);
  d.doc_types.reserve(n);
  d.author_offsets.reserve(n + 1);
  d.field_offsets.reserve(n + 1);
  d.author_offsets.push_back(0);
  d.field_offsets.push_back(0);
  for (auto& r : records) {
    d.years.push_back(static_cast<std::int16_t>(r.year));
    d.doc_types.push_back(r.doc_type);
    for (const auto& a : r.author_ids) {
      auto it = std::lower_bound(d.author_names.begin(), d.author_names.end(), a);
      d.authors.push_back(static_cast<AuthorIndex>(it - d.author_names.begin()));
    }
    d.author_offsets.push_back(d.authors.size());
    d.fields.insert(d.fields.end(), r.field_ids.begin(), r.field_ids.end());
    d.field_offsets.push_back(d.fields.size());
    d.ids.push_back(std::move(r.id));
  }
  report_.papers = n;
}

std::optional<NodeIndex> GraphBuilder::find(std::string_view id) const {
  const auto& ids = data_->ids;
  auto it = std::lower_bound(ids.begin(), ids.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == ids.end() || *it != id) return std::nullopt;
  return static_cast<NodeIndex>(it - ids.begin());
}

void GraphBuilder::add_edge(std::string_view citer, std::string_view cited) {
  auto a = find(citer);
  auto b = find(cited);
  if (!a || !b) {
    ++report_.edges_in;
    ++report_.dangling_edges;
    if (report_.dangling_samples.size() < kMaxDanglingSamples) {
      report_.dangling_samples.push_back({std::string(citer), std::string(cited)});
    }
    return;
  }
  add_edge_indices(*a, *b);
}

void GraphBuilder::add_edge_indices(NodeIndex citer, NodeIndex cited) {
  ++report_.edges_in;
  if (citer >= paper_count() || cited >= paper_count()) {
    ++report_.dangling_edges;
    return;
  }
  if (citer == cited) {
    ++report_.self_loops;
    return;
  }
  edges_.push_back((static_cast<std::uint64_t>(citer) << 32) | cited);
}

BuildResult GraphBuilder::build() && {
  std::sort(edges_.begin(), edges_.end());
  const auto last = std::unique(edges_.begin(), edges_.end());
  report_.duplicate_edges = static_cast<std::size_t>(edges_.end() - last);
  edges_.erase(last, edges_.end());
  edges_.shrink_to_fit();
  report_.edges_kept = edges_.size();

  GraphData& d = *data_;
  const std::size_t n = d.ids.size();
  d.ref_offsets.assign(n + 1, 0);
  d.refs.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    ++d.ref_offsets[(edges_[e] >> 32) + 1];
    d.refs[e] = static_cast<NodeIndex>(edges_[e] & 0xffffffffu);
  }
  std::partial_sum(d.ref_offsets.begin(), d.ref_offsets.end(), d.ref_offsets.begin());
  std::vector<std::uint64_t>().swap(edges_);
  d.rebuild_citers();

  std::shared_ptr<const GraphData> frozen(std::move(data_));
  return BuildResult{CitationGraph(std::move(frozen)), std::move(report_)};
}

BuildResult build_graph(std::vector<PaperRecord> records, std::span<const EdgePair> edges) {
  GraphBuilder builder(std::move(records));
  for (const auto& e : edges) builder.add_edge(e.citer, e.cited);
  return std::move(builder).build();
}

}  // namespace dxg
