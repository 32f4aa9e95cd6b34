#pragma once
// Citation graph: an immutable, compressed-sparse store of papers with
// forward (references) and backward (citers) adjacency.
//
// Internal node indices are assigned in ascending order of the external
// string id, so "smallest external id" and "smallest index" coincide and
// iterating indices visits papers in external-id order.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dxg {

using NodeIndex = std::uint32_t;
using FieldId = std::uint16_t;
using AuthorIndex = std::uint32_t;

inline constexpr int kMinYear = 1500;
inline constexpr int kMaxYear = 2100;
inline constexpr FieldId kTaxonomySize = 292;

enum class DocType : std::uint8_t { journal_article = 0, other = 1 };

std::string_view to_string(DocType t);
// Accepts "journal-article"; every other non-empty label maps to DocType::other.
DocType parse_doc_type(std::string_view label);

struct PaperRecord {
  std::string id;
  int year = 0;
  DocType doc_type = DocType::journal_article;
  std::vector<std::string> author_ids;
  std::vector<FieldId> field_ids;
};

// Throws InvalidRecord when year or field ids fall outside their domains.
void validate(const PaperRecord& rec);

// Citation window. A citer c of any node counts only if
// focal.year <= c.year <= focal.year + years.
class WindowSpec {
 public:
  static WindowSpec unlimited() { return WindowSpec{}; }
  static WindowSpec of_years(int years);

  bool is_unlimited() const { return !years_.has_value(); }
  int years() const { return *years_; }

  bool admits(int focal_year, int citer_year) const {
    if (citer_year < focal_year) return false;
    return !years_ || citer_year - focal_year <= *years_;
  }

  std::string to_string() const;
  static WindowSpec parse(std::string_view text);

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;

 private:
  std::optional<int> years_;
};

// Frozen payload shared by every CitationGraph view over the same data.
struct GraphData {
  std::vector<std::string> ids;  // sorted ascending, unique
  std::vector<std::int16_t> years;
  std::vector<DocType> doc_types;

  std::vector<std::string> author_names;  // interned, sorted ascending
  std::vector<std::uint64_t> author_offsets;
  std::vector<AuthorIndex> authors;  // per paper, in input order

  std::vector<std::uint64_t> field_offsets;
  std::vector<FieldId> fields;  // per paper, in input order

  std::vector<std::uint64_t> ref_offsets;
  std::vector<NodeIndex> refs;  // per paper, sorted, duplicate-free

  std::vector<std::uint64_t> citer_offsets;
  std::vector<NodeIndex> citers;  // per paper, sorted, duplicate-free

  std::size_t paper_count() const { return ids.size(); }
  std::size_t edge_count() const { return refs.size(); }

  // Rebuilds citer_offsets/citers as the transpose of the reference lists.
  void rebuild_citers();
};

struct MostCitedReference {
  NodeIndex reference;
  std::uint64_t citations;
};

class CitationGraph {
 public:
  CitationGraph();
  explicit CitationGraph(std::shared_ptr<const GraphData> data);
  CitationGraph(std::shared_ptr<const GraphData> data, std::vector<std::uint8_t> eligible);

  std::size_t size() const { return data_->paper_count(); }
  std::size_t edge_count() const { return data_->edge_count(); }

  std::optional<NodeIndex> find(std::string_view id) const;
  // Throws UnknownPaper.
  NodeIndex index_of(std::string_view id) const;

  const std::string& id(NodeIndex p) const { return data_->ids[p]; }
  int year(NodeIndex p) const { return data_->years[p]; }
  DocType doc_type(NodeIndex p) const { return data_->doc_types[p]; }
  std::span<const AuthorIndex> authors(NodeIndex p) const;
  const std::string& author_name(AuthorIndex a) const { return data_->author_names[a]; }
  std::span<const FieldId> fields(NodeIndex p) const;

  std::span<const NodeIndex> references(NodeIndex p) const;
  // Every citer regardless of year.
  std::span<const NodeIndex> all_citers(NodeIndex p) const;
  std::size_t reference_count(NodeIndex p) const { return references(p).size(); }
  std::size_t citation_count(NodeIndex p) const { return all_citers(p).size(); }

  // Citers of p admitted by the window measured from p's own year.
  std::vector<NodeIndex> citers(NodeIndex p, const WindowSpec& w) const;
  // Citers of p admitted by the window measured from anchor_year.
  std::size_t count_citers(NodeIndex p, int anchor_year, const WindowSpec& w) const;

  // Reference of p with the most citers, counted within the window anchored
  // at p's year. Ties go to the smallest external id.
  std::optional<MostCitedReference> most_cited_reference(NodeIndex p, const WindowSpec& w) const;

  bool eligible(NodeIndex p) const { return eligible_[p] != 0; }
  std::span<const std::uint8_t> eligibility() const { return eligible_; }
  std::size_t eligible_count() const;
  CitationGraph with_eligibility(std::vector<std::uint8_t> eligible) const;

  const GraphData& data() const { return *data_; }
  std::shared_ptr<const GraphData> shared_data() const { return data_; }

  void check_index(NodeIndex p) const;

  friend bool operator==(const CitationGraph& a, const CitationGraph& b);

 private:
  std::shared_ptr<const GraphData> data_;
  std::vector<std::uint8_t> eligible_;
};

struct EdgeIssue {
  std::string citer;
  std::string cited;
};

struct BuildReport {
  std::size_t papers = 0;
  std::size_t edges_in = 0;
  std::size_t edges_kept = 0;
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
  std::size_t dangling_edges = 0;
  std::vector<EdgeIssue> dangling_samples;  // first few only
};

struct BuildResult {
  CitationGraph graph;
  BuildReport report;
};

// Single-writer builder. Papers are fixed at construction so edges can be
// resolved to dense indices as they stream in.
class GraphBuilder {
 public:
  static constexpr std::size_t kMaxDanglingSamples = 32;

  // Throws DuplicatePaper and InvalidRecord.
  explicit GraphBuilder(std::vector<PaperRecord> records);

  void add_edge(std::string_view citer, std::string_view cited);
  void add_edge_indices(NodeIndex citer, NodeIndex cited);

  std::optional<NodeIndex> find(std::string_view id) const;
  std::size_t paper_count() const { return data_->ids.size(); }

  BuildResult build() &&;

 private:
  std::unique_ptr<GraphData> data_;
  std::vector<std::uint64_t> edges_;  // (citer << 32) | cited
  BuildReport report_;
};

struct EdgePair {
  std::string citer;
  std::string cited;
};

BuildResult build_graph(std::vector<PaperRecord> records, std::span<const EdgePair> edges);

}  // namespace dxg
