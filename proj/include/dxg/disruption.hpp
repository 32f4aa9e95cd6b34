#pragma once
// Disruption index and its decomposition.
//
// For a focal paper p under window w, with U the set of papers citing at
// least one reference of p (p itself excluded, citers restricted to the
// window anchored at p's year):
//
//   type i = citers(p) \ U      type j = citers(p) ∩ U      type k = U \ citers(p)
//
//   D0  = (Ni - Nj) / (Ni + Nj + Nk)
//   d_p = (Ni - Nj) / (Ni + Nj)          R_k = Nk / (Ni + Nj)
//   D0 * (1 + R_k) = d_p                 (exact)
//   b_p = C_max / C_p,  D0 ~ d_p / (1 + b_p)
//
// Undefined quantities are std::nullopt, never 0.0.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dxg/graph.hpp"

namespace dxg {

enum ResultFlag : std::uint32_t {
  kNoRefs = 1u << 0,
  kNoCiters = 1u << 1,
  kNoAuthorData = 1u << 2,
  kNoPopularRefs = 1u << 3,
};

// Comma-joined flag names, e.g. "no_refs,no_citers"; empty when none are set.
std::string flags_to_string(std::uint32_t flags);
std::uint32_t flags_from_string(std::string_view text);

struct DisruptionCounts {
  std::int64_t n_i = 0;
  std::int64_t n_j = 0;
  std::int64_t n_k = 0;

  friend bool operator==(const DisruptionCounts&, const DisruptionCounts&) = default;
};

// (Ni - Nj) / (Ni + Nj + Nk); nullopt when the denominator is zero.
std::optional<double> disruption_index(const DisruptionCounts& c);
// (Ni - Nj) / (Ni + Nj); nullopt when Ni + Nj = 0.
std::optional<double> local_displacement(const DisruptionCounts& c);
// Nk / (Ni + Nj); nullopt when Ni + Nj = 0.
std::optional<double> reference_ratio(const DisruptionCounts& c);

struct CiterClassification {
  NodeIndex focal = 0;
  WindowSpec window;
  std::vector<NodeIndex> set_i;
  std::vector<NodeIndex> set_j;
  std::vector<NodeIndex> set_k;
  DisruptionCounts counts;
  std::uint32_t flags = 0;
};

// Throws UnknownPaper. A paper without references or window citers still
// gets its (possibly empty) sets, with kNoRefs / kNoCiters raised.
CiterClassification classify_citers(const CitationGraph& g, NodeIndex p, const WindowSpec& w);

// D0 for p; nullopt when p has no references, no window citers, or an empty
// denominator.
std::optional<double> d_index(const CitationGraph& g, NodeIndex p, const WindowSpec& w);

struct Decomposition {
  double d_p = 0.0;
  double r_k = 0.0;
  std::optional<double> b_p;  // undefined without references
  double reconstruction = 0.0;  // d_p / (1 + r_k), equal to D0
  std::uint64_t c_p = 0;
  std::uint64_t c_max = 0;
};

// nullopt when p has no window citers (C_p = 0).
std::optional<Decomposition> decompose(const CitationGraph& g, NodeIndex p, const WindowSpec& w);

enum class SelfCitationRule { author_overlap, off };
enum class D4Denominator { citers, citers_and_k };

struct PopularityThreshold {
  // When set, a fixed minimum citation count; otherwise the corpus quantile.
  std::optional<std::uint64_t> min_citations;
  double quantile = 0.75;
};

struct VariantConfig {
  PopularityThreshold popular;
  SelfCitationRule self_citation = SelfCitationRule::author_overlap;
  D4Denominator d4_denominator = D4Denominator::citers;
};

// VariantConfig with the popularity threshold pinned to a count. Resolve once
// per corpus, then reuse across batch runs.
struct ResolvedVariantConfig {
  std::uint64_t popular_min_citations = 0;
  SelfCitationRule self_citation = SelfCitationRule::author_overlap;
  D4Denominator d4_denominator = D4Denominator::citers;
};

// The quantile is taken (nearest rank) over the total citation counts of
// every paper that appears as a reference at least once.
ResolvedVariantConfig resolve_variants(const CitationGraph& g, const VariantConfig& cfg);

struct Variants {
  std::optional<double> d1;  // D0 without self-citing citers
  std::optional<double> d2;  // D0 over popular references only
  std::optional<double> d3;  // Ni / (Ni + Nj)
  std::optional<double> d4;  // Ni / (Ni + sum of j weights)
  std::uint32_t flags = 0;
};

Variants d_variants(const CitationGraph& g, NodeIndex p, const WindowSpec& w,
                    const ResolvedVariantConfig& cfg);

struct DisruptionResult {
  NodeIndex focal = 0;
  int year = 0;
  std::uint32_t n_refs = 0;
  std::uint32_t team_size = 0;
  DisruptionCounts counts;
  std::uint64_t c_p = 0;
  std::uint64_t c_max = 0;
  std::optional<NodeIndex> top_reference;
  std::optional<double> d0;
  std::optional<double> d_p;
  std::optional<double> r_k;
  std::optional<double> b_p;
  std::optional<double> d1;
  std::optional<double> d2;
  std::optional<double> d3;
  std::optional<double> d4;
  std::uint32_t flags = 0;

  friend bool operator==(const DisruptionResult&, const DisruptionResult&) = default;
};

// Per-thread working memory sized to the graph; reusable across papers.
class DisruptionScratch {
 public:
  explicit DisruptionScratch(std::size_t paper_count);

 private:
  friend class DisruptionEngine;
  std::vector<std::uint32_t> ref_hits_;      // focal references cited, per paper
  std::vector<std::uint32_t> popular_hits_;  // popular focal references cited, per paper
  std::vector<std::uint8_t> cites_focal_;
  std::vector<NodeIndex> touched_;
  std::vector<NodeIndex> focal_citers_;
  std::vector<AuthorIndex> focal_authors_;
  std::optional<MostCitedReference> top_;
  std::size_t popular_refs_ = 0;
};

// Computes every per-paper quantity in a single pass over the two-hop
// neighbourhood. Pure function of (graph, paper, window, config).
class DisruptionEngine {
 public:
  DisruptionEngine(const CitationGraph& g, WindowSpec w, ResolvedVariantConfig cfg,
                   bool with_variants = true);

  DisruptionResult compute(NodeIndex p, DisruptionScratch& scratch) const;

  // Materialized i/j/k sets, sorted by index.
  CiterClassification classify(NodeIndex p, DisruptionScratch& scratch) const;

  const CitationGraph& graph() const { return g_; }
  const WindowSpec& window() const { return w_; }

 private:
  void gather(NodeIndex p, DisruptionScratch& s) const;
  void reset(DisruptionScratch& s) const;
  bool shares_author(std::span<const AuthorIndex> sorted_focal, NodeIndex c) const;

  const CitationGraph& g_;
  WindowSpec w_;
  ResolvedVariantConfig cfg_;
  bool with_variants_;
};

using ResultSink = std::function<void(const DisruptionResult&)>;

// One result per eligible paper, delivered to `sink` in index order (which is
// external-id order). Output is identical for any worker count.
void batch_compute(const CitationGraph& g, const WindowSpec& w, const ResolvedVariantConfig& cfg,
                   unsigned workers, const ResultSink& sink, bool with_variants = true);

std::vector<DisruptionResult> batch_compute(const CitationGraph& g, const WindowSpec& w,
                                            const ResolvedVariantConfig& cfg, unsigned workers,
                                            bool with_variants = true);

}  // namespace dxg
