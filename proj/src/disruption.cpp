#include "dxg/disruption.hpp"

#include <algorithm>
#include <cmath>

#include "dxg/error.hpp"
#include "dxg/parallel.hpp"

namespace dxg {
namespace {

struct FlagName {
  ResultFlag flag;
  std::string_view name;
};

constexpr FlagName kFlagNames[] = {
    {kNoRefs, "no_refs"},
    {kNoCiters, "no_citers"},
    {kNoAuthorData, "no_author_data"},
    {kNoPopularRefs, "no_popular_refs"},
};

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string flags_to_string(std::uint32_t flags) {
  std::string out;
  for (const auto& f : kFlagNames) {
    if (flags & f.flag) {
      if (!out.empty()) out += ',';
      out += f.name;
    }
  }
  return out;
}

std::uint32_t flags_from_string(std::string_view text) {
  std::uint32_t flags = 0;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto name = text.substr(0, comma);
    bool known = false;
    for (const auto& f : kFlagNames) {
      if (f.name == name) {
        flags |= f.flag;
        known = true;
      }
    }
    if (!known) throw FormatError("unknown result flag '" + std::string(name) + "'");
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return flags;
}

std::optional<double> disruption_index(const DisruptionCounts& c) {
  return ratio(c.n_i - c.n_j, c.n_i + c.n_j + c.n_k);
}

std::optional<double> local_displacement(const DisruptionCounts& c) {
  return ratio(c.n_i - c.n_j, c.n_i + c.n_j);
}

std::optional<double> reference_ratio(const DisruptionCounts& c) {
  return ratio(c.n_k, c.n_i + c.n_j);
}

ResolvedVariantConfig resolve_variants(const CitationGraph& g, const VariantConfig& cfg) {
  ResolvedVariantConfig out;
  out.self_citation = cfg.self_citation;
  out.d4_denominator = cfg.d4_denominator;
  if (cfg.popular.min_citations) {
    out.popular_min_citations = *cfg.popular.min_citations;
    return out;
  }
  const double q = cfg.popular.quantile;
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("popularity quantile must lie in (0, 1]");
  std::vector<std::uint64_t> counts;
  for (NodeIndex p = 0; p < g.size(); ++p) {
    if (g.citation_count(p) > 0) counts.push_back(g.citation_count(p));
  }
  if (counts.empty()) return out;
  std::sort(counts.begin(), counts.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(counts.size())));
  out.popular_min_citations = counts[std::max<std::size_t>(rank, 1) - 1];
  return out;
}

DisruptionScratch::DisruptionScratch(std::size_t paper_count)
    : ref_hits_(paper_count, 0), popular_hits_(paper_count, 0), cites_focal_(paper_count, 0) {}

DisruptionEngine::DisruptionEngine(const CitationGraph& g, WindowSpec w, ResolvedVariantConfig cfg,
                                   bool with_variants)
    : g_(g), w_(w), cfg_(cfg), with_variants_(with_variants) {}

void DisruptionEngine::gather(NodeIndex p, DisruptionScratch& s) const {
  g_.check_index(p);
  const auto& years = g_.data().years;
  const int py = years[p];

  for (NodeIndex c : g_.all_citers(p)) {
    if (w_.admits(py, years[c])) {
      s.focal_citers_.push_back(c);
      s.cites_focal_[c] = 1;
    }
  }

  s.top_.reset();
  s.popular_refs_ = 0;
  for (NodeIndex r : g_.references(p)) {
    const auto citers = g_.all_citers(r);
    const bool popular = citers.size() >= cfg_.popular_min_citations;
    s.popular_refs_ += popular ? 1 : 0;
    std::uint64_t admitted = 0;
    for (NodeIndex c : citers) {
      if (!w_.admits(py, years[c])) continue;
      ++admitted;
      if (c == p) continue;
      if (s.ref_hits_[c]++ == 0) s.touched_.push_back(c);
      if (popular) ++s.popular_hits_[c];
    }
    // References are visited in index order; strict > keeps the smallest id.
    if (!s.top_ || admitted > s.top_->citations) s.top_ = MostCitedReference{r, admitted};
  }
}

void DisruptionEngine::reset(DisruptionScratch& s) const {
  for (NodeIndex c : s.touched_) {
    s.ref_hits_[c] = 0;
    s.popular_hits_[c] = 0;
  }
  for (NodeIndex c : s.focal_citers_) s.cites_focal_[c] = 0;
  s.touched_.clear();
  s.focal_citers_.clear();
}

bool DisruptionEngine::shares_author(std::span<const AuthorIndex> sorted_focal, NodeIndex c) const {
  for (AuthorIndex a : g_.authors(c)) {
    if (std::binary_search(sorted_focal.begin(), sorted_focal.end(), a)) return true;
  }
  return false;
}

DisruptionResult DisruptionEngine::compute(NodeIndex p, DisruptionScratch& s) const {
  gather(p, s);

  DisruptionResult res;
  res.focal = p;
  res.year = g_.year(p);
  res.n_refs = static_cast<std::uint32_t>(g_.reference_count(p));
  res.team_size = static_cast<std::uint32_t>(g_.authors(p).size());

  const auto c_p = static_cast<std::int64_t>(s.focal_citers_.size());
  std::int64_t n_j = 0;
  std::int64_t j_weight = 0;
  std::int64_t k_weight = 0;
  for (NodeIndex c : s.focal_citers_) {
    if (s.ref_hits_[c] > 0) {
      ++n_j;
      j_weight += s.ref_hits_[c];
    }
  }
  const auto n_u = static_cast<std::int64_t>(s.touched_.size());
  res.counts = DisruptionCounts{c_p - n_j, n_j, n_u - n_j};
  res.c_p = static_cast<std::uint64_t>(c_p);

  if (res.n_refs == 0) res.flags |= kNoRefs;
  if (c_p == 0) res.flags |= kNoCiters;
  if (s.top_) {
    res.top_reference = s.top_->reference;
    res.c_max = s.top_->citations;
  }

  const bool defined = (res.flags & (kNoRefs | kNoCiters)) == 0;
  if (c_p > 0) {
    res.d_p = local_displacement(res.counts);
    res.r_k = reference_ratio(res.counts);
    if (s.top_) res.b_p = static_cast<double>(res.c_max) / static_cast<double>(c_p);
  }
  if (defined) res.d0 = disruption_index(res.counts);

  if (with_variants_ && defined) {
    res.d3 = ratio(res.counts.n_i, c_p);

    if (cfg_.d4_denominator == D4Denominator::citers_and_k) {
      for (NodeIndex c : s.touched_) {
        if (!s.cites_focal_[c]) k_weight += s.ref_hits_[c];
      }
    }
    res.d4 = ratio(res.counts.n_i, res.counts.n_i + j_weight + k_weight);

    DisruptionCounts popular{};
    for (NodeIndex c : s.focal_citers_) popular.n_j += s.popular_hits_[c] > 0 ? 1 : 0;
    popular.n_i = c_p - popular.n_j;
    for (NodeIndex c : s.touched_) {
      if (!s.cites_focal_[c] && s.popular_hits_[c] > 0) ++popular.n_k;
    }
    if (s.popular_refs_ == 0) res.flags |= kNoPopularRefs;
    res.d2 = disruption_index(popular);

    const auto focal_authors = g_.authors(p);
    if (cfg_.self_citation == SelfCitationRule::off) {
      res.d1 = res.d0;
    } else if (focal_authors.empty()) {
      res.flags |= kNoAuthorData;
      res.d1 = res.d0;
    } else {
      s.focal_authors_.assign(focal_authors.begin(), focal_authors.end());
      std::sort(s.focal_authors_.begin(), s.focal_authors_.end());
      DisruptionCounts external{};
      for (NodeIndex c : s.focal_citers_) {
        if (shares_author(s.focal_authors_, c)) continue;
        (s.ref_hits_[c] > 0 ? external.n_j : external.n_i) += 1;
      }
      for (NodeIndex c : s.touched_) {
        if (!s.cites_focal_[c] && !shares_author(s.focal_authors_, c)) ++external.n_k;
      }
      // Every citer a self-citation: no citers left, so undefined like D0.
      if (external.n_i + external.n_j > 0) res.d1 = disruption_index(external);
    }
  }

  reset(s);
  return res;
}

CiterClassification DisruptionEngine::classify(NodeIndex p, DisruptionScratch& s) const {
  gather(p, s);
  CiterClassification out;
  out.focal = p;
  out.window = w_;
  for (NodeIndex c : s.focal_citers_) (s.ref_hits_[c] > 0 ? out.set_j : out.set_i).push_back(c);
  for (NodeIndex c : s.touched_) {
    if (!s.cites_focal_[c]) out.set_k.push_back(c);
  }
  std::sort(out.set_k.begin(), out.set_k.end());
  out.counts = DisruptionCounts{static_cast<std::int64_t>(out.set_i.size()),
                                static_cast<std::int64_t>(out.set_j.size()),
                                static_cast<std::int64_t>(out.set_k.size())};
  if (g_.reference_count(p) == 0) out.flags |= kNoRefs;
  if (s.focal_citers_.empty()) out.flags |= kNoCiters;
  reset(s);
  return out;
}

CiterClassification classify_citers(const CitationGraph& g, NodeIndex p, const WindowSpec& w) {
  g.check_index(p);
  DisruptionScratch scratch(g.size());
  return DisruptionEngine(g, w, ResolvedVariantConfig{}, false).classify(p, scratch);
}

std::optional<double> d_index(const CitationGraph& g, NodeIndex p, const WindowSpec& w) {
  g.check_index(p);
  DisruptionScratch scratch(g.size());
  return DisruptionEngine(g, w, ResolvedVariantConfig{}, false).compute(p, scratch).d0;
}

std::optional<Decomposition> decompose(const CitationGraph& g, NodeIndex p, const WindowSpec& w) {
  g.check_index(p);
  DisruptionScratch scratch(g.size());
  const auto r = DisruptionEngine(g, w, ResolvedVariantConfig{}, false).compute(p, scratch);
  if (r.c_p == 0) return std::nullopt;
  Decomposition d;
  d.d_p = *r.d_p;
  d.r_k = *r.r_k;
  d.b_p = r.b_p;
  d.reconstruction = d.d_p / (1.0 + d.r_k);
  d.c_p = r.c_p;
  d.c_max = r.c_max;
  return d;
}

Variants d_variants(const CitationGraph& g, NodeIndex p, const WindowSpec& w,
                    const ResolvedVariantConfig& cfg) {
  g.check_index(p);
  DisruptionScratch scratch(g.size());
  const auto r = DisruptionEngine(g, w, cfg, true).compute(p, scratch);
  return Variants{r.d1, r.d2, r.d3, r.d4, r.flags};
}

void batch_compute(const CitationGraph& g, const WindowSpec& w, const ResolvedVariantConfig& cfg,
                   unsigned workers, const ResultSink& sink, bool with_variants) {
  constexpr std::size_t kChunk = 1 << 16;
  constexpr std::size_t kBlock = 256;

  std::vector<NodeIndex> focal;
  for (NodeIndex p = 0; p < g.size(); ++p) {
    if (g.eligible(p)) focal.push_back(p);
  }
  workers = std::max(1u, workers);
  const DisruptionEngine engine(g, w, cfg, with_variants);
  std::vector<std::unique_ptr<DisruptionScratch>> scratch(workers);
  std::vector<DisruptionResult> chunk;

  for (std::size_t start = 0; start < focal.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, focal.size() - start);
    chunk.assign(len, DisruptionResult{});
    parallel_blocks(len, kBlock, workers, [&](unsigned t, std::size_t b, std::size_t e) {
      if (!scratch[t]) scratch[t] = std::make_unique<DisruptionScratch>(g.size());
      for (std::size_t i = b; i < e; ++i) chunk[i] = engine.compute(focal[start + i], *scratch[t]);
    });
    for (const auto& r : chunk) sink(r);
  }
}

std::vector<DisruptionResult> batch_compute(const CitationGraph& g, const WindowSpec& w,
                                            const ResolvedVariantConfig& cfg, unsigned workers,
                                            bool with_variants) {
  std::vector<DisruptionResult> out;
  batch_compute(g, w, cfg, workers, [&](const DisruptionResult& r) { out.push_back(r); },
                with_variants);
  return out;
}

}  // namespace dxg
