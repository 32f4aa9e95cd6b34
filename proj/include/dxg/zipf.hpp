#pragma once
// Zipf's law for the citation counts of a paper's references.
//
// Model: C_r = c / (b + r)^a for decreasing rank r = 1..N. The fit minimizes
//   sum_r (log(C_r + s) - log c + a log(b + r))^2
// with smoothing offset s (default 1). For fixed (a, b) the optimal log c is
// the mean residual, so the search runs over (a, b) only: a coarse grid
// followed by a golden-section search on b with a profiled out exactly.
//
// The closed form C_max / C_total ~ (a - 1) / (1 + b) drops the
// (b + N)^(1 - a) tail and the sum-to-integral error; totals here are always
// exact sums.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dxg/graph.hpp"

namespace dxg {

struct RankSeries {
  NodeIndex focal = 0;
  std::vector<double> citations_by_rank;  // non-increasing

  std::size_t size() const { return citations_by_rank.size(); }
};

// Citation counts of p's references (window anchored at p's year), sorted
// descending, zero counts kept. Throws UnknownPaper, InsufficientData when p
// has no references.
RankSeries rank_series(const CitationGraph& g, NodeIndex p, const WindowSpec& w);

// Noiseless c / (b + r)^a for r = 1..n.
RankSeries zipf_series(double a, double b, double c, std::size_t n);

struct ZipfConfig {
  double smoothing = 1.0;
  double a_min = 0.1;
  double a_max = 5.0;
  double a_step = 0.05;
  double b_min = 0.0;
  double b_max = 20.0;
  double b_step = 0.1;
  // Refinement stops once the bracket on b is narrower than this.
  double tolerance = 1e-6;
  int max_iterations = 20000;
  // Lower bound for `a` during refinement; flat series drift toward it.
  double a_floor = 0.0;
  // Fits with a at or below this are flagged as non-Zipf (flat).
  double flat_exponent = 0.1;
};

struct ZipfFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double sse = 0.0;
  std::size_t n_points = 0;
  bool converged = true;
  bool non_zipf = false;
};

// Throws InsufficientData when fewer than three counts are positive.
ZipfFit fit_zipf(const RankSeries& series, const ZipfConfig& cfg = {});

// Objective value at (a, b) with the profiled optimal scale.
double zipf_sse(const RankSeries& series, double a, double b, double smoothing, double* log_c = nullptr);

// C_max / C_total. Throws ZeroTotal.
double cmax_ratio_empirical(const RankSeries& series);
// (a - 1) / (1 + b). Throws ExponentTooSmall when a <= 1.
double cmax_ratio_theoretical(double a, double b);
inline double cmax_ratio_theoretical(const ZipfFit& fit) { return cmax_ratio_theoretical(fit.a, fit.b); }

struct ZipfSurveyRow {
  NodeIndex paper = 0;
  std::size_t n_refs = 0;
  std::optional<ZipfFit> fit;
  std::optional<double> ratio_empirical;
  std::optional<double> ratio_theoretical;
  std::string flags;  // comma-joined: insufficient_data, zero_total, exponent_le_1, ...
};

struct ZipfSurveySummary {
  std::size_t papers = 0;
  std::size_t fitted = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double fraction_a_above_1 = 0.0;
  double mean_ratio_empirical = 0.0;
  double mean_ratio_theoretical = 0.0;
  double mean_n_refs = 0.0;
  std::optional<ZipfFit> pooled;  // fit to the per-rank mean of the raw series
};

struct ZipfSurvey {
  std::vector<ZipfSurveyRow> rows;
  ZipfSurveySummary summary;
};

ZipfSurvey zipf_survey(const CitationGraph& g, const std::vector<NodeIndex>& sample, const WindowSpec& w,
                       const ZipfConfig& cfg = {}, unsigned workers = 1);
// Same aggregation over already-built series.
ZipfSurvey zipf_survey(const std::vector<RankSeries>& series, const ZipfConfig& cfg = {}, unsigned workers = 1);

std::string zipf_survey_tsv(const CitationGraph* g, const ZipfSurvey& survey);
std::string zipf_summary_tsv(const ZipfSurveySummary& s);

}  // namespace dxg
