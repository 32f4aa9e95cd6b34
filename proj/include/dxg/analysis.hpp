#pragma once
// Corpus-level studies over disruption results: field overlap with the most
// cited reference, distribution summaries, reference-length independence,
// and the team-size regression with yearly fixed effects.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dxg/disruption.hpp"
#include "dxg/graph.hpp"

namespace dxg {

// ---------------------------------------------------------------- overlap

// Probability that two papers with `fields_per_paper` distinct fields drawn
// uniformly from `taxonomy_size` share at least one:
//   1 - C(T - f, f) / C(T, f)
// evaluated in exact rational arithmetic. Throws InvalidCounts.
double overlap_baseline(std::uint64_t taxonomy_size, std::uint64_t fields_per_paper);

struct OverlapStudySpec {
  std::uint64_t min_citations = 100;  // focal must have more than this
  double min_d = 0.2;                 // focal D0 must exceed this
  std::uint64_t taxonomy_size = kTaxonomySize;
  std::uint64_t fields_per_paper = 2;

  void check() const;
};

struct OverlapResult {
  double rate = 0.0;
  std::size_t n_pairs = 0;
  std::size_t n_overlapping = 0;
  std::size_t n_selected = 0;
  std::size_t n_missing_fields = 0;
  double standard_error = 0.0;
  double baseline = 0.0;
};

bool fields_overlap(std::span<const FieldId> a, std::span<const FieldId> b);

// Over results passing the citation and D thresholds, the fraction whose
// fields intersect those of their most cited reference. Pairs with missing
// field data are skipped and counted. Throws EmptySelection.
OverlapResult overlap_empirical(const CitationGraph& g, const std::vector<DisruptionResult>& results,
                                const OverlapStudySpec& spec);

// ---------------------------------------------------------- distribution

struct SignFractions {
  double negative = 0.0;
  double zero = 0.0;
  double positive = 0.0;
};

struct DistributionSummary {
  std::size_t n = 0;  // results passing the citation threshold
  std::size_t n_d0 = 0;
  std::size_t n_dp = 0;
  std::size_t n_bp = 0;
  std::optional<double> median_d0;
  std::optional<double> median_dp;
  std::optional<double> median_bp;
  SignFractions d0_sign;
  SignFractions dp_sign;
  double bp_below_1 = 0.0;
  double bp_equal_1 = 0.0;
  double bp_above_1 = 0.0;
};

// Throws EmptySelection when no result reaches min_citations.
DistributionSummary distribution_summary(const std::vector<DisruptionResult>& results,
                                         std::uint64_t min_citations = 10);

double median(std::vector<double> values);

// ------------------------------------------- reference-length independence

struct RefLenConfig {
  double d_lo = 0.0;
  double d_hi = 0.05;
  std::vector<double> b_levels{1.0, 10.0, 100.0};
  // A result belongs to level L when |b_p - L| <= b_tolerance * L.
  double b_tolerance = 0.05;
  std::uint64_t min_citations = 10;
  std::uint32_t bucket_width = 5;  // reference-length bucket size
};

struct RefLenBucket {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  std::size_t n = 0;
  double mean_d0 = 0.0;
};

struct RefLenStratum {
  double b_level = 0.0;
  std::size_t n = 0;
  double mean_dp = 0.0;
  double mean_bp = 0.0;
  double theoretical = 0.0;  // mean_dp / (1 + mean_bp)
  double mean_d0 = 0.0;
  std::vector<RefLenBucket> buckets;
  // OLS slope of D0 on reference length; undefined with fewer than two
  // populated buckets.
  std::optional<double> slope;
  std::optional<double> slope_se;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::string flags;  // empty_stratum, single_bucket
};

std::vector<RefLenStratum> reference_length_independence(const std::vector<DisruptionResult>& results,
                                                         const RefLenConfig& cfg = {});

// ------------------------------------------------------------ regression

struct RegressionSpec {
  double k_min = 1, k_max = 10;
  double r_min = 5, r_max = 50;
  double c_min = 10, c_max = 1000;
  bool robust_se = false;  // HC1 instead of classical
};

struct RegressionRow {
  double d0 = 0.0;
  double k = 0.0;  // team size
  double r = 0.0;  // reference count
  double c = 0.0;  // citation count
  int year = 0;
};

std::vector<RegressionRow> regression_rows(const std::vector<DisruptionResult>& results);

struct RegressionFit {
  double b0 = 0.0, b_k = 0.0, b_r = 0.0, b_c = 0.0;
  std::array<double, 4> se{};  // b0, b_k, b_r, b_c
  std::map<int, double> year_effects;  // reference year maps to 0
  int dropped_year = 0;
  std::size_t n = 0;
  std::size_t excluded = 0;
  double r2 = 0.0;
  double sigma = 0.0;
  double mean_k = 0.0;
  bool robust_se = false;
  // Full coefficient vector in design-column order:
  // [const, ln k, ln r, ln c, year dummies ascending without dropped year].
  std::vector<double> coefficients;
};

// Design matrix used by ols_fit, row-major with `cols` columns, after
// applying the sample bounds.
struct Design {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<int> years;
  std::vector<int> levels;  // distinct years ascending; levels[0] is dropped
  std::size_t excluded = 0;
};

Design build_design(const std::vector<RegressionRow>& rows, const RegressionSpec& spec);

// OLS through normal equations. Cross-products are accumulated over fixed
// row partitions and summed in partition order, so results do not depend on
// `workers`. Throws InsufficientData, RankDeficient.
RegressionFit ols_fit(const std::vector<RegressionRow>& rows, const RegressionSpec& spec, unsigned workers = 1);

// Slopes (b_k, b_r, b_c) from within-year demeaning; equals the
// dummy-variable slopes.
std::array<double, 3> ols_slopes_demeaned(const std::vector<RegressionRow>& rows, const RegressionSpec& spec);

// dD/dk = b_k / k for the log-linear model. Throws InvalidArgument when k <= 0.
double marginal_effect_team_size(const RegressionFit& fit, double at_k);
inline double marginal_effect_team_size(const RegressionFit& fit) {
  return marginal_effect_team_size(fit, fit.mean_k);
}

std::string regression_json(const RegressionFit& fit);
std::string regression_tsv(const RegressionFit& fit);

// ---------------------------------------------------------- window sweep

struct Cohort {
  int year = 0;
  WindowSpec window;
};

// Cohort years and windows of the original sweep (citations through 2020).
std::vector<Cohort> default_cohorts();
std::vector<Cohort> parse_cohorts(std::string_view text);  // "2019:1,2017:3,..."

struct SweepRow {
  Cohort cohort;
  std::size_t n = 0;
  std::optional<double> b_k;
  std::optional<double> se;
  std::optional<double> marginal_effect;  // at the cohort's mean team size
  std::string error;
};

// For each cohort, recompute D0 for eligible papers of that year under the
// cohort window and fit the regression. Per-cohort failures are recorded in
// the row and the sweep continues.
std::vector<SweepRow> window_sweep(const CitationGraph& g, const std::vector<Cohort>& cohorts,
                                   const RegressionSpec& spec, unsigned workers = 1);

// ------------------------------------------------------------ TSV output

std::string overlap_tsv(const OverlapResult& r);
std::string distribution_tsv(const DistributionSummary& s);
std::string reflen_tsv(const std::vector<RefLenStratum>& strata);
std::string sweep_tsv(const std::vector<SweepRow>& rows);

}  // namespace dxg
