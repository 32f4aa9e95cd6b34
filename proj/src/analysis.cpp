#include "dxg/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "dxg/error.hpp"
#include "dxg/parallel.hpp"
#include "dxg/results_io.hpp"

namespace dxg {

// ---------------------------------------------------------------- overlap

namespace {

boost::multiprecision::cpp_int binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  boost::multiprecision::cpp_int out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

}  // namespace

double overlap_baseline(std::uint64_t taxonomy_size, std::uint64_t fields_per_paper) {
  if (fields_per_paper == 0 || taxonomy_size < fields_per_paper) {
    throw InvalidCounts("need taxonomy_size >= fields_per_paper >= 1");
  }
  using boost::multiprecision::cpp_rational;
  const cpp_rational disjoint(binomial(taxonomy_size - fields_per_paper, fields_per_paper),
                              binomial(taxonomy_size, fields_per_paper));
  const cpp_rational p = cpp_rational(1) - disjoint;
  return p.convert_to<double>();
}

void OverlapStudySpec::check() const {
  if (!(min_d > -1.0 && min_d <= 1.0)) throw InvalidArgument("min_D must lie in (-1, 1]");
  if (fields_per_paper < 1 || taxonomy_size < fields_per_paper) {
    throw InvalidArgument("need taxonomy_size >= fields_per_paper >= 1");
  }
}

bool fields_overlap(std::span<const FieldId> a, std::span<const FieldId> b) {
  for (FieldId x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

OverlapResult overlap_empirical(const CitationGraph& g, const std::vector<DisruptionResult>& results,
                                const OverlapStudySpec& spec) {
  spec.check();
  OverlapResult out;
  for (const auto& r : results) {
    if (!r.d0 || r.c_p <= spec.min_citations || !(*r.d0 > spec.min_d) || !r.top_reference) continue;
    ++out.n_selected;
    const auto focal = g.fields(r.focal);
    const auto top = g.fields(*r.top_reference);
    if (focal.empty() || top.empty()) {
      ++out.n_missing_fields;
      continue;
    }
    ++out.n_pairs;
    out.n_overlapping += fields_overlap(focal, top) ? 1 : 0;
  }
  if (out.n_pairs == 0) throw EmptySelection("no focal/reference pairs pass the overlap thresholds");
  out.rate = static_cast<double>(out.n_overlapping) / static_cast<double>(out.n_pairs);
  out.standard_error = std::sqrt(out.rate * (1.0 - out.rate) / static_cast<double>(out.n_pairs));
  out.baseline = overlap_baseline(spec.taxonomy_size, spec.fields_per_paper);
  return out;
}

// ---------------------------------------------------------- distribution

double median(std::vector<double> v) {
  if (v.empty()) throw EmptySelection("median of empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

namespace {

SignFractions signs(const std::vector<double>& v) {
  SignFractions f;
  if (v.empty()) return f;
  for (double x : v) (x < 0 ? f.negative : x > 0 ? f.positive : f.zero) += 1.0;
  const auto n = static_cast<double>(v.size());
  f.negative /= n;
  f.zero /= n;
  f.positive /= n;
  return f;
}

}  // namespace

DistributionSummary distribution_summary(const std::vector<DisruptionResult>& results,
                                         std::uint64_t min_citations) {
  DistributionSummary s;
  std::vector<double> d0, dp, bp;
  for (const auto& r : results) {
    if (r.c_p < min_citations) continue;
    ++s.n;
    if (r.d0) d0.push_back(*r.d0);
    if (r.d_p) dp.push_back(*r.d_p);
    if (r.b_p) bp.push_back(*r.b_p);
  }
  if (s.n == 0) throw EmptySelection("no results reach the citation threshold");
  s.n_d0 = d0.size();
  s.n_dp = dp.size();
  s.n_bp = bp.size();
  if (!d0.empty()) s.median_d0 = median(d0);
  if (!dp.empty()) s.median_dp = median(dp);
  if (!bp.empty()) s.median_bp = median(bp);
  s.d0_sign = signs(d0);
  s.dp_sign = signs(dp);
  if (!bp.empty()) {
    for (double b : bp) (b < 1.0 ? s.bp_below_1 : b > 1.0 ? s.bp_above_1 : s.bp_equal_1) += 1.0;
    const auto n = static_cast<double>(bp.size());
    s.bp_below_1 /= n;
    s.bp_equal_1 /= n;
    s.bp_above_1 /= n;
  }
  return s;
}

// ------------------------------------------- reference-length independence

std::vector<RefLenStratum> reference_length_independence(const std::vector<DisruptionResult>& results,
                                                         const RefLenConfig& cfg) {
  if (cfg.bucket_width == 0) throw InvalidArgument("bucket width must be positive");
  std::vector<RefLenStratum> out;
  for (double level : cfg.b_levels) {
    RefLenStratum st;
    st.b_level = level;
    std::vector<const DisruptionResult*> members;
    for (const auto& r : results) {
      if (!r.d0 || !r.d_p || !r.b_p || r.c_p < cfg.min_citations) continue;
      if (*r.d_p < cfg.d_lo || *r.d_p > cfg.d_hi) continue;
      if (std::abs(*r.b_p - level) > cfg.b_tolerance * level) continue;
      members.push_back(&r);
    }
    st.n = members.size();
    if (members.empty()) {
      st.flags = "empty_stratum";
      out.push_back(std::move(st));
      continue;
    }
    const auto n = static_cast<double>(st.n);
    double mean_x = 0.0;
    std::map<std::uint32_t, RefLenBucket> buckets;
    for (const auto* r : members) {
      st.mean_dp += *r->d_p;
      st.mean_bp += *r->b_p;
      st.mean_d0 += *r->d0;
      mean_x += r->n_refs;
      const std::uint32_t key = r->n_refs == 0 ? 0 : (r->n_refs - 1) / cfg.bucket_width;
      auto& b = buckets[key];
      b.lo = key * cfg.bucket_width + 1;
      b.hi = (key + 1) * cfg.bucket_width;
      ++b.n;
      b.mean_d0 += *r->d0;
    }
    st.mean_dp /= n;
    st.mean_bp /= n;
    st.mean_d0 /= n;
    mean_x /= n;
    st.theoretical = st.mean_dp / (1.0 + st.mean_bp);
    for (auto& [key, b] : buckets) {
      b.mean_d0 /= static_cast<double>(b.n);
      st.buckets.push_back(b);
    }
    if (buckets.size() < 2) {
      st.flags = "single_bucket";
      out.push_back(std::move(st));
      continue;
    }
    double sxx = 0.0, sxy = 0.0;
    for (const auto* r : members) {
      const double dx = r->n_refs - mean_x;
      sxx += dx * dx;
      sxy += dx * (*r->d0 - st.mean_d0);
    }
    const double slope = sxy / sxx;
    st.slope = slope;
    if (st.n > 2) {
      double rss = 0.0;
      for (const auto* r : members) {
        const double e = *r->d0 - st.mean_d0 - slope * (r->n_refs - mean_x);
        rss += e * e;
      }
      const double se = std::sqrt(rss / (n - 2.0) / sxx);
      st.slope_se = se;
      st.ci_lo = slope - 1.96 * se;
      st.ci_hi = slope + 1.96 * se;
    }
    out.push_back(std::move(st));
  }
  return out;
}

// ------------------------------------------------------------ regression

std::vector<RegressionRow> regression_rows(const std::vector<DisruptionResult>& results) {
  std::vector<RegressionRow> rows;
  for (const auto& r : results) {
    if (!r.d0) continue;
    rows.push_back({*r.d0, static_cast<double>(r.team_size), static_cast<double>(r.n_refs),
                    static_cast<double>(r.c_p), r.year});
  }
  return rows;
}

namespace {

bool in_bounds(const RegressionRow& r, const RegressionSpec& s) {
  return r.k >= s.k_min && r.k <= s.k_max && r.r >= s.r_min && r.r <= s.r_max && r.c >= s.c_min &&
         r.c <= s.c_max && r.k > 0 && r.r > 0 && r.c > 0;
}

constexpr std::size_t kPartition = 4096;

}  // namespace

Design build_design(const std::vector<RegressionRow>& rows, const RegressionSpec& spec) {
  Design d;
  std::vector<const RegressionRow*> kept;
  for (const auto& r : rows) {
    if (in_bounds(r, spec)) {
      kept.push_back(&r);
    } else {
      ++d.excluded;
    }
  }
  for (const auto* r : kept) d.levels.push_back(r->year);
  std::sort(d.levels.begin(), d.levels.end());
  d.levels.erase(std::unique(d.levels.begin(), d.levels.end()), d.levels.end());
  d.rows = kept.size();
  d.cols = 4 + (d.levels.empty() ? 0 : d.levels.size() - 1);
  d.x.assign(d.rows * d.cols, 0.0);
  d.y.reserve(d.rows);
  d.years.reserve(d.rows);
  for (std::size_t i = 0; i < d.rows; ++i) {
    const auto& r = *kept[i];
    double* row = &d.x[i * d.cols];
    row[0] = 1.0;
    row[1] = std::log(r.k);
    row[2] = std::log(r.r);
    row[3] = std::log(r.c);
    const auto lvl = static_cast<std::size_t>(std::lower_bound(d.levels.begin(), d.levels.end(), r.year) -
                                              d.levels.begin());
    if (lvl > 0) row[3 + lvl] = 1.0;
    d.y.push_back(r.d0);
    d.years.push_back(r.year);
  }
  return d;
}

RegressionFit ols_fit(const std::vector<RegressionRow>& rows, const RegressionSpec& spec, unsigned workers) {
  Design d = build_design(rows, spec);
  const std::size_t n = d.rows;
  const std::size_t p = d.cols;
  if (n <= p) throw InsufficientData("regression needs more rows than parameters");

  // Center the three log predictors; the intercept is mapped back afterwards.
  std::array<double, 3> means{};
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) means[j] += d.x[i * p + 1 + j];
  }
  for (auto& m : means) m /= static_cast<double>(n);
  std::vector<double> xc = d.x;
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) xc[i * p + 1 + j] -= means[j];
  }

  const std::size_t parts = (n + kPartition - 1) / kPartition;
  std::vector<Eigen::MatrixXd> xtx(parts, Eigen::MatrixXd::Zero(p, p));
  std::vector<Eigen::VectorXd> xty(parts, Eigen::VectorXd::Zero(p));
  parallel_blocks(n, kPartition, workers, [&](unsigned, std::size_t b, std::size_t e) {
    const std::size_t part = b / kPartition;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
        xc.data() + b * p, static_cast<Eigen::Index>(e - b), static_cast<Eigen::Index>(p));
    Eigen::Map<const Eigen::VectorXd> y(d.y.data() + b, static_cast<Eigen::Index>(e - b));
    xtx[part].noalias() = x.transpose() * x;
    xty[part].noalias() = x.transpose() * y;
  });
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
  for (std::size_t i = 0; i < parts; ++i) {
    a += xtx[i];
    rhs += xty[i];
  }

  // Jacobi scaling makes the rank threshold independent of column units.
  Eigen::VectorXd scale(p);
  for (std::size_t j = 0; j < p; ++j) {
    if (!(a(j, j) > 0.0)) throw RankDeficient("design column " + std::to_string(j) + " is all zero");
    scale(j) = 1.0 / std::sqrt(a(j, j));
  }
  const Eigen::MatrixXd as = scale.asDiagonal() * a * scale.asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(as);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p)) throw RankDeficient("design matrix is rank deficient");
  const Eigen::VectorXd beta_c = scale.asDiagonal() * qr.solve(scale.asDiagonal() * rhs);
  const Eigen::MatrixXd inv = scale.asDiagonal() * qr.inverse() * scale.asDiagonal();

  std::vector<double> resid(n);
  double rss = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) y_mean += d.y[i];
  y_mean /= static_cast<double>(n);
  double tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = 0.0;
    for (std::size_t j = 0; j < p; ++j) fit += xc[i * p + j] * beta_c(static_cast<Eigen::Index>(j));
    resid[i] = d.y[i] - fit;
    rss += resid[i] * resid[i];
    tss += (d.y[i] - y_mean) * (d.y[i] - y_mean);
  }
  const double dof = static_cast<double>(n - p);

  Eigen::MatrixXd cov;
  if (spec.robust_se) {
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::Map<const Eigen::VectorXd> xi(xc.data() + i * p, static_cast<Eigen::Index>(p));
      meat.noalias() += resid[i] * resid[i] * xi * xi.transpose();
    }
    cov = inv * meat * inv * (static_cast<double>(n) / dof);
  } else {
    cov = inv * (rss / dof);
  }

  // Undo centering: b0 = b0c - sum_j b_j mean_j, i.e. beta = T beta_c.
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(p, p);
  for (int j = 0; j < 3; ++j) t(0, 1 + j) = -means[j];
  const Eigen::VectorXd beta = t * beta_c;
  const Eigen::MatrixXd cov_b = t * cov * t.transpose();

  RegressionFit fit;
  fit.coefficients.assign(beta.data(), beta.data() + p);
  fit.b0 = beta(0);
  fit.b_k = beta(1);
  fit.b_r = beta(2);
  fit.b_c = beta(3);
  for (int j = 0; j < 4; ++j) fit.se[j] = std::sqrt(std::max(0.0, cov_b(j, j)));
  fit.dropped_year = d.levels.front();
  fit.year_effects[d.levels.front()] = 0.0;
  for (std::size_t l = 1; l < d.levels.size(); ++l) fit.year_effects[d.levels[l]] = beta(static_cast<Eigen::Index>(3 + l));
  fit.n = n;
  fit.excluded = d.excluded;
  fit.r2 = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  fit.sigma = std::sqrt(rss / dof);
  fit.mean_k = 0.0;
  for (std::size_t i = 0; i < n; ++i) fit.mean_k += std::exp(d.x[i * p + 1]);
  fit.mean_k /= static_cast<double>(n);
  fit.robust_se = spec.robust_se;
  return fit;
}

std::array<double, 3> ols_slopes_demeaned(const std::vector<RegressionRow>& rows, const RegressionSpec& spec) {
  const Design d = build_design(rows, spec);
  const std::size_t p = d.cols;
  struct Acc {
    std::array<double, 4> sum{};
    std::size_t n = 0;
  };
  std::map<int, Acc> groups;
  for (std::size_t i = 0; i < d.rows; ++i) {
    auto& g = groups[d.years[i]];
    for (int j = 0; j < 3; ++j) g.sum[j] += d.x[i * p + 1 + j];
    g.sum[3] += d.y[i];
    ++g.n;
  }
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < d.rows; ++i) {
    const auto& g = groups[d.years[i]];
    const double n = static_cast<double>(g.n);
    Eigen::Vector3d x;
    for (int j = 0; j < 3; ++j) x(j) = d.x[i * p + 1 + j] - g.sum[j] / n;
    const double y = d.y[i] - g.sum[3] / n;
    a.noalias() += x * x.transpose();
    rhs += x * y;
  }
  Eigen::ColPivHouseholderQR<Eigen::Matrix3d> qr(a);
  if (qr.rank() < 3) throw RankDeficient("demeaned design is rank deficient");
  const Eigen::Vector3d b = qr.solve(rhs);
  return {b(0), b(1), b(2)};
}

double marginal_effect_team_size(const RegressionFit& fit, double at_k) {
  if (!(at_k > 0.0)) throw InvalidArgument("team size must be positive");
  return fit.b_k / at_k;
}

std::string regression_json(const RegressionFit& fit) {
  nlohmann::json years = nlohmann::json::object();
  for (const auto& [y, e] : fit.year_effects) years[std::to_string(y)] = e;
  nlohmann::json j = {
      {"coefficients", {{"b0", fit.b0}, {"b_k", fit.b_k}, {"b_r", fit.b_r}, {"b_c", fit.b_c}}},
      {"se", {{"b0", fit.se[0]}, {"b_k", fit.se[1]}, {"b_r", fit.se[2]}, {"b_c", fit.se[3]}}},
      {"se_type", fit.robust_se ? "HC1" : "classical"},
      {"n", fit.n},
      {"excluded", fit.excluded},
      {"r2", fit.r2},
      {"sigma", fit.sigma},
      {"dropped_year", fit.dropped_year},
      {"year_effects", years},
      {"mean_k", fit.mean_k},
      {"marginal_effect_k_at_mean", marginal_effect_team_size(fit)},
  };
  return j.dump(2) + "\n";
}

std::string regression_tsv(const RegressionFit& fit) {
  std::string s = "term\testimate\tse\n";
  const char* names[] = {"b0", "b_k", "b_r", "b_c"};
  const double est[] = {fit.b0, fit.b_k, fit.b_r, fit.b_c};
  for (int i = 0; i < 4; ++i) s += std::string(names[i]) + '\t' + format_double(est[i]) + '\t' + format_double(fit.se[i]) + '\n';
  for (const auto& [y, e] : fit.year_effects) s += "year_" + std::to_string(y) + '\t' + format_double(e) + "\tNA\n";
  return s;
}

// ---------------------------------------------------------- window sweep

std::vector<Cohort> default_cohorts() {
  return {{2019, WindowSpec::of_years(1)},  {2017, WindowSpec::of_years(3)},
          {2015, WindowSpec::of_years(5)},  {2010, WindowSpec::of_years(10)},
          {2000, WindowSpec::of_years(20)}, {1995, WindowSpec::of_years(25)}};
}

std::vector<Cohort> parse_cohorts(std::string_view text) {
  std::vector<Cohort> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw InvalidArgument("cohort must be year:window");
    int year = 0;
    const auto ys = item.substr(0, colon);
    auto [ptr, ec] = std::from_chars(ys.data(), ys.data() + ys.size(), year);
    if (ec != std::errc() || ptr != ys.data() + ys.size()) throw InvalidArgument("bad cohort year");
    out.push_back({year, WindowSpec::parse(item.substr(colon + 1))});
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<SweepRow> window_sweep(const CitationGraph& g, const std::vector<Cohort>& cohorts,
                                   const RegressionSpec& spec, unsigned workers) {
  std::vector<SweepRow> out;
  workers = std::max(1u, workers);
  std::vector<std::unique_ptr<DisruptionScratch>> scratch(workers);
  for (const auto& cohort : cohorts) {
    SweepRow row;
    row.cohort = cohort;
    std::vector<NodeIndex> papers;
    for (NodeIndex p = 0; p < g.size(); ++p) {
      if (g.eligible(p) && g.year(p) == cohort.year) papers.push_back(p);
    }
    try {
      if (papers.empty()) throw EmptySelection("no eligible papers in cohort year");
      const DisruptionEngine engine(g, cohort.window, ResolvedVariantConfig{}, false);
      std::vector<DisruptionResult> results(papers.size());
      parallel_blocks(papers.size(), 256, workers, [&](unsigned t, std::size_t b, std::size_t e) {
        if (!scratch[t]) scratch[t] = std::make_unique<DisruptionScratch>(g.size());
        for (std::size_t i = b; i < e; ++i) results[i] = engine.compute(papers[i], *scratch[t]);
      });
      const auto fit = ols_fit(regression_rows(results), spec, workers);
      row.n = fit.n;
      row.b_k = fit.b_k;
      row.se = fit.se[1];
      row.marginal_effect = marginal_effect_team_size(fit);
    } catch (const Error& e) {
      row.error = e.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

// ------------------------------------------------------------ TSV output

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

}  // namespace

std::string overlap_tsv(const OverlapResult& r) {
  return "rate\tn_pairs\tn_overlapping\tn_selected\tn_missing_fields\tstandard_error\tbaseline\tratio_to_baseline\n" +
         format_double(r.rate) + '\t' + std::to_string(r.n_pairs) + '\t' + std::to_string(r.n_overlapping) + '\t' +
         std::to_string(r.n_selected) + '\t' + std::to_string(r.n_missing_fields) + '\t' +
         format_double(r.standard_error) + '\t' + format_double(r.baseline) + '\t' +
         format_double(r.rate / r.baseline) + '\n';
}

std::string distribution_tsv(const DistributionSummary& s) {
  std::string out = "statistic\tvalue\n";
  const auto line = [&](const char* k, const std::string& v) { out += std::string(k) + '\t' + v + '\n'; };
  line("n", std::to_string(s.n));
  line("n_d0", std::to_string(s.n_d0));
  line("n_dp", std::to_string(s.n_dp));
  line("n_bp", std::to_string(s.n_bp));
  line("median_d0", opt(s.median_d0));
  line("median_dp", opt(s.median_dp));
  line("median_bp", opt(s.median_bp));
  line("d0_negative", format_double(s.d0_sign.negative));
  line("d0_zero", format_double(s.d0_sign.zero));
  line("d0_positive", format_double(s.d0_sign.positive));
  line("dp_negative", format_double(s.dp_sign.negative));
  line("dp_zero", format_double(s.dp_sign.zero));
  line("dp_positive", format_double(s.dp_sign.positive));
  line("bp_below_1", format_double(s.bp_below_1));
  line("bp_equal_1", format_double(s.bp_equal_1));
  line("bp_above_1", format_double(s.bp_above_1));
  if (s.median_dp && s.median_bp) {
    line("characteristic_d", format_double(*s.median_dp / (1.0 + *s.median_bp)));
  }
  return out;
}

std::string reflen_tsv(const std::vector<RefLenStratum>& strata) {
  std::string s =
      "b_level\tbucket_lo\tbucket_hi\tn\tmean_d0\ttheoretical\tstratum_n\tmean_dp\tmean_bp\tslope\tslope_se\tci_lo\tci_hi\tflags\n";
  for (const auto& st : strata) {
    const std::string tail = '\t' + std::to_string(st.n) + '\t' + format_double(st.mean_dp) + '\t' +
                             format_double(st.mean_bp) + '\t' + opt(st.slope) + '\t' + opt(st.slope_se) + '\t' +
                             opt(st.ci_lo) + '\t' + opt(st.ci_hi) + '\t' + st.flags + '\n';
    if (st.buckets.empty()) {
      s += format_double(st.b_level) + "\tNA\tNA\t0\tNA\tNA" + tail;
    }
    for (const auto& b : st.buckets) {
      s += format_double(st.b_level) + '\t' + std::to_string(b.lo) + '\t' + std::to_string(b.hi) + '\t' +
           std::to_string(b.n) + '\t' + format_double(b.mean_d0) + '\t' + format_double(st.theoretical) + tail;
    }
  }
  return s;
}

std::string sweep_tsv(const std::vector<SweepRow>& rows) {
  std::string s = "cohort_year\twindow\tn\tb_k\tse\tmarginal_effect\terror\n";
  for (const auto& r : rows) {
    s += std::to_string(r.cohort.year) + '\t' + r.cohort.window.to_string() + '\t' + std::to_string(r.n) + '\t' +
         opt(r.b_k) + '\t' + opt(r.se) + '\t' + opt(r.marginal_effect) + '\t' + r.error + '\n';
  }
  return s;
}

}  // namespace dxg
