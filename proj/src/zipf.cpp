#include "dxg/zipf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dxg/error.hpp"
#include "dxg/parallel.hpp"
#include "dxg/results_io.hpp"

namespace dxg {
namespace {

// Centered sufficient statistics of y = log(C + s) against L = log(b + r).
// For fixed b, sse(a) = syy + 2 a syl + a^2 sll.
struct Moments {
  double syy = 0.0;
  double syl = 0.0;
  double sll = 0.0;
  double y_mean = 0.0;
  double l_mean = 0.0;
};

struct Points {
  std::vector<double> rank;
  std::vector<double> y;
};

Points make_points(const RankSeries& s, double smoothing) {
  Points pts;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.citations_by_rank[i] + smoothing;
    if (v <= 0.0) continue;  // log undefined without smoothing
    pts.rank.push_back(static_cast<double>(i + 1));
    pts.y.push_back(std::log(v));
  }
  return pts;
}

Moments moments(const Points& pts, double b) {
  const std::size_t n = pts.y.size();
  Moments m;
  std::vector<double> l(n);
  for (std::size_t i = 0; i < n; ++i) {
    l[i] = std::log(b + pts.rank[i]);
    m.y_mean += pts.y[i];
    m.l_mean += l[i];
  }
  m.y_mean /= static_cast<double>(n);
  m.l_mean /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dy = pts.y[i] - m.y_mean;
    const double dl = l[i] - m.l_mean;
    m.syy += dy * dy;
    m.syl += dy * dl;
    m.sll += dl * dl;
  }
  return m;
}

double sse_at(const Moments& m, double a) {
  return std::max(0.0, m.syy + 2.0 * a * m.syl + a * a * m.sll);
}

double best_a(const Moments& m, double lo, double hi) {
  if (m.sll <= 0.0) return lo;
  return std::clamp(-m.syl / m.sll, lo, hi);
}

}  // namespace

RankSeries rank_series(const CitationGraph& g, NodeIndex p, const WindowSpec& w) {
  g.check_index(p);
  const auto refs = g.references(p);
  if (refs.empty()) throw InsufficientData("paper " + g.id(p) + " has no references");
  RankSeries s;
  s.focal = p;
  s.citations_by_rank.reserve(refs.size());
  const int y = g.year(p);
  for (NodeIndex r : refs) s.citations_by_rank.push_back(static_cast<double>(g.count_citers(r, y, w)));
  std::sort(s.citations_by_rank.begin(), s.citations_by_rank.end(), std::greater<>());
  return s;
}

RankSeries zipf_series(double a, double b, double c, std::size_t n) {
  RankSeries s;
  for (std::size_t r = 1; r <= n; ++r) s.citations_by_rank.push_back(c / std::pow(b + static_cast<double>(r), a));
  return s;
}

double zipf_sse(const RankSeries& series, double a, double b, double smoothing, double* log_c) {
  const Points pts = make_points(series, smoothing);
  if (pts.y.empty()) throw InsufficientData("empty series");
  double sse = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < pts.y.size(); ++i) mean += pts.y[i] + a * std::log(b + pts.rank[i]);
  mean /= static_cast<double>(pts.y.size());
  for (std::size_t i = 0; i < pts.y.size(); ++i) {
    const double e = pts.y[i] + a * std::log(b + pts.rank[i]) - mean;
    sse += e * e;
  }
  if (log_c) *log_c = mean;
  return sse;
}

ZipfFit fit_zipf(const RankSeries& series, const ZipfConfig& cfg) {
  const auto positive = std::count_if(series.citations_by_rank.begin(), series.citations_by_rank.end(),
                                      [](double v) { return v > 0.0; });
  if (positive < 3) throw InsufficientData("Zipf fit needs at least 3 positive counts");
  const Points pts = make_points(series, cfg.smoothing);

  const auto a_steps = static_cast<int>(std::floor((cfg.a_max - cfg.a_min) / cfg.a_step + 1e-9));
  const auto b_steps = static_cast<int>(std::floor((cfg.b_max - cfg.b_min) / cfg.b_step + 1e-9));

  double best_sse = std::numeric_limits<double>::infinity();
  double best_b = cfg.b_min;
  for (int j = 0; j <= b_steps; ++j) {
    const double b = cfg.b_min + j * cfg.b_step;
    const Moments m = moments(pts, b);
    for (int i = 0; i <= a_steps; ++i) {
      const double a = cfg.a_min + i * cfg.a_step;
      const double sse = sse_at(m, a);
      if (sse < best_sse) {
        best_sse = sse;
        best_b = b;
      }
    }
  }

  // The objective is quadratic in a, so the refinement profiles a out exactly
  // and runs a golden-section search on b around the best grid cell.
  const double a_lo = std::min(cfg.a_floor, cfg.a_min);
  const auto profiled = [&](double b) {
    const Moments m = moments(pts, b);
    return sse_at(m, best_a(m, a_lo, cfg.a_max));
  };
  double lo = std::max(cfg.b_min, best_b - cfg.b_step);
  double hi = std::min(cfg.b_max, best_b + cfg.b_step);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = profiled(x1);
  double f2 = profiled(x2);
  int iter = 0;
  for (; hi - lo > cfg.tolerance && iter < cfg.max_iterations; ++iter) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = profiled(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = profiled(x2);
    }
  }

  ZipfFit fit;
  fit.converged = hi - lo <= cfg.tolerance;
  double b = 0.5 * (lo + hi);
  // Never return worse than the grid optimum.
  if (profiled(b) > profiled(best_b)) b = best_b;
  const Moments m = moments(pts, b);
  fit.a = best_a(m, a_lo, cfg.a_max);
  fit.b = b;
  fit.sse = sse_at(m, fit.a);
  fit.c = std::exp(m.y_mean + fit.a * m.l_mean);
  fit.n_points = pts.y.size();
  fit.non_zipf = fit.a <= cfg.flat_exponent;
  return fit;
}

double cmax_ratio_empirical(const RankSeries& series) {
  double total = 0.0;
  for (double v : series.citations_by_rank) total += v;
  if (!(total > 0.0)) throw ZeroTotal("reference citations sum to zero");
  return series.citations_by_rank.front() / total;
}

double cmax_ratio_theoretical(double a, double b) {
  if (!(a > 1.0)) throw ExponentTooSmall("closed form needs a > 1");
  return (a - 1.0) / (1.0 + b);
}

namespace {

void evaluate_row(const RankSeries& s, const ZipfConfig& cfg, ZipfSurveyRow& row) {
  row.paper = s.focal;
  row.n_refs = s.size();
  std::string& flags = row.flags;
  const auto flag = [&](const char* f) {
    if (!flags.empty()) flags += ',';
    flags += f;
  };
  try {
    row.ratio_empirical = cmax_ratio_empirical(s);
  } catch (const ZeroTotal&) {
    flag("zero_total");
  }
  try {
    row.fit = fit_zipf(s, cfg);
    if (!row.fit->converged) flag("non_convergence");
    if (row.fit->non_zipf) flag("non_zipf");
    if (row.fit->a > 1.0) {
      row.ratio_theoretical = cmax_ratio_theoretical(*row.fit);
    } else {
      flag("exponent_le_1");
    }
  } catch (const InsufficientData&) {
    flag("insufficient_data");
  }
}

}  // namespace

ZipfSurvey zipf_survey(const std::vector<RankSeries>& series, const ZipfConfig& cfg, unsigned workers) {
  ZipfSurvey out;
  out.rows.resize(series.size());
  parallel_blocks(series.size(), 16, workers, [&](unsigned, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) evaluate_row(series[i], cfg, out.rows[i]);
  });

  auto& sum = out.summary;
  sum.papers = series.size();
  std::size_t n_emp = 0;
  std::size_t n_theory = 0;
  std::size_t above = 0;
  double refs = 0.0;
  for (const auto& row : out.rows) {
    refs += static_cast<double>(row.n_refs);
    if (row.ratio_empirical) {
      sum.mean_ratio_empirical += *row.ratio_empirical;
      ++n_emp;
    }
    if (row.ratio_theoretical) {
      sum.mean_ratio_theoretical += *row.ratio_theoretical;
      ++n_theory;
    }
    if (row.fit) {
      ++sum.fitted;
      sum.mean_a += row.fit->a;
      sum.mean_b += row.fit->b;
      above += row.fit->a > 1.0 ? 1 : 0;
    }
  }
  if (sum.papers) sum.mean_n_refs = refs / static_cast<double>(sum.papers);
  if (n_emp) sum.mean_ratio_empirical /= static_cast<double>(n_emp);
  if (n_theory) sum.mean_ratio_theoretical /= static_cast<double>(n_theory);
  if (sum.fitted) {
    sum.mean_a /= static_cast<double>(sum.fitted);
    sum.mean_b /= static_cast<double>(sum.fitted);
    sum.fraction_a_above_1 = static_cast<double>(above) / static_cast<double>(sum.fitted);
  }

  // Pooled series: mean raw count at each rank over the papers reaching it.
  std::vector<double> total;
  std::vector<std::size_t> count;
  for (const auto& s : series) {
    if (s.size() > total.size()) {
      total.resize(s.size(), 0.0);
      count.resize(s.size(), 0);
    }
    for (std::size_t r = 0; r < s.size(); ++r) {
      total[r] += s.citations_by_rank[r];
      ++count[r];
    }
  }
  RankSeries pooled;
  for (std::size_t r = 0; r < total.size(); ++r) pooled.citations_by_rank.push_back(total[r] / static_cast<double>(count[r]));
  try {
    if (!pooled.citations_by_rank.empty()) sum.pooled = fit_zipf(pooled, cfg);
  } catch (const InsufficientData&) {
  }
  return out;
}

ZipfSurvey zipf_survey(const CitationGraph& g, const std::vector<NodeIndex>& sample, const WindowSpec& w,
                       const ZipfConfig& cfg, unsigned workers) {
  std::vector<RankSeries> series;
  series.reserve(sample.size());
  std::vector<std::size_t> missing;
  for (NodeIndex p : sample) {
    g.check_index(p);
    if (g.reference_count(p) == 0) {
      RankSeries empty;
      empty.focal = p;
      series.push_back(std::move(empty));
      missing.push_back(series.size() - 1);
      continue;
    }
    series.push_back(rank_series(g, p, w));
  }
  ZipfSurvey out = zipf_survey(series, cfg, workers);
  for (std::size_t i : missing) out.rows[i].flags = "no_refs";
  return out;
}

std::string zipf_survey_tsv(const CitationGraph* g, const ZipfSurvey& survey) {
  std::string s = "paper_id\tn_refs\ta\tb\tc\tsse\tratio_emp\tratio_theory\tflags\n";
  const auto opt = [&](const std::optional<double>& v) { s += v ? format_double(*v) : "NA"; };
  for (const auto& row : survey.rows) {
    s += g ? g->id(row.paper) : std::to_string(row.paper);
    s += '\t' + std::to_string(row.n_refs) + '\t';
    if (row.fit) {
      s += format_double(row.fit->a) + '\t' + format_double(row.fit->b) + '\t' + format_double(row.fit->c) +
           '\t' + format_double(row.fit->sse);
    } else {
      s += "NA\tNA\tNA\tNA";
    }
    s += '\t';
    opt(row.ratio_empirical);
    s += '\t';
    opt(row.ratio_theoretical);
    s += '\t' + row.flags + '\n';
  }
  return s;
}

std::string zipf_summary_tsv(const ZipfSurveySummary& sum) {
  std::string s = "statistic\tvalue\n";
  const auto line = [&](const char* k, const std::string& v) { s += std::string(k) + '\t' + v + '\n'; };
  line("papers", std::to_string(sum.papers));
  line("fitted", std::to_string(sum.fitted));
  line("mean_n_refs", format_double(sum.mean_n_refs));
  line("mean_a", format_double(sum.mean_a));
  line("mean_b", format_double(sum.mean_b));
  line("fraction_a_above_1", format_double(sum.fraction_a_above_1));
  line("mean_ratio_emp", format_double(sum.mean_ratio_empirical));
  line("mean_ratio_theory", format_double(sum.mean_ratio_theoretical));
  if (sum.pooled) {
    line("pooled_a", format_double(sum.pooled->a));
    line("pooled_b", format_double(sum.pooled->b));
    line("pooled_c", format_double(sum.pooled->c));
  } else {
    line("pooled_a", "NA");
    line("pooled_b", "NA");
    line("pooled_c", "NA");
  }
  return s;
}

}  // namespace dxg
