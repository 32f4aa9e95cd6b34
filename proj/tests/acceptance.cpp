// Acceptance runner: one PASS/FAIL line per criterion.
//   dxg_acceptance [--only N] [--skip-scale]
// Exit status is non-zero when any selected criterion fails.

#include <sys/resource.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dxg/analysis.hpp"
#include "dxg/disruption.hpp"
#include "dxg/ingest.hpp"
#include "dxg/parallel.hpp"
#include "dxg/random.hpp"
#include "dxg/results_io.hpp"
#include "dxg/snapshot.hpp"
#include "dxg/synthetic.hpp"
#include "dxg/zipf.hpp"

using namespace dxg;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

CitationGraph graph_of(const synth::Corpus& c) { return build_graph(c.records, c.edges).graph; }

// ------------------------------------------------ 1, 2: oracle and identity

struct OracleRun {
  std::size_t graphs = 0;
  std::size_t papers = 0;
  std::size_t mismatches = 0;
  std::size_t defined = 0;
  double worst_identity = 0.0;
  double secs = 0.0;
};

// Brute force over the raw edge list: for each candidate citer, test whether
// it cites p and whether it cites any reference of p.
OracleRun oracle_run() {
  static std::optional<OracleRun> cached;
  if (cached) return *cached;
  OracleRun run;
  const auto t0 = Clock::now();
  Rng rng(20240601);
  for (int t = 0; t < 200; ++t) {
    synth::RandomDagParams p;
    p.papers = 2 + rng.below(199);
    p.edge_prob = 0.01 + 0.09 * rng.uniform();
    p.backward_prob = 0.01 * rng.uniform();
    p.first_year = 1980 + static_cast<int>(rng.below(10));
    p.last_year = p.first_year + static_cast<int>(rng.below(25));
    const auto corpus = synth::random_dag(p, rng);
    const auto g = graph_of(corpus);
    const std::size_t n = g.size();

    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (const auto& e : corpus.edges) {
      const auto a = g.find(e.citer), b = g.find(e.cited);
      if (a && b && *a != *b) adj[*a][*b] = 1;
    }
    const WindowSpec w = (t % 2 == 0) ? WindowSpec::unlimited() : WindowSpec::of_years(1 + static_cast<int>(rng.below(8)));
    for (NodeIndex f = 0; f < n; ++f) {
      std::vector<NodeIndex> refs;
      for (NodeIndex r = 0; r < n; ++r) {
        if (adj[f][r]) refs.push_back(r);
      }
      std::int64_t ni = 0, nj = 0, nk = 0;
      for (NodeIndex c = 0; c < n; ++c) {
        if (c == f || !w.admits(g.year(f), g.year(c))) continue;
        bool hits_ref = false;
        for (auto r : refs) hits_ref |= adj[c][r] != 0;
        if (adj[c][f] && !hits_ref) ++ni;
        if (adj[c][f] && hits_ref) ++nj;
        if (!adj[c][f] && hits_ref) ++nk;
      }
      const auto got = classify_citers(g, f, w).counts;
      if (got.n_i != ni || got.n_j != nj || got.n_k != nk) ++run.mismatches;
      ++run.papers;

      const auto d0 = d_index(g, f, w);
      const auto dec = decompose(g, f, w);
      if (d0 && dec) {
        ++run.defined;
        run.worst_identity = std::max(run.worst_identity, std::abs(*d0 * (1.0 + dec->r_k) - dec->d_p));
      }
    }
    ++run.graphs;
  }
  run.secs = seconds_since(t0);
  cached = run;
  return run;
}

Outcome criterion1() {
  const auto r = oracle_run();
  return {r.mismatches == 0 && r.secs < 10.0,
          fmt("graphs=%zu papers=%zu mismatches=%zu time=%.2fs (limit 10s)", r.graphs, r.papers, r.mismatches,
              r.secs)};
}

Outcome criterion2() {
  const auto r = oracle_run();
  return {r.defined > 0 && r.worst_identity <= 1e-12,
          fmt("defined=%zu max|D0(1+R_k)-d_p|=%.3g (tol 1e-12)", r.defined, r.worst_identity)};
}

// ---------------------------------------------------------- 3: closed form

Outcome criterion3() {
  const double theory = cmax_ratio_theoretical(2.0, 1.4);
  const double emp = cmax_ratio_empirical(zipf_series(2.0, 1.4, 1.0, 30));
  const bool closed = std::abs(theory - 0.41667) <= 1e-5;
  const bool empirical = std::abs(emp - theory) <= 0.05;
  return {closed && empirical, fmt("theory=%.6f (target 0.41667 tol 1e-5: %s) empirical(N=30)=%.6f gap=%.4f (tol 0.05: %s)",
                                   theory, closed ? "ok" : "off", emp, std::abs(emp - theory),
                                   empirical ? "ok" : "off")};
}

// ---------------------------------------------------------- 4: overlap

Outcome criterion4() {
  const double v = overlap_baseline(292, 2);
  double worst = 0.0;
  for (unsigned t = 1; t <= 12; ++t) {
    std::vector<unsigned> masks;
    for (unsigned f = 1; f <= t; ++f) {
      masks.clear();
      for (unsigned m = 0; m < (1u << t); ++m) {
        if (static_cast<unsigned>(__builtin_popcount(m)) == f) masks.push_back(m);
      }
      std::uint64_t hit = 0;
      for (auto a : masks) {
        for (auto b : masks) hit += (a & b) != 0;
      }
      const double exact = static_cast<double>(hit) / static_cast<double>(masks.size() * masks.size());
      worst = std::max(worst, std::abs(overlap_baseline(t, f) - exact));
    }
  }
  return {std::abs(v - 0.013674) <= 1e-6 && worst <= 1e-12,
          fmt("overlap_baseline(292,2)=%.8f (target 0.013674 tol 1e-6) enumeration T<=12 max err=%.3g", v, worst)};
}

// ---------------------------------------------------------- 5: Zipf fit

Outcome criterion5() {
  const auto t0 = Clock::now();
  ZipfConfig cfg;
  cfg.smoothing = 0.0;
  double worst_a = 0.0, worst_b = 0.0;
  for (double a : {1.5, 2.0, 3.0}) {
    for (double b : {0.5, 1.4, 5.0}) {
      const auto fit = fit_zipf(zipf_series(a, b, 1000.0, 29), cfg);
      worst_a = std::max(worst_a, std::abs(fit.a - a));
      worst_b = std::max(worst_b, std::abs(fit.b - b));
    }
  }
  const double secs = seconds_since(t0);
  return {worst_a <= 0.05 && worst_b <= 0.2 && secs < 5.0,
          fmt("cells=9 max|da|=%.3g (tol 0.05) max|db|=%.3g (tol 0.2) time=%.3fs (limit 5s)", worst_a, worst_b,
              secs)};
}

// ---------------------------------------------------------- 6: OLS

std::vector<RegressionRow> planted(std::size_t n, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RegressionRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    RegressionRow r;
    r.k = static_cast<double>(rng.between(1, 10));
    r.r = static_cast<double>(rng.between(5, 50));
    r.c = static_cast<double>(rng.between(10, 1000));
    r.year = static_cast<int>(rng.between(2000, 2009));
    r.d0 = 0.05 - 0.02 * std::log(r.k) + 0.01 * std::log(r.r) + 0.03 * std::log(r.c) +
           0.004 * (r.year - 2000) + sigma * rng.normal();
    rows.push_back(r);
  }
  return rows;
}

Outcome criterion6() {
  const RegressionSpec spec;
  const auto noisy = ols_fit(planted(10000, 0.01, 61), spec);
  const double zk = std::abs(noisy.b_k + 0.02) / noisy.se[1];
  const double zr = std::abs(noisy.b_r - 0.01) / noisy.se[2];
  const double zc = std::abs(noisy.b_c - 0.03) / noisy.se[3];

  const auto exact_rows = planted(10000, 0.0, 62);
  const auto exact = ols_fit(exact_rows, spec);
  const double exact_err =
      std::max({std::abs(exact.b_k + 0.02), std::abs(exact.b_r - 0.01), std::abs(exact.b_c - 0.03)});

  const auto demeaned = ols_slopes_demeaned(planted(10000, 0.01, 61), spec);
  const double fe_gap = std::max({std::abs(demeaned[0] - noisy.b_k), std::abs(demeaned[1] - noisy.b_r),
                                  std::abs(demeaned[2] - noisy.b_c)});
  return {zk <= 3 && zr <= 3 && zc <= 3 && exact_err <= 1e-10 && fe_gap <= 1e-8,
          fmt("|z| b_k=%.2f b_r=%.2f b_c=%.2f (tol 3) zero-noise err=%.3g (tol 1e-10) dummy-vs-demeaned=%.3g (tol 1e-8)",
              zk, zr, zc, exact_err, fe_gap)};
}

// ---------------------------------------------------------- 7: window sweep

Outcome criterion7() {
  Rng rng(1905);
  const auto g = apply_filter(graph_of(synth::lagged_team_corpus({}, rng)), CorpusFilter{}).graph;
  const auto sweep = window_sweep(g, default_cohorts(), RegressionSpec{}, default_workers());
  bool ok = true;
  std::string detail;
  for (const auto& row : sweep) {
    const int w = row.cohort.window.is_unlimited() ? 1000 : row.cohort.window.years();
    if (!row.b_k) {
      ok = false;
      detail += fmt("w=%s:error(%s) ", row.cohort.window.to_string().c_str(), row.error.c_str());
      continue;
    }
    if (w <= 3 && *row.b_k <= 0) ok = false;
    if (w >= 10 && *row.b_k >= 0) ok = false;
    detail += fmt("w=%s:b_k=%+.4f ", row.cohort.window.to_string().c_str(), *row.b_k);
  }
  return {ok, detail + "(want >0 for w<=3, <0 for w>=10)"};
}

// ---------------------------------------------------------- 8: reference length

Outcome criterion8() {
  // Every reference length sees the same (d_p, b_p) combinations and
  // D0 = d_p / (1 + b_p) exactly.
  std::vector<DisruptionResult> rs;
  for (std::uint32_t len = 1; len <= 60; ++len) {
    for (double dp : {0.005, 0.02, 0.04}) {
      for (double level : {1.0, 10.0, 100.0}) {
        for (double bp : {level * 0.97, level, level * 1.03}) {
          DisruptionResult r;
          r.d_p = dp;
          r.b_p = bp;
          r.d0 = dp / (1.0 + bp);
          r.n_refs = len;
          r.c_p = 50;
          rs.push_back(r);
        }
      }
    }
  }
  RefLenConfig cfg;
  cfg.d_lo = -1.0;
  cfg.d_hi = 1.0;
  const auto strata = reference_length_independence(rs, cfg);
  bool ok = strata.size() == 3;
  std::string detail;
  for (const auto& s : strata) {
    if (!s.slope || std::abs(*s.slope) > 1e-10) ok = false;
    detail += fmt("b=%g:slope=%.3g ", s.b_level, s.slope ? *s.slope : NAN);
  }
  return {ok, detail + "(tol 1e-10)"};
}

// ---------------------------------------------------------- 9: fixtures

Outcome criterion9() {
  const auto d = [](std::int64_t i, std::int64_t j, std::int64_t k) {
    return disruption_index(DisruptionCounts{i, j, k});
  };
  const auto a = d(2, 1, 1), b = d(0, 5, 0);

  // F cites R; X1, X2 cite F only; Y cites F and R; Z cites R only.
  std::vector<PaperRecord> recs(6);
  const char* ids[] = {"F", "R", "X1", "X2", "Y", "Z"};
  const int years[] = {2000, 1990, 2001, 2001, 2002, 2003};
  for (int i = 0; i < 6; ++i) {
    recs[i].id = ids[i];
    recs[i].year = years[i];
  }
  const std::vector<EdgePair> edges{{"F", "R"}, {"X1", "F"}, {"X2", "F"}, {"Y", "F"}, {"Y", "R"}, {"Z", "R"}};
  const auto g = build_graph(recs, edges).graph;
  const auto graph_d = d_index(g, g.index_of("F"), WindowSpec::unlimited());
  // Z has no citers.
  const auto results = batch_compute(g.with_eligibility(std::vector<std::uint8_t>(g.size(), 1)),
                                     WindowSpec::unlimited(), {}, 1);
  const auto& z = results[g.index_of("Z")];
  const bool null_ok = !z.d0 && !z.d_p && (z.flags & kNoCiters) != 0;

  const bool ok = a && *a == 0.25 && b && *b == -1.0 && graph_d && *graph_d == 0.25 && null_ok;
  return {ok, fmt("(2,1,1)->%g graph(2,1,1)->%g (0,5,0)->%g no-citer null+flagged=%s", a ? *a : NAN,
                  graph_d ? *graph_d : NAN, b ? *b : NAN, null_ok ? "yes" : "no")};
}

// ---------------------------------------------------------- 10: determinism

std::string results_text(const CitationGraph& g, unsigned workers) {
  const auto cfg = resolve_variants(g, VariantConfig{});
  std::ostringstream out;
  ResultsHeader h;
  h.variants = true;
  h.popular_min_citations = cfg.popular_min_citations;
  ResultsWriter w(out, ResultsFormat::jsonl, g, h);
  batch_compute(g, WindowSpec::of_years(5), cfg, workers, [&](const DisruptionResult& r) { w.write(r); });
  return out.str();
}

CitationGraph seeded_graph(std::uint64_t seed) {
  Rng rng(seed);
  synth::RandomDagParams p;
  p.papers = 3000;
  p.edge_prob = 0.003;
  p.last_year = 2010;
  return apply_filter(graph_of(synth::random_dag(p, rng)), CorpusFilter{}).graph;
}

Outcome criterion10() {
  const auto g = seeded_graph(4242);
  const auto bytes = serialize_snapshot(g);
  const auto back = deserialize_snapshot(bytes);
  const bool lossless = back == g && serialize_snapshot(back) == bytes;

  const auto one = results_text(g, 1);
  const auto eight = results_text(g, 8);
  const auto rerun = results_text(seeded_graph(4242), 8);
  const auto reloaded = results_text(back, 3);
  const bool ok = lossless && one == eight && one == rerun && one == reloaded;
  return {ok, fmt("snapshot lossless=%s 1-vs-8 workers identical=%s rerun identical=%s (rows=%zu bytes=%zu)",
                  lossless ? "yes" : "no", one == eight ? "yes" : "no",
                  (one == rerun && one == reloaded) ? "yes" : "no", g.eligible_count(), one.size())};
}

// ---------------------------------------------------------- 11: scale

double peak_rss_gb() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return static_cast<double>(u.ru_maxrss) / (1024.0 * 1024.0);  // ru_maxrss is KiB on Linux
}

Outcome criterion11() {
  const fs::path dir = fs::temp_directory_path() / ("dxg-scale-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto t0 = Clock::now();
  Rng rng(11);
  synth::ScaleParams params;
  params.avg_refs = 10.05;  // leaves at least 10M distinct edges once duplicates are dropped
  const auto lines = synth::write_scale_corpus(dir / "papers.tsv", dir / "edges.tsv", params, rng);
  const double gen_secs = seconds_since(t0);

  const auto t1 = Clock::now();
  std::ostringstream out, err;
  int code = cli::run({"ingest", "--papers", (dir / "papers.tsv").string(), "--edges", (dir / "edges.tsv").string(),
                       "--out", (dir / "g.snap").string()},
                      out, err);
  const double ingest_secs = seconds_since(t1);
  unsigned long long edges = 0;
  if (const auto at = err.str().find("ingest edges="); at != std::string::npos) {
    edges = std::stoull(err.str().substr(at + 13));
  }
  const auto t2 = Clock::now();
  if (code == 0) {
    code = cli::run({"compute", "--snapshot", (dir / "g.snap").string(), "--window", "unlimited", "--variants",
                     "--format", "tsv", "--out", (dir / "results.tsv").string()},
                    out, err);
  }
  const double compute_secs = seconds_since(t2);
  const double total = ingest_secs + compute_secs;
  const double rss = peak_rss_gb();
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (code != 0) std::cerr << err.str();
  return {code == 0 && edges >= 10'000'000 && total < 600.0 && rss < 8.0,
          fmt("papers=1000000 edge_lines=%llu edges=%llu generate=%.1fs ingest=%.1fs compute(D0-D4)=%.1fs total=%.1fs (limit 600s) "
              "peak_rss=%.2fGB (limit 8GB)",
              static_cast<unsigned long long>(lines), edges, gen_secs, ingest_secs, compute_secs, total, rss)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::vector<int> only;
  bool skip_scale = false;
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 11));
  app.add_flag("--skip-scale", skip_scale, "Skip the scale smoke test");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10, criterion11};
  const std::set<int> selected(only.begin(), only.end());
  int failures = 0;
  for (int n = 1; n <= 11; ++n) {
    if (!selected.empty() && !selected.count(n)) continue;
    if (n == 11 && skip_scale && selected.empty()) continue;
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << o.detail << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
