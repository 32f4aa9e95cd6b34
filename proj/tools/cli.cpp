#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dxg/analysis.hpp"
#include "dxg/atomic_file.hpp"
#include "dxg/disruption.hpp"
#include "dxg/error.hpp"
#include "dxg/ingest.hpp"
#include "dxg/parallel.hpp"
#include "dxg/random.hpp"
#include "dxg/results_io.hpp"
#include "dxg/snapshot.hpp"
#include "dxg/synthetic.hpp"
#include "dxg/zipf.hpp"

namespace dxg::cli {
namespace {

namespace fs = std::filesystem;

// Carries an exit code up to run().
struct Failure {
  int code;
  std::string message;
};

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err) {}

  void line(const std::string& text) { err_ << "dxg: " << text << '\n'; }
  void warn(const std::string& text) { line("warning " + text); }

 private:
  std::ostream& err_;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    auto piece = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!piece.empty()) out.push_back(std::move(piece));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw InvalidArgument("not a number: " + s);
  return v;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& piece : split(s, ',')) out.push_back(to_double(piece));
  return out;
}

std::pair<double, double> parse_range(const std::string& s) {
  const auto v = parse_doubles(s);
  if (v.size() != 2 || v[0] > v[1]) throw InvalidArgument("expected lo,hi range: " + s);
  return {v[0], v[1]};
}

// ------------------------------------------------------------------ config

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

std::vector<ConfigEntry> read_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::vector<ConfigEntry> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config line " + std::to_string(n) + ": expected key=value");
    auto key = trim(std::string_view(text).substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    out.push_back({key, trim(std::string_view(text).substr(eq + 1)), n});
  }
  return out;
}

std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

bool given(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

// Appends config entries as flags for the active subcommand. Command-line
// values win; keys the subcommand does not know are reported and skipped.
std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args, Log& log) {
  const auto path = config_path(args);
  if (!path) return args;
  CLI::App* sub = nullptr;
  for (const auto& a : args) {
    for (auto* s : app.get_subcommands({})) {
      if (s->get_name() == a) sub = s;
    }
    if (sub) break;
  }
  const auto original = args;
  for (const auto& e : read_config(*path)) {
    if (e.key == "config") continue;
    const std::string flag = "--" + e.key;
    const CLI::Option* opt = sub ? sub->get_option_no_throw(flag) : nullptr;
    if (!opt) opt = app.get_option_no_throw(flag);
    if (!opt) {
      log.warn("config_key_ignored key=" + e.key + " line=" + std::to_string(e.line));
      continue;
    }
    if (given(original, e.key)) continue;
    if (opt->get_expected_max() == 0) {
      if (truthy(e.value)) args.push_back(flag);
    } else {
      args.push_back(flag + "=" + e.value);
    }
  }
  return args;
}

// ----------------------------------------------------------------- options

struct Globals {
  unsigned workers = default_workers();
  std::uint64_t seed = 1;
  std::string config;
};

struct FilterOptions {
  std::size_t min_refs = 1;
  std::size_t min_citations = 1;
  std::string doc_types = "journal-article";
  int min_year = 0;
  int max_year = 0;
  CLI::Option* min_year_opt = nullptr;
  CLI::Option* max_year_opt = nullptr;

  void add(CLI::App* cmd) {
    cmd->add_option("--min-refs", min_refs, "Minimum reference count for focal papers")->capture_default_str();
    cmd->add_option("--min-citations", min_citations, "Minimum citation count for focal papers")
        ->capture_default_str();
    cmd->add_option("--doc-types", doc_types, "Comma-separated eligible doc types (journal-article, other)")
        ->capture_default_str();
    min_year_opt = cmd->add_option("--min-year", min_year, "Earliest focal publication year");
    max_year_opt = cmd->add_option("--max-year", max_year, "Latest focal publication year");
  }

  CorpusFilter filter() const {
    CorpusFilter f;
    f.min_references = min_refs;
    f.min_citations = min_citations;
    f.doc_types.clear();
    for (const auto& t : split(doc_types, ',')) f.doc_types.insert(parse_doc_type(t));
    if (min_year_opt->count()) f.min_year = min_year;
    if (max_year_opt->count()) f.max_year = max_year;
    f.check();
    return f;
  }
};

std::string filter_summary(const FilterReport& r) {
  std::ostringstream s;
  s << "considered=" << r.considered << " eligible=" << r.eligible << " too_few_references=" << r.too_few_references
    << " too_few_citations=" << r.too_few_citations << " wrong_doc_type=" << r.wrong_doc_type
    << " outside_years=" << r.outside_years;
  return s.str();
}

struct LoadedSnapshot {
  CitationGraph graph;
  std::uint64_t checksum = 0;
};

LoadedSnapshot load(const std::string& path) {
  SnapshotHeader h;
  try {
    auto g = load_snapshot(path, &h);
    return {std::move(g), h.checksum};
  } catch (const ChecksumMismatch& e) {
    throw Failure{kCorruptSnapshot, e.what()};
  } catch (const VersionMismatch& e) {
    throw Failure{kCorruptSnapshot, e.what()};
  } catch (const FormatError& e) {
    throw Failure{kCorruptSnapshot, e.what()};
  } catch (const IoError& e) {
    throw Failure{kIoOrParse, e.what()};
  }
}

void report_issues(Log& log, const std::string& file, const ParseReport& r) {
  constexpr std::size_t kShown = 5;
  for (std::size_t i = 0; i < std::min(kShown, r.issues.size()); ++i) {
    log.warn("parse_error file=" + file + " line=" + std::to_string(r.issues[i].line) + " reason=\"" +
             r.issues[i].message + "\"");
  }
}

// ------------------------------------------------------------------ ingest

struct IngestOptions {
  std::string papers;
  std::string edges;
  std::string out;
  double max_error_rate = 0.05;
  FilterOptions filter;
};

int cmd_ingest(const IngestOptions& o, Log& log) {
  std::ifstream papers(o.papers);
  if (!papers) throw Failure{kIoOrParse, "cannot read papers file " + o.papers};
  std::ifstream edges(o.edges);
  if (!edges) throw Failure{kIoOrParse, "cannot read edges file " + o.edges};
  const CorpusFilter filter = o.filter.filter();
  ParseOptions po;
  po.max_error_fraction = o.max_error_rate;

  std::optional<GraphBuilder> builder;
  ParseReport paper_report;
  ParseReport edge_report;
  try {
    auto parsed = parse_papers(papers, po);
    paper_report = std::move(parsed.report);
    report_issues(log, "papers", paper_report);
    builder.emplace(std::move(parsed.records));
    edge_report = parse_edges(
        edges, [&](std::string_view citer, std::string_view cited) { builder->add_edge(citer, cited); }, po);
    report_issues(log, "edges", edge_report);
  } catch (const MissingHeader& e) {
    throw Failure{kIoOrParse, e.what()};
  } catch (const TooManyParseErrors& e) {
    throw Failure{kIoOrParse, e.what()};
  } catch (const DuplicatePaper& e) {
    throw Failure{kIoOrParse, e.what()};
  } catch (const InvalidRecord& e) {
    throw Failure{kIoOrParse, e.what()};
  }
  auto built = std::move(*builder).build();
  for (const auto& d : built.report.dangling_samples) {
    log.warn("dangling_edge citer=" + d.citer + " cited=" + d.cited);
  }
  auto filtered = apply_filter(built.graph, filter);
  std::uint64_t checksum = 0;
  try {
    checksum = save_snapshot(filtered.graph, o.out);
  } catch (const IoError& e) {
    throw Failure{kIoOrParse, e.what()};
  }

  const auto& b = built.report;
  log.line("ingest papers=" + std::to_string(b.papers) + " paper_lines=" + std::to_string(paper_report.data_lines) +
           " paper_errors=" + std::to_string(paper_report.errors));
  log.line("ingest edges=" + std::to_string(b.edges_kept) + " edge_lines=" + std::to_string(edge_report.data_lines) +
           " edge_errors=" + std::to_string(edge_report.errors) + " duplicate_edges=" +
           std::to_string(b.duplicate_edges) + " self_loops=" + std::to_string(b.self_loops) +
           " dangling_edges=" + std::to_string(b.dangling_edges));
  log.line("ingest filter " + filter_summary(filtered.report));
  log.line("ingest snapshot=" + o.out + " checksum=" + format_checksum(checksum));
  if (paper_report.errors + edge_report.errors > 0) {
    log.warn("parse_errors papers=" + std::to_string(paper_report.errors) +
             " edges=" + std::to_string(edge_report.errors));
  }
  return kOk;
}

// ----------------------------------------------------------------- compute

struct ComputeOptions {
  std::string snapshot;
  std::string window = "unlimited";
  bool variants = false;
  std::string out;
  std::string format;
  std::uint64_t popular_min_citations = 0;
  CLI::Option* popular_opt = nullptr;
  double popular_quantile = 0.75;
  std::string self_citation = "author-overlap";
  std::string d4_denominator = "citers";
  FilterOptions filter;
};

ResultsFormat results_format(const std::string& name, const std::string& path) {
  if (name == "jsonl") return ResultsFormat::jsonl;
  if (name == "tsv") return ResultsFormat::tsv;
  if (!name.empty()) throw InvalidArgument("unknown results format: " + name);
  return fs::path(path).extension() == ".tsv" ? ResultsFormat::tsv : ResultsFormat::jsonl;
}

VariantConfig variant_config(const ComputeOptions& o) {
  VariantConfig vc;
  if (o.popular_opt->count()) vc.popular.min_citations = o.popular_min_citations;
  vc.popular.quantile = o.popular_quantile;
  if (o.self_citation == "author-overlap") {
    vc.self_citation = SelfCitationRule::author_overlap;
  } else if (o.self_citation == "off") {
    vc.self_citation = SelfCitationRule::off;
  } else {
    throw InvalidArgument("unknown self-citation rule: " + o.self_citation);
  }
  if (o.d4_denominator == "citers") {
    vc.d4_denominator = D4Denominator::citers;
  } else if (o.d4_denominator == "citers-and-k") {
    vc.d4_denominator = D4Denominator::citers_and_k;
  } else {
    throw InvalidArgument("unknown D4 denominator: " + o.d4_denominator);
  }
  return vc;
}

int cmd_compute(const ComputeOptions& o, const Globals& g, Log& log) {
  const auto window = WindowSpec::parse(o.window);
  const auto format = results_format(o.format, o.out);
  const auto filter = o.filter.filter();
  const auto vc = variant_config(o);
  auto snap = load(o.snapshot);
  auto filtered = apply_filter(snap.graph, filter);
  const auto resolved = resolve_variants(filtered.graph, vc);

  ResultsHeader header;
  header.snapshot_checksum = snap.checksum;
  header.window = window;
  header.variants = o.variants;
  header.popular_min_citations = resolved.popular_min_citations;

  AtomicFile file(o.out);
  ResultsWriter writer(file.stream(), format, filtered.graph, header);
  std::size_t rows = 0;
  std::size_t defined = 0;
  constexpr std::size_t kProgressEvery = 1u << 20;
  batch_compute(
      filtered.graph, window, resolved, g.workers,
      [&](const DisruptionResult& r) {
        writer.write(r);
        ++rows;
        if (r.d0) ++defined;
        if (rows % kProgressEvery == 0) log.line("progress rows=" + std::to_string(rows));
      },
      o.variants);
  file.commit();

  log.line("compute " + filter_summary(filtered.report));
  log.line("compute rows=" + std::to_string(rows) + " defined_d0=" + std::to_string(defined) +
           " window=" + window.to_string() + " variants=" + (o.variants ? "true" : "false") +
           " popular_min_citations=" + std::to_string(resolved.popular_min_citations) +
           " workers=" + std::to_string(g.workers) + " snapshot_checksum=" + format_checksum(snap.checksum));
  if (rows == 0) log.warn("empty_eligible_set output=" + o.out);
  return kOk;
}

// -------------------------------------------------------------------- zipf

struct ZipfOptions {
  std::string snapshot;
  std::size_t sample = 1000;
  std::string window = "unlimited";
  std::string out;
  std::string summary;
  double smoothing = 1.0;
  FilterOptions filter;
};

int cmd_zipf(const ZipfOptions& o, const Globals& g, Log& log) {
  const auto window = WindowSpec::parse(o.window);
  const auto filter = o.filter.filter();
  auto snap = load(o.snapshot);
  auto filtered = apply_filter(snap.graph, filter);
  const auto& graph = filtered.graph;

  std::vector<NodeIndex> population;
  for (NodeIndex p = 0; p < graph.size(); ++p) {
    if (graph.eligible(p)) population.push_back(p);
  }
  if (population.empty()) throw Failure{kNoEligible, "no eligible papers for the Zipf survey"};

  std::vector<NodeIndex> sample;
  if (o.sample >= population.size()) {
    if (o.sample > population.size()) {
      log.warn("sample_exceeds_population sample=" + std::to_string(o.sample) +
               " population=" + std::to_string(population.size()));
    }
    sample = population;
  } else {
    Rng rng(g.seed);
    for (auto i : rng.sample(population.size(), o.sample)) sample.push_back(population[i]);
    std::sort(sample.begin(), sample.end());
  }

  ZipfConfig zc;
  zc.smoothing = o.smoothing;
  const auto survey = zipf_survey(graph, sample, window, zc, g.workers);

  fs::path summary = o.summary;
  if (summary.empty()) {
    summary = fs::path(o.out);
    summary.replace_extension(".summary.tsv");
  }
  write_file_atomic(o.out, zipf_survey_tsv(&graph, survey));
  write_file_atomic(summary, zipf_summary_tsv(survey.summary));

  const auto& s = survey.summary;
  std::ostringstream line;
  line << "zipf population=" << population.size() << " sampled=" << s.papers << " fitted=" << s.fitted
       << " mean_a=" << format_double(s.mean_a) << " mean_b=" << format_double(s.mean_b)
       << " fraction_a_above_1=" << format_double(s.fraction_a_above_1) << " seed=" << g.seed;
  log.line(line.str());
  return kOk;
}

// ------------------------------------------------------------------- study

struct StudyOptions {
  std::string snapshot;
  std::string results;
  std::string study;
  std::string out_dir = ".";

  std::uint64_t overlap_min_citations = 100;
  double overlap_min_d = 0.2;
  std::uint64_t taxonomy_size = kTaxonomySize;
  std::uint64_t fields_per_paper = 2;

  std::uint64_t dist_min_citations = 10;

  std::string reflen_d_band = "0,0.05";
  std::string reflen_b_levels = "1,10,100";
  double reflen_b_tolerance = 0.05;
  std::uint64_t reflen_min_citations = 10;
  std::uint32_t reflen_bucket_width = 5;

  std::string k_range = "1,10";
  std::string r_range = "5,50";
  std::string c_range = "10,1000";
  bool robust_se = false;

  std::string cohorts;
  FilterOptions filter;
};

RegressionSpec regression_spec(const StudyOptions& o) {
  RegressionSpec spec;
  std::tie(spec.k_min, spec.k_max) = parse_range(o.k_range);
  std::tie(spec.r_min, spec.r_max) = parse_range(o.r_range);
  std::tie(spec.c_min, spec.c_max) = parse_range(o.c_range);
  spec.robust_se = o.robust_se;
  return spec;
}

ResultsFile load_results(const std::string& path) {
  try {
    return read_results(fs::path(path));
  } catch (const IoError& e) {
    throw Failure{kIoOrParse, e.what()};
  } catch (const FormatError& e) {
    throw Failure{kIoOrParse, e.what()};
  }
}

int cmd_study(const StudyOptions& o, const Globals& g, Log& log) {
  static const std::vector<std::string> kStudies{"overlap", "distribution", "reflen", "regression", "window-sweep"};
  if (std::find(kStudies.begin(), kStudies.end(), o.study) == kStudies.end()) {
    throw InvalidArgument("unknown study: " + o.study);
  }
  auto snap = load(o.snapshot);
  const auto results = load_results(o.results);
  if (results.header.snapshot_checksum != snap.checksum) {
    throw Failure{kChecksumMismatch, "results were computed from snapshot " +
                                         format_checksum(results.header.snapshot_checksum) + ", not " +
                                         format_checksum(snap.checksum)};
  }
  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{kIoOrParse, "cannot create " + dir.string() + ": " + ec.message()};

  std::vector<DisruptionResult> rows;
  rows.reserve(results.rows.size());
  for (const auto& r : results.rows) rows.push_back(r.result);

  if (o.study == "overlap") {
    OverlapStudySpec spec;
    spec.min_citations = o.overlap_min_citations;
    spec.min_d = o.overlap_min_d;
    spec.taxonomy_size = o.taxonomy_size;
    spec.fields_per_paper = o.fields_per_paper;
    const auto r = overlap_empirical(snap.graph, resolve_rows(snap.graph, results.rows), spec);
    write_file_atomic(dir / "overlap.tsv", overlap_tsv(r));
    log.line("study overlap pairs=" + std::to_string(r.n_pairs) + " rate=" + format_double(r.rate) +
             " baseline=" + format_double(r.baseline));
  } else if (o.study == "distribution") {
    const auto s = distribution_summary(rows, o.dist_min_citations);
    write_file_atomic(dir / "distribution.tsv", distribution_tsv(s));
    log.line("study distribution n=" + std::to_string(s.n));
  } else if (o.study == "reflen") {
    RefLenConfig cfg;
    std::tie(cfg.d_lo, cfg.d_hi) = parse_range(o.reflen_d_band);
    cfg.b_levels = parse_doubles(o.reflen_b_levels);
    cfg.b_tolerance = o.reflen_b_tolerance;
    cfg.min_citations = o.reflen_min_citations;
    cfg.bucket_width = o.reflen_bucket_width;
    const auto strata = reference_length_independence(rows, cfg);
    write_file_atomic(dir / "reflen.tsv", reflen_tsv(strata));
    log.line("study reflen strata=" + std::to_string(strata.size()));
  } else if (o.study == "regression") {
    const auto fit = ols_fit(regression_rows(rows), regression_spec(o), g.workers);
    write_file_atomic(dir / "regression.json", regression_json(fit));
    write_file_atomic(dir / "regression.tsv", regression_tsv(fit));
    log.line("study regression n=" + std::to_string(fit.n) + " excluded=" + std::to_string(fit.excluded) +
             " b_k=" + format_double(fit.b_k) + " se_k=" + format_double(fit.se[1]));
  } else {
    const auto cohorts = o.cohorts.empty() ? default_cohorts() : parse_cohorts(o.cohorts);
    auto filtered = apply_filter(snap.graph, o.filter.filter());
    const auto sweep = window_sweep(filtered.graph, cohorts, regression_spec(o), g.workers);
    write_file_atomic(dir / "window_sweep.tsv", sweep_tsv(sweep));
    for (const auto& row : sweep) {
      std::string line = "study window-sweep year=" + std::to_string(row.cohort.year) +
                         " window=" + row.cohort.window.to_string() + " n=" + std::to_string(row.n);
      if (row.b_k) line += " b_k=" + format_double(*row.b_k);
      if (!row.error.empty()) line += " error=\"" + row.error + "\"";
      log.line(line);
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  std::string kind = "random";
  std::size_t papers = 0;
  std::string out_dir = ".";
};

int cmd_generate(const GenerateOptions& o, const Globals& g, Log& log) {
  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{kIoOrParse, "cannot create " + dir.string() + ": " + ec.message()};
  const auto papers = dir / "papers.tsv";
  const auto edges = dir / "edges.tsv";
  Rng rng(g.seed);
  if (o.kind == "scale") {
    synth::ScaleParams p;
    if (o.papers) p.papers = o.papers;
    const auto n = synth::write_scale_corpus(papers, edges, p, rng);
    log.line("generate kind=scale papers=" + std::to_string(p.papers) + " edges=" + std::to_string(n));
    return kOk;
  }
  synth::Corpus corpus;
  if (o.kind == "random") {
    synth::RandomDagParams p;
    if (o.papers) p.papers = o.papers;
    corpus = synth::random_dag(p, rng);
  } else if (o.kind == "lagged-team") {
    synth::LaggedTeamParams p;
    if (o.papers) p.papers_per_cohort = o.papers;
    corpus = synth::lagged_team_corpus(p, rng);
  } else if (o.kind == "field-null") {
    synth::FieldNullParams p;
    if (o.papers) p.focal_papers = o.papers;
    corpus = synth::field_null_corpus(p, rng);
  } else {
    throw InvalidArgument("unknown corpus kind: " + o.kind);
  }
  synth::write_corpus(corpus, papers, edges);
  log.line("generate kind=" + o.kind + " papers=" + std::to_string(corpus.records.size()) +
           " edges=" + std::to_string(corpus.edges.size()));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Log log(err);
  CLI::App app{"Disruption index engine for citation graphs", "dxg"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--workers", globals.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", globals.seed, "Seed for sampled operations")->capture_default_str();
  app.add_option("--config", globals.config, "key=value file; command-line flags take precedence");

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Parse papers/edges TSV into a snapshot");
  c_ingest->add_option("--papers", ingest.papers, "papers.tsv")->required();
  c_ingest->add_option("--edges", ingest.edges, "edges.tsv")->required();
  c_ingest->add_option("--out", ingest.out, "Snapshot path")->required();
  c_ingest->add_option("--max-error-rate", ingest.max_error_rate, "Tolerated malformed-line fraction")
      ->capture_default_str();
  ingest.filter.add(c_ingest);

  ComputeOptions compute;
  auto* c_compute = app.add_subcommand("compute", "Disruption results for every eligible paper");
  c_compute->add_option("--snapshot", compute.snapshot)->required();
  c_compute->add_option("--window", compute.window, "Citation window in years, or 'unlimited'")
      ->capture_default_str();
  c_compute->add_flag("--variants", compute.variants, "Also compute D1-D4");
  c_compute->add_option("--out", compute.out, "Results path (.jsonl or .tsv)")->required();
  c_compute->add_option("--format", compute.format, "jsonl or tsv; defaults to the output extension");
  compute.popular_opt =
      c_compute->add_option("--popular-min-citations", compute.popular_min_citations, "Fixed popularity threshold");
  c_compute->add_option("--popular-quantile", compute.popular_quantile, "Popularity quantile when no threshold")
      ->capture_default_str();
  c_compute->add_option("--self-citation", compute.self_citation, "author-overlap or off")->capture_default_str();
  c_compute->add_option("--d4-denominator", compute.d4_denominator, "citers or citers-and-k")
      ->capture_default_str();
  compute.filter.add(c_compute);

  ZipfOptions zipf;
  zipf.filter.min_refs = 3;
  zipf.filter.min_citations = 0;
  auto* c_zipf = app.add_subcommand("zipf", "Zipf fits of reference citation counts on a seeded sample");
  c_zipf->add_option("--snapshot", zipf.snapshot)->required();
  c_zipf->add_option("--sample", zipf.sample, "Papers to sample")->capture_default_str();
  c_zipf->add_option("--window", zipf.window)->capture_default_str();
  c_zipf->add_option("--out", zipf.out, "Per-paper TSV")->required();
  c_zipf->add_option("--summary", zipf.summary, "Summary TSV (default: <out>.summary.tsv)");
  c_zipf->add_option("--smoothing", zipf.smoothing, "Offset added to counts before the log")->capture_default_str();
  zipf.filter.add(c_zipf);

  StudyOptions study;
  auto* c_study = app.add_subcommand("study", "Corpus-level studies over a results file");
  c_study->add_option("--snapshot", study.snapshot)->required();
  c_study->add_option("--results", study.results)->required();
  c_study->add_option("--study", study.study, "overlap|distribution|reflen|regression|window-sweep")->required();
  c_study->add_option("--out-dir", study.out_dir)->capture_default_str();
  c_study->add_option("--overlap-min-citations", study.overlap_min_citations)->capture_default_str();
  c_study->add_option("--overlap-min-d", study.overlap_min_d)->capture_default_str();
  c_study->add_option("--taxonomy-size", study.taxonomy_size)->capture_default_str();
  c_study->add_option("--fields-per-paper", study.fields_per_paper)->capture_default_str();
  c_study->add_option("--dist-min-citations", study.dist_min_citations)->capture_default_str();
  c_study->add_option("--reflen-d-band", study.reflen_d_band, "lo,hi")->capture_default_str();
  c_study->add_option("--reflen-b-levels", study.reflen_b_levels)->capture_default_str();
  c_study->add_option("--reflen-b-tolerance", study.reflen_b_tolerance)->capture_default_str();
  c_study->add_option("--reflen-min-citations", study.reflen_min_citations)->capture_default_str();
  c_study->add_option("--reflen-bucket-width", study.reflen_bucket_width)->capture_default_str();
  c_study->add_option("--k-range", study.k_range, "Team-size bounds lo,hi")->capture_default_str();
  c_study->add_option("--r-range", study.r_range, "Reference-count bounds lo,hi")->capture_default_str();
  c_study->add_option("--c-range", study.c_range, "Citation-count bounds lo,hi")->capture_default_str();
  c_study->add_flag("--robust-se", study.robust_se, "HC1 standard errors");
  c_study->add_option("--cohorts", study.cohorts, "year:window list for the sweep");
  study.filter.add(c_study);

  GenerateOptions generate;
  auto* c_generate = app.add_subcommand("generate", "Write a synthetic papers/edges corpus");
  c_generate->add_option("--kind", generate.kind, "random|lagged-team|field-null|scale")->capture_default_str();
  c_generate->add_option("--papers", generate.papers, "Size parameter (kind-specific)");
  c_generate->add_option("--out-dir", generate.out_dir)->capture_default_str();

  try {
    auto merged = merge_config(app, args, log);
    std::vector<const char*> argv{"dxg"};
    for (const auto& a : merged) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kUsage;
    }
    if (*c_ingest) return cmd_ingest(ingest, log);
    if (*c_compute) return cmd_compute(compute, globals, log);
    if (*c_zipf) return cmd_zipf(zipf, globals, log);
    if (*c_study) return cmd_study(study, globals, log);
    if (*c_generate) return cmd_generate(generate, globals, log);
    return kUsage;
  } catch (const Failure& f) {
    log.line("error exit=" + std::to_string(f.code) + " message=\"" + f.message + "\"");
    return f.code;
  } catch (const IoError& e) {
    log.line("error exit=" + std::to_string(kIoOrParse) + " message=\"" + e.what() + "\"");
    return kIoOrParse;
  } catch (const std::exception& e) {
    log.line("error exit=" + std::to_string(kUsage) + " message=\"" + e.what() + "\"");
    return kUsage;
  }
}

}  // namespace dxg::cli
