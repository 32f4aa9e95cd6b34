#include "dxg/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "dxg/error.hpp"
#include "dxg/ingest.hpp"

namespace dxg::synth {
namespace {

std::string padded(char prefix, std::uint64_t i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

std::vector<FieldId> random_fields(Rng& rng, std::size_t count, std::size_t taxonomy) {
  std::vector<FieldId> out;
  for (auto f : rng.sample(taxonomy, count)) out.push_back(static_cast<FieldId>(f));
  return out;
}

class CorpusBuilder {
 public:
  explicit CorpusBuilder(Corpus& c) : c_(c) {}

  std::size_t add(int year, std::vector<std::string> authors = {}, std::vector<FieldId> fields = {}) {
    PaperRecord r;
    r.id = padded('S', c_.records.size(), 8);
    r.year = year;
    r.author_ids = std::move(authors);
    r.field_ids = std::move(fields);
    c_.records.push_back(std::move(r));
    return c_.records.size() - 1;
  }

  std::string author() { return padded('A', next_author_++, 8); }

  void cite(std::size_t citer, std::size_t cited) {
    c_.edges.push_back({c_.records[citer].id, c_.records[cited].id});
  }

 private:
  Corpus& c_;
  std::uint64_t next_author_ = 0;
};

}  // namespace

Corpus random_dag(const RandomDagParams& params, Rng& rng) {
  Corpus c;
  const std::size_t n = params.papers;
  const int width = static_cast<int>(std::to_string(n).size());
  for (std::size_t i = 0; i < n; ++i) {
    PaperRecord r;
    r.id = padded('P', i, width);
    r.year = static_cast<int>(rng.between(params.first_year, params.last_year));
    r.doc_type = rng.bernoulli(0.9) ? DocType::journal_article : DocType::other;
    const auto n_auth = rng.below(params.max_authors + 1);
    for (auto a : rng.sample(params.author_pool, n_auth)) r.author_ids.push_back(padded('A', a, 4));
    r.field_ids = random_fields(rng, rng.below(3), kTaxonomySize);
    c.records.push_back(std::move(r));
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      const bool forward = c.records[v].year <= c.records[u].year;
      if (rng.bernoulli(forward ? params.edge_prob : params.backward_prob)) {
        c.edges.push_back({c.records[u].id, c.records[v].id});
      }
    }
  }
  return c;
}

Corpus lagged_team_corpus(const LaggedTeamParams& params, Rng& rng) {
  Corpus c;
  CorpusBuilder b(c);
  const auto journal_year = [&](int y) { return std::min(y, params.last_year); };
  for (int year : params.cohort_years) {
    for (std::size_t f = 0; f < params.papers_per_cohort; ++f) {
      const auto team = static_cast<int>(rng.between(1, 10));
      std::vector<std::string> authors;
      for (int a = 0; a < team; ++a) authors.push_back(b.author());
      const std::size_t focal = b.add(year, std::move(authors), random_fields(rng, 2, kTaxonomySize));

      std::vector<std::size_t> refs;
      const auto n_refs = rng.between(5, 15);
      for (std::int64_t r = 0; r < n_refs; ++r) {
        refs.push_back(b.add(year - static_cast<int>(rng.between(1, 5)), {b.author()}));
        b.cite(focal, refs.back());
      }
      const auto add_citer = [&](int offset, bool cites_focal, bool cites_ref) {
        const int y = year + offset;
        if (y > params.last_year) return;
        const std::size_t citer = b.add(journal_year(y), {b.author()});
        if (cites_focal) b.cite(citer, focal);
        if (cites_ref) b.cite(citer, refs[rng.below(refs.size())]);
      };

      // Immediate citations: larger teams are displaced-from less.
      const double p_i_early = 0.25 + 0.04 * team;
      const auto n_early = 12 + rng.below(6);
      for (std::uint64_t i = 0; i < n_early; ++i) {
        const bool type_i = rng.bernoulli(p_i_early);
        add_citer(static_cast<int>(rng.between(0, 1)), true, !type_i);
      }
      // Lagged citations: same volume for every team, but displacing for
      // small teams and consolidating for large ones.
      const double p_i_lag = 0.95 - 0.09 * team;
      const auto n_lag = 20 + rng.below(3);
      for (std::uint64_t i = 0; i < n_lag; ++i) {
        const bool type_i = rng.bernoulli(p_i_lag);
        add_citer(params.lag_years + static_cast<int>(rng.between(0, 3)), true, !type_i);
      }
      // Papers citing only the references.
      for (int i = 0; i < 8; ++i) add_citer(static_cast<int>(rng.between(0, 10)), false, true);
    }
  }
  return c;
}

Corpus field_null_corpus(const FieldNullParams& params, Rng& rng) {
  if (params.fields_per_paper > params.taxonomy_size) throw InvalidArgument("more fields than taxonomy entries");
  Corpus c;
  CorpusBuilder b(c);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < params.citer_pool; ++i) pool.push_back(b.add(2010));
  for (std::size_t f = 0; f < params.focal_papers; ++f) {
    const std::size_t ref =
        b.add(1990, {}, random_fields(rng, params.fields_per_paper, params.taxonomy_size));
    const std::size_t focal =
        b.add(2000, {}, random_fields(rng, params.fields_per_paper, params.taxonomy_size));
    b.cite(focal, ref);
    for (std::size_t citer : pool) b.cite(citer, focal);
  }
  return c;
}

std::uint64_t write_scale_corpus(const std::filesystem::path& papers_tsv, const std::filesystem::path& edges_tsv,
                                 const ScaleParams& params, Rng& rng) {
  const std::size_t n = params.papers;
  std::ofstream papers(papers_tsv);
  std::ofstream edges(edges_tsv);
  if (!papers || !edges) throw IoError("cannot open corpus output files");
  papers << kPapersHeader << '\n';
  edges << kEdgesHeader << '\n';
  const std::size_t author_pool = std::max<std::size_t>(1, n / 2);
  std::string line;
  std::uint64_t written = 0;
  const auto id = [](std::size_t i) { return padded('W', i, 9); };
  for (std::size_t i = 0; i < n; ++i) {
    const int year = 1950 + static_cast<int>((70.0 * static_cast<double>(i)) / static_cast<double>(n));
    line = id(i);
    line += '\t';
    line += std::to_string(year);
    line += rng.bernoulli(0.95) ? "\tjournal-article\t" : "\tbook-chapter\t";
    const auto n_auth = 1 + rng.below(5);
    for (std::uint64_t a = 0; a < n_auth; ++a) {
      if (a) line += ';';
      line += padded('A', rng.below(author_pool), 8);
    }
    line += '\t';
    const auto n_fields = 1 + rng.below(2);
    for (std::uint64_t f = 0; f < n_fields; ++f) {
      if (f) line += ';';
      line += std::to_string(rng.below(kTaxonomySize));
    }
    line += '\n';
    papers << line;

    if (i == 0) continue;
    const auto lo = static_cast<std::int64_t>(std::floor(params.avg_refs)) - 5;
    const auto k = static_cast<std::uint64_t>(std::max<std::int64_t>(0, rng.between(lo, lo + 10)) +
                                              (rng.bernoulli(params.avg_refs - std::floor(params.avg_refs)) ? 1 : 0));
    const std::string citer = id(i);
    for (std::uint64_t e = 0; e < k; ++e) {
      std::size_t target;
      if (rng.bernoulli(0.5)) {
        target = rng.below(i);
      } else {
        target = i - 1 - rng.below(std::min(i, params.recent_window));
      }
      line = citer;
      line += '\t';
      line += id(target);
      line += '\n';
      edges << line;
      ++written;
    }
  }
  if (!papers || !edges) throw IoError("write failed for corpus output files");
  return written;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& papers_tsv,
                  const std::filesystem::path& edges_tsv) {
  std::ofstream papers(papers_tsv);
  std::ofstream edges(edges_tsv);
  if (!papers || !edges) throw IoError("cannot open corpus output files");
  papers << kPapersHeader << '\n';
  for (const auto& r : corpus.records) {
    papers << r.id << '\t' << r.year << '\t' << to_string(r.doc_type) << '\t';
    for (std::size_t i = 0; i < r.author_ids.size(); ++i) papers << (i ? ";" : "") << r.author_ids[i];
    papers << '\t';
    for (std::size_t i = 0; i < r.field_ids.size(); ++i) papers << (i ? ";" : "") << r.field_ids[i];
    papers << '\n';
  }
  edges << kEdgesHeader << '\n';
  for (const auto& e : corpus.edges) edges << e.citer << '\t' << e.cited << '\n';
  if (!papers || !edges) throw IoError("write failed for corpus output files");
}

}  // namespace dxg::synth
