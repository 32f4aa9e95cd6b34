#pragma once
// Synthetic corpora for tests, acceptance runs and benchmarks.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dxg/graph.hpp"
#include "dxg/random.hpp"

namespace dxg::synth {

struct Corpus {
  std::vector<PaperRecord> records;
  std::vector<EdgePair> edges;
};

// Erdos-Renyi-style citation graph: paper u cites an earlier-or-same-year
// paper v with probability `edge_prob`, and a later-year paper with
// probability `backward_prob` (to exercise the succession rule).
struct RandomDagParams {
  std::size_t papers = 100;
  double edge_prob = 0.05;
  double backward_prob = 0.0;
  int first_year = 1990;
  int last_year = 2000;
  std::size_t author_pool = 40;
  std::size_t max_authors = 3;
};

Corpus random_dag(const RandomDagParams& params, Rng& rng);

// Focal papers whose citers arrive on a team-size dependent schedule.
// Immediate citations displace large teams more often; citations arriving
// after `lag_years` displace small teams and consolidate large ones, with the
// same volume for every team size. Cohorts mirror a sweep where every
// citation stops at `last_year`.
struct LaggedTeamParams {
  std::vector<int> cohort_years{2019, 2017, 2015, 2010, 2000, 1995};
  std::size_t papers_per_cohort = 600;
  int last_year = 2020;
  int lag_years = 6;
};

Corpus lagged_team_corpus(const LaggedTeamParams& params, Rng& rng);

// Highly cited, maximally disruptive focal papers, each with one reference;
// every paper gets `fields_per_paper` distinct fields drawn uniformly from
// the taxonomy. Field overlap between focal and reference is then pure
// chance.
struct FieldNullParams {
  std::size_t focal_papers = 2000;
  std::size_t citer_pool = 120;
  std::size_t fields_per_paper = 2;
  std::size_t taxonomy_size = kTaxonomySize;
};

Corpus field_null_corpus(const FieldNullParams& params, Rng& rng);

// Large corpus streamed straight to papers/edges TSV files. Paper i has year
// increasing with i and cites ~avg_refs earlier papers, half uniformly and
// half from a recent window. Returns the number of edge lines written.
struct ScaleParams {
  std::size_t papers = 1'000'000;
  double avg_refs = 10.0;
  std::size_t recent_window = 20'000;
};

std::uint64_t write_scale_corpus(const std::filesystem::path& papers_tsv, const std::filesystem::path& edges_tsv,
                                 const ScaleParams& params, Rng& rng);

// Writes a corpus as papers/edges TSV.
void write_corpus(const Corpus& corpus, const std::filesystem::path& papers_tsv,
                  const std::filesystem::path& edges_tsv);

}  // namespace dxg::synth
