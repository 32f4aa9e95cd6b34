#pragma once
// Shared fixtures and the brute-force oracles the indexed code is checked
// against. The oracles work on the raw corpus (string ids, edge list) and
// never touch CitationGraph adjacency.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dxg/graph.hpp"
#include "dxg/synthetic.hpp"

namespace dxg::test {

inline PaperRecord paper(std::string id, int year, std::vector<std::string> authors = {},
                         std::vector<FieldId> fields = {}) {
  PaperRecord r;
  r.id = std::move(id);
  r.year = year;
  r.author_ids = std::move(authors);
  r.field_ids = std::move(fields);
  return r;
}

inline CitationGraph make_graph(std::vector<PaperRecord> records, const std::vector<EdgePair>& edges) {
  return build_graph(std::move(records), edges).graph;
}

inline CitationGraph make_graph(const synth::Corpus& c) { return make_graph(c.records, c.edges); }

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("dxg-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// ------------------------------------------------------------------ oracle

struct Oracle {
  std::map<std::string, int> year;
  std::map<std::string, std::set<std::string>> authors;
  std::map<std::string, std::set<std::string>> out;  // citer -> cited

  bool cites(const std::string& citer, const std::string& cited) const {
    return out.at(citer).count(cited) > 0;
  }

  explicit Oracle(const synth::Corpus& c) {
    for (const auto& r : c.records) {
      year[r.id] = r.year;
      authors[r.id] = {r.author_ids.begin(), r.author_ids.end()};
      out[r.id];
    }
    for (const auto& e : c.edges) {
      if (e.citer == e.cited || !year.count(e.citer) || !year.count(e.cited)) continue;
      out[e.citer].insert(e.cited);
    }
  }

  bool admits(const std::string& focal, const std::string& c, std::optional<int> w) const {
    const int fy = year.at(focal);
    const int cy = year.at(c);
    return cy >= fy && (!w || cy - fy <= *w);
  }

  std::vector<std::string> refs(const std::string& p) const {
    const auto& r = out.at(p);
    return {r.begin(), r.end()};
  }

  struct Sets {
    std::set<std::string> i, j, k;
  };

  // Triple loop: every paper x every reference x membership test.
  Sets classify(const std::string& p, std::optional<int> w,
                const std::set<std::string>* only_refs = nullptr) const {
    Sets s;
    const auto references = refs(p);
    for (const auto& [c, cy] : year) {
      if (c == p || !admits(p, c, w)) continue;
      const bool cites_p = cites(c, p);
      bool cites_ref = false;
      for (const auto& r : references) {
        if (only_refs && !only_refs->count(r)) continue;
        if (cites(c, r)) cites_ref = true;
      }
      if (cites_p && !cites_ref) s.i.insert(c);
      if (cites_p && cites_ref) s.j.insert(c);
      if (!cites_p && cites_ref) s.k.insert(c);
    }
    return s;
  }

  std::size_t ref_hits(const std::string& c, const std::string& p) const {
    std::size_t n = 0;
    for (const auto& r : refs(p)) n += cites(c, r);
    return n;
  }

  std::size_t total_citations(const std::string& p) const {
    std::size_t n = 0;
    for (const auto& [c, cited] : out) n += cited.count(p);
    return n;
  }

  // (reference, count) with the window anchored at p's year; ties to the
  // smallest id.
  std::optional<std::pair<std::string, std::size_t>> top_reference(const std::string& p,
                                                                   std::optional<int> w) const {
    std::optional<std::pair<std::string, std::size_t>> best;
    for (const auto& r : refs(p)) {
      std::size_t n = 0;
      for (const auto& [c, cy] : year) {
        if (cites(c, r) && admits(p, c, w)) ++n;
      }
      if (!best || n > best->second) best = {r, n};
    }
    return best;
  }

  // Nearest-rank quantile over total citations of every cited paper.
  std::uint64_t popularity_threshold(double q) const {
    std::vector<std::size_t> totals;
    for (const auto& [id, y] : year) {
      const auto n = total_citations(id);
      if (n > 0) totals.push_back(n);
    }
    if (totals.empty()) return 0;
    std::sort(totals.begin(), totals.end());
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(totals.size())));
    rank = std::clamp<std::size_t>(rank, 1, totals.size());
    return totals[rank - 1];
  }

  bool shares_author(const std::string& a, const std::string& b) const {
    for (const auto& x : authors.at(a)) {
      if (authors.at(b).count(x)) return true;
    }
    return false;
  }
};

inline std::optional<double> d_of(std::size_t i, std::size_t j, std::size_t k) {
  if (i + j + k == 0) return std::nullopt;
  return (static_cast<double>(i) - static_cast<double>(j)) / static_cast<double>(i + j + k);
}

}  // namespace dxg::test
