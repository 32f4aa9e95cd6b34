#pragma once
// Result files: one row per focal paper, JSONL or TSV.
//
// Both formats start with a header naming the schema version, the window and
// the checksum of the snapshot the rows were computed from. Undefined values
// are written as JSON null / the TSV token "NA".

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dxg/disruption.hpp"
#include "dxg/graph.hpp"

namespace dxg {

inline constexpr std::string_view kResultsFormat = "dxg-results";
inline constexpr int kResultsVersion = 1;

enum class ResultsFormat { jsonl, tsv };

struct ResultsHeader {
  int version = kResultsVersion;
  std::uint64_t snapshot_checksum = 0;
  WindowSpec window;
  bool variants = false;
  std::uint64_t popular_min_citations = 0;
};

// A result row with external ids resolved, as read back from disk.
struct ResultRow {
  std::string id;
  std::optional<std::string> top_reference;
  DisruptionResult result;  // focal/top_reference indices are not meaningful here
};

std::string format_checksum(std::uint64_t checksum);
std::uint64_t parse_checksum(std::string_view text);

// Shortest round-trip decimal representation.
std::string format_double(double v);

class ResultsWriter {
 public:
  ResultsWriter(std::ostream& out, ResultsFormat format, const CitationGraph& g, const ResultsHeader& header);
  void write(const DisruptionResult& r);

 private:
  std::ostream& out_;
  ResultsFormat format_;
  const CitationGraph& g_;
  std::string line_;
};

struct ResultsFile {
  ResultsHeader header;
  std::vector<ResultRow> rows;
};

// Detects the format from the first line. Throws FormatError.
ResultsFile read_results(std::istream& in);
ResultsFile read_results(const std::filesystem::path& path);

// Re-attaches rows to graph indices; throws UnknownPaper for foreign ids.
std::vector<DisruptionResult> resolve_rows(const CitationGraph& g, const std::vector<ResultRow>& rows);

}  // namespace dxg
