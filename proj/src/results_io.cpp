#include "dxg/results_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "dxg/error.hpp"

namespace dxg {
namespace {

using nlohmann::json;

constexpr std::string_view kColumns[] = {"id",  "year", "n_refs", "team_size", "n_i", "n_j", "n_k",
                                         "c_p", "c_max", "top_ref", "d0",      "d_p", "r_k", "b_p",
                                         "d1",  "d2",   "d3",     "d4",        "flags"};

std::string tsv_column_line() {
  std::string s;
  for (auto c : kColumns) {
    if (!s.empty()) s += '\t';
    s += c;
  }
  return s;
}

void append_opt(std::string& s, const std::optional<double>& v, std::string_view null_token) {
  if (v) {
    s += format_double(*v);
  } else {
    s += null_token;
  }
}

std::optional<double> opt_double(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::optional<double> opt_double(std::string_view s) {
  if (s == "NA") return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad number '" + std::string(s) + "'");
  return v;
}

template <typename T>
T parse_uint(std::string_view s) {
  T v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad integer '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_tabs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find('\t', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

ResultsHeader header_from_json(const json& h) {
  if (h.value("format", "") != kResultsFormat) throw FormatError("not a dxg results file");
  ResultsHeader out;
  out.version = h.at("version").get<int>();
  if (out.version != kResultsVersion) throw FormatError("unsupported results version");
  out.snapshot_checksum = parse_checksum(h.at("snapshot_checksum").get<std::string>());
  out.window = WindowSpec::parse(h.at("window").get<std::string>());
  out.variants = h.at("variants").get<bool>();
  out.popular_min_citations = h.at("popular_min_citations").get<std::uint64_t>();
  return out;
}

ResultRow row_from_json(const json& j) {
  ResultRow row;
  row.id = j.at("id").get<std::string>();
  if (!j.at("top_ref").is_null()) row.top_reference = j.at("top_ref").get<std::string>();
  auto& r = row.result;
  r.year = j.at("year").get<int>();
  r.n_refs = j.at("n_refs").get<std::uint32_t>();
  r.team_size = j.at("team_size").get<std::uint32_t>();
  r.counts = {j.at("n_i").get<std::int64_t>(), j.at("n_j").get<std::int64_t>(), j.at("n_k").get<std::int64_t>()};
  r.c_p = j.at("c_p").get<std::uint64_t>();
  r.c_max = j.at("c_max").get<std::uint64_t>();
  r.d0 = opt_double(j.at("d0"));
  r.d_p = opt_double(j.at("d_p"));
  r.r_k = opt_double(j.at("r_k"));
  r.b_p = opt_double(j.at("b_p"));
  r.d1 = opt_double(j.at("d1"));
  r.d2 = opt_double(j.at("d2"));
  r.d3 = opt_double(j.at("d3"));
  r.d4 = opt_double(j.at("d4"));
  std::uint32_t flags = 0;
  for (const auto& f : j.at("flags")) flags |= flags_from_string(f.get<std::string>());
  r.flags = flags;
  return row;
}

ResultRow row_from_tsv(std::string_view line) {
  const auto c = split_tabs(line);
  if (c.size() != std::size(kColumns)) throw FormatError("results row has wrong column count");
  ResultRow row;
  row.id = std::string(c[0]);
  if (c[9] != "NA") row.top_reference = std::string(c[9]);
  auto& r = row.result;
  r.year = parse_uint<int>(c[1]);
  r.n_refs = parse_uint<std::uint32_t>(c[2]);
  r.team_size = parse_uint<std::uint32_t>(c[3]);
  r.counts = {parse_uint<std::int64_t>(c[4]), parse_uint<std::int64_t>(c[5]), parse_uint<std::int64_t>(c[6])};
  r.c_p = parse_uint<std::uint64_t>(c[7]);
  r.c_max = parse_uint<std::uint64_t>(c[8]);
  r.d0 = opt_double(c[10]);
  r.d_p = opt_double(c[11]);
  r.r_k = opt_double(c[12]);
  r.b_p = opt_double(c[13]);
  r.d1 = opt_double(c[14]);
  r.d2 = opt_double(c[15]);
  r.d3 = opt_double(c[16]);
  r.d4 = opt_double(c[17]);
  r.flags = flags_from_string(c[18]);
  return row;
}

std::string_view header_value(std::string_view field, std::string_view key) {
  if (field.substr(0, key.size()) != key || field.size() <= key.size() || field[key.size()] != '=') {
    throw FormatError("results header missing '" + std::string(key) + "'");
  }
  return field.substr(key.size() + 1);
}

}  // namespace

std::string format_checksum(std::uint64_t checksum) {
  char buf[19] = {'0', 'x'};
  auto [ptr, ec] = std::to_chars(buf + 2, buf + sizeof(buf), checksum, 16);
  const std::size_t digits = static_cast<std::size_t>(ptr - (buf + 2));
  return "0x" + std::string(16 - digits, '0') + std::string(buf + 2, digits);
}

std::uint64_t parse_checksum(std::string_view text) {
  if (text.substr(0, 2) == "0x") text.remove_prefix(2);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw FormatError("bad checksum");
  return v;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

ResultsWriter::ResultsWriter(std::ostream& out, ResultsFormat format, const CitationGraph& g,
                             const ResultsHeader& header)
    : out_(out), format_(format), g_(g) {
  if (format_ == ResultsFormat::jsonl) {
    json h = {{"format", kResultsFormat},
              {"version", header.version},
              {"snapshot_checksum", format_checksum(header.snapshot_checksum)},
              {"window", header.window.to_string()},
              {"variants", header.variants},
              {"popular_min_citations", header.popular_min_citations}};
    out_ << h.dump() << '\n';
  } else {
    out_ << '#' << kResultsFormat << "\tversion=" << header.version
         << "\tsnapshot_checksum=" << format_checksum(header.snapshot_checksum)
         << "\twindow=" << header.window.to_string() << "\tvariants=" << (header.variants ? 1 : 0)
         << "\tpopular_min_citations=" << header.popular_min_citations << '\n'
         << tsv_column_line() << '\n';
  }
}

void ResultsWriter::write(const DisruptionResult& r) {
  auto& s = line_;
  s.clear();
  const bool js = format_ == ResultsFormat::jsonl;
  const std::string_view null_token = js ? "null" : "NA";
  const auto sep = [&](std::string_view key) {
    if (js) {
      s += s.empty() ? "{\"" : ",\"";
      s += key;
      s += "\":";
    } else if (!s.empty()) {
      s += '\t';
    }
  };
  const auto str = [&](const std::string& v) { s += js ? json(v).dump() : v; };
  const auto num = [&](auto v) { s += std::to_string(v); };

  sep("id");
  str(g_.id(r.focal));
  sep("year");
  num(r.year);
  sep("n_refs");
  num(r.n_refs);
  sep("team_size");
  num(r.team_size);
  sep("n_i");
  num(r.counts.n_i);
  sep("n_j");
  num(r.counts.n_j);
  sep("n_k");
  num(r.counts.n_k);
  sep("c_p");
  num(r.c_p);
  sep("c_max");
  num(r.c_max);
  sep("top_ref");
  if (r.top_reference) {
    str(g_.id(*r.top_reference));
  } else {
    s += null_token;
  }
  const std::pair<std::string_view, const std::optional<double>*> values[] = {
      {"d0", &r.d0}, {"d_p", &r.d_p}, {"r_k", &r.r_k}, {"b_p", &r.b_p},
      {"d1", &r.d1}, {"d2", &r.d2},   {"d3", &r.d3},   {"d4", &r.d4}};
  for (const auto& [key, v] : values) {
    sep(key);
    append_opt(s, *v, null_token);
  }
  sep("flags");
  if (js) {
    s += '[';
    bool first = true;
    for (std::uint32_t bit = 1; bit != 0 && bit <= r.flags; bit <<= 1) {
      if (!(r.flags & bit)) continue;
      if (!first) s += ',';
      first = false;
      s += '"';
      s += flags_to_string(bit);
      s += '"';
    }
    s += "]}";
  } else {
    s += flags_to_string(r.flags);
  }
  s += '\n';
  out_ << s;
}

ResultsFile read_results(std::istream& in) {
  ResultsFile file;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty results file");
  if (!line.empty() && line[0] == '{') {
    file.header = header_from_json(json::parse(line));
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      file.rows.push_back(row_from_json(json::parse(line)));
    }
    return file;
  }
  if (line.empty() || line[0] != '#') throw FormatError("results file has no header");
  const auto fields = split_tabs(std::string_view(line).substr(1));
  if (fields.size() != 6 || fields[0] != kResultsFormat) throw FormatError("not a dxg results file");
  auto& h = file.header;
  h.version = parse_uint<int>(header_value(fields[1], "version"));
  if (h.version != kResultsVersion) throw FormatError("unsupported results version");
  h.snapshot_checksum = parse_checksum(header_value(fields[2], "snapshot_checksum"));
  h.window = WindowSpec::parse(header_value(fields[3], "window"));
  h.variants = header_value(fields[4], "variants") == "1";
  h.popular_min_citations = parse_uint<std::uint64_t>(header_value(fields[5], "popular_min_citations"));
  if (!std::getline(in, line) || line != tsv_column_line()) throw FormatError("results TSV column header mismatch");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    file.rows.push_back(row_from_tsv(line));
  }
  return file;
}

ResultsFile read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results " + path.string());
  try {
    return read_results(in);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed results JSON: ") + e.what());
  }
}

std::vector<DisruptionResult> resolve_rows(const CitationGraph& g, const std::vector<ResultRow>& rows) {
  std::vector<DisruptionResult> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    DisruptionResult r = row.result;
    r.focal = g.index_of(row.id);
    if (row.top_reference) r.top_reference = g.index_of(*row.top_reference);
    out.push_back(r);
  }
  return out;
}

}  // namespace dxg
