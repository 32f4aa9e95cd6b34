#include "dxg/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <type_traits>

#include "dxg/error.hpp"

namespace dxg {

static_assert(std::endian::native == std::endian::little,
              "snapshot encoding assumes a little-endian host");

namespace {

class Writer {
 public:
  std::vector<std::uint8_t> bytes;

  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    bytes.insert(bytes.end(), p, p + sizeof(T));
  }

  template <typename T>
  void put_array(std::span<const T> v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::uint8_t*>(v.data());
    bytes.insert(bytes.end(), p, p + v.size_bytes());
  }

  void put_strings(const std::vector<std::string>& v) {
    std::vector<std::uint64_t> offsets;
    offsets.reserve(v.size() + 1);
    offsets.push_back(0);
    for (const auto& s : v) offsets.push_back(offsets.back() + s.size());
    put_array<std::uint64_t>(offsets);
    for (const auto& s : v) {
      bytes.insert(bytes.end(), s.begin(), s.end());
    }
  }
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  template <typename T>
  T get() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }

  template <typename T>
  std::vector<T> get_array(std::uint64_t count) {
    if (count > b_.size() / sizeof(T)) throw FormatError("snapshot section overruns payload");
    std::vector<T> v(count);
    if (count) std::memcpy(v.data(), take(count * sizeof(T)), count * sizeof(T));
    return v;
  }

  std::vector<std::uint64_t> get_offsets(std::uint64_t count) {
    auto offs = get_array<std::uint64_t>(count + 1);
    if (offs.front() != 0) throw FormatError("snapshot offsets must start at 0");
    for (std::size_t i = 1; i < offs.size(); ++i) {
      if (offs[i] < offs[i - 1]) throw FormatError("snapshot offsets not monotone");
    }
    return offs;
  }

  std::vector<std::string> get_strings(std::uint64_t count) {
    const auto offs = get_offsets(count);
    const char* base = reinterpret_cast<const char*>(take(offs.back()));
    std::vector<std::string> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.emplace_back(base + offs[i], offs[i + 1] - offs[i]);
    return out;
  }

  bool done() const { return pos_ == b_.size(); }

 private:
  const std::uint8_t* take(std::uint64_t n) {
    if (n > b_.size() - pos_) throw FormatError("snapshot truncated");
    const std::uint8_t* p = b_.data() + pos_;
    pos_ += n;
    return p;
  }

  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

template <typename T>
void check_targets(const std::vector<T>& v, std::uint64_t bound, const char* what) {
  for (T x : v) {
    if (static_cast<std::uint64_t>(x) >= bound) throw FormatError(std::string("snapshot ") + what + " out of range");
  }
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<std::uint8_t> serialize_snapshot(const CitationGraph& g) {
  const GraphData& d = g.data();
  Writer w;
  w.bytes.reserve(64 + d.paper_count() * 48 + d.edge_count() * 4);
  w.put_array<char>(kSnapshotMagic);
  w.put<std::uint16_t>(kSnapshotVersion);
  w.put<std::uint64_t>(d.paper_count());
  w.put<std::uint64_t>(d.edge_count());
  w.put<std::uint64_t>(d.author_names.size());
  w.put_strings(d.ids);
  w.put_array<std::int16_t>(d.years);
  w.put_array<DocType>(d.doc_types);
  w.put_array<std::uint8_t>(g.eligibility());
  w.put_strings(d.author_names);
  w.put_array<std::uint64_t>(d.author_offsets);
  w.put_array<AuthorIndex>(d.authors);
  w.put_array<std::uint64_t>(d.field_offsets);
  w.put_array<FieldId>(d.fields);
  w.put_array<std::uint64_t>(d.ref_offsets);
  w.put_array<NodeIndex>(d.refs);
  w.put<std::uint64_t>(fnv1a64(w.bytes));
  return std::move(w.bytes);
}

CitationGraph deserialize_snapshot(std::span<const std::uint8_t> bytes, SnapshotHeader* header) {
  constexpr std::size_t kPreamble = sizeof(kSnapshotMagic) + sizeof(std::uint16_t);
  if (bytes.size() < kPreamble || std::memcmp(bytes.data(), kSnapshotMagic, sizeof(kSnapshotMagic)) != 0) {
    throw FormatError("not a dxg snapshot (bad magic)");
  }
  std::uint16_t version = 0;
  std::memcpy(&version, bytes.data() + sizeof(kSnapshotMagic), sizeof(version));
  if (version != kSnapshotVersion) {
    throw VersionMismatch("snapshot version " + std::to_string(version) + ", expected " +
                          std::to_string(kSnapshotVersion));
  }
  if (bytes.size() < kPreamble + sizeof(std::uint64_t)) throw ChecksumMismatch("snapshot truncated");
  const auto payload = bytes.first(bytes.size() - sizeof(std::uint64_t));
  std::uint64_t stored = 0;
  std::memcpy(&stored, bytes.data() + payload.size(), sizeof(stored));
  const std::uint64_t actual = fnv1a64(payload);
  if (stored != actual) throw ChecksumMismatch("snapshot checksum mismatch");

  Reader r(payload.subspan(kPreamble));
  auto d = std::make_shared<GraphData>();
  const auto n = r.get<std::uint64_t>();
  const auto m = r.get<std::uint64_t>();
  const auto a = r.get<std::uint64_t>();
  if (n > std::numeric_limits<NodeIndex>::max()) throw FormatError("snapshot paper count too large");
  d->ids = r.get_strings(n);
  d->years = r.get_array<std::int16_t>(n);
  d->doc_types = r.get_array<DocType>(n);
  auto eligible = r.get_array<std::uint8_t>(n);
  d->author_names = r.get_strings(a);
  d->author_offsets = r.get_offsets(n);
  d->authors = r.get_array<AuthorIndex>(d->author_offsets.back());
  d->field_offsets = r.get_offsets(n);
  d->fields = r.get_array<FieldId>(d->field_offsets.back());
  d->ref_offsets = r.get_offsets(n);
  if (d->ref_offsets.back() != m) throw FormatError("snapshot edge count disagrees with offsets");
  d->refs = r.get_array<NodeIndex>(m);
  if (!r.done()) throw FormatError("trailing bytes in snapshot payload");
  check_targets(d->authors, a, "author index");
  check_targets(d->refs, n, "reference");
  for (std::size_t i = 1; i < d->ids.size(); ++i) {
    if (!(d->ids[i - 1] < d->ids[i])) throw FormatError("snapshot ids not sorted");
  }
  for (DocType t : d->doc_types) {
    if (t != DocType::journal_article && t != DocType::other) throw FormatError("snapshot doc type invalid");
  }
  for (std::uint64_t p = 0; p < n; ++p) {
    for (std::uint64_t e = d->ref_offsets[p] + 1; e < d->ref_offsets[p + 1]; ++e) {
      if (d->refs[e] <= d->refs[e - 1]) throw FormatError("snapshot reference list not sorted");
    }
  }
  d->rebuild_citers();

  if (header) *header = SnapshotHeader{version, n, m, stored};
  return CitationGraph(std::move(d), std::move(eligible));
}

std::uint64_t save_snapshot(const CitationGraph& g, const std::filesystem::path& path) {
  const auto bytes = serialize_snapshot(g);
  write_file_atomic(path, bytes);
  std::uint64_t checksum = 0;
  std::memcpy(&checksum, bytes.data() + bytes.size() - sizeof(checksum), sizeof(checksum));
  return checksum;
}

CitationGraph load_snapshot(const std::filesystem::path& path, SnapshotHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::uint8_t> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (!in) throw IoError("cannot read snapshot " + path.string());
  return deserialize_snapshot(bytes, header);
}

}  // namespace dxg
