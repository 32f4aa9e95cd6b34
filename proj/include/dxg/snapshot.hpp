#pragma once
// Binary graph snapshots.
//
// Layout (little-endian):
//   "DXG1" | u16 version | u64 paper_count | u64 edge_count | u64 author_count
//   ids            u64[n+1] offsets, bytes
//   years          i16[n]
//   doc_types      u8[n]
//   eligibility    u8[n]
//   author names   u64[a+1] offsets, bytes
//   authors        u64[n+1] offsets, u32[]
//   fields         u64[n+1] offsets, u16[]
//   references     u64[n+1] offsets, u32[m]
//   u64 checksum   FNV-1a over every preceding byte
//
// Citer lists are the transpose of the references and are rebuilt on load.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dxg/atomic_file.hpp"
#include "dxg/graph.hpp"

namespace dxg {

inline constexpr char kSnapshotMagic[4] = {'D', 'X', 'G', '1'};
inline constexpr std::uint16_t kSnapshotVersion = 1;

struct SnapshotHeader {
  std::uint16_t version = kSnapshotVersion;
  std::uint64_t paper_count = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t checksum = 0;
};

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_snapshot(const CitationGraph& g);
// Throws ChecksumMismatch, VersionMismatch, FormatError.
CitationGraph deserialize_snapshot(std::span<const std::uint8_t> bytes,
                                   SnapshotHeader* header = nullptr);

// Writes to a temporary sibling and renames, so a partial file never appears
// under `path`. Returns the payload checksum. Throws IoError.
std::uint64_t save_snapshot(const CitationGraph& g, const std::filesystem::path& path);
CitationGraph load_snapshot(const std::filesystem::path& path, SnapshotHeader* header = nullptr);

}  // namespace dxg
