#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vcell/bloom.hpp"
#include "vcell/vcell_core.hpp"

namespace vcell {

struct IndexEntry {
    std::uint32_t vcell_id = 0;
    GeoPoint anchor;
    std::uint32_t n = 0;  // |aps| of the cell
    BloomFilter filter;

    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

// One filter per vcell, all sharing the same parameters. Adjacency is the
// order of `entries` (vcell_id order).
struct VcellIndex {
    BloomParams params;
    std::vector<IndexEntry> entries;

    friend bool operator==(const VcellIndex&, const VcellIndex&) = default;
};

struct FixedParams {
    BloomParams params;
};

// Size every filter for the largest cell so each meets the target.
struct TargetFpRate {
    double p = 0.005;
};

using IndexPolicy = std::variant<FixedParams, TargetFpRate>;

VcellIndex build_index(const VcellList& vcells, const IndexPolicy& policy);

inline constexpr std::uint8_t kIndexFormatVersion = 1;

// Little-endian layout:
//   "VCBF" | u8 version | u64 m | u32 k | u64 seed0 | u64 seed1 | u32 cell_count
//   per cell: u32 vcell_id | f64 lat | f64 lon | u32 n | ceil(m/8) bytes of bits
//   u32 CRC32C of every preceding byte
std::string serialize_index(const VcellIndex& index);

// Throws FormatError on bad magic, unsupported version, truncation, trailing
// bytes, checksum mismatch, or invalid parameters.
VcellIndex deserialize_index(std::string_view bytes);

std::uint32_t crc32c(std::string_view bytes) noexcept;

}  // namespace vcell
