#pragma once

#include <cstdint>
#include <string_view>

namespace vcell {

// XXH64 (xxHash, 64-bit variant) over raw bytes. Bit-compatible with the
// reference implementation, so ports can use any conforming xxHash library.
std::uint64_t xxh64(std::string_view bytes, std::uint64_t seed) noexcept;

}  // namespace vcell
