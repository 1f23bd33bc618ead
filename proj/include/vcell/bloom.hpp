#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "vcell/ap_id.hpp"

namespace vcell {

struct BloomParams {
    static constexpr std::array<std::uint64_t, 2> kDefaultSeeds{0x5643454c4c5f4831ULL, 0x5643454c4c5f4832ULL};

    std::uint64_t m = 8;  // bits
    std::uint32_t k = 1;  // hash functions
    std::array<std::uint64_t, 2> seeds = kDefaultSeeds;

    // Throws DataError unless m >= 8 and 1 <= k <= 64.
    void validate() const;

    friend bool operator==(const BloomParams&, const BloomParams&) = default;
};

// False-positive probability (1 - (1 - 1/m)^(k n))^k, evaluated in the log
// domain. Exact form, not the exp(-kn/m) approximation.
double fp_rate(std::uint64_t m, std::uint64_t n, std::uint32_t k);

// m = ceil(-n ln p / ln(2)^2) (at least 8), k = max(1, round(m/n ln 2)),
// then m is grown until fp_rate(m, n, k) <= 1.1 p.
BloomParams size_for(std::uint64_t n, double target_p);

// The two base hashes of an AP: XXH64 of the 17 canonical ASCII bytes under
// each seed. Computed once per query and reused for every filter sharing the
// same seeds.
struct HashPair {
    std::uint64_t h1 = 0;
    std::uint64_t h2 = 0;
};

HashPair hash_ap(const ApId& id, const std::array<std::uint64_t, 2>& seeds);

// Bit positions g_i = (h1 + i * h2 mod 2^64) mod m, i = 0..k-1.
std::vector<std::uint64_t> bit_positions(const HashPair& h, std::uint64_t m, std::uint32_t k);

class BloomFilter {
public:
    explicit BloomFilter(const BloomParams& params);

    // Rebuilds a filter from stored bits; `bits` must hold ceil(m/8) bytes.
    BloomFilter(const BloomParams& params, std::vector<std::uint8_t> bits, std::uint64_t count);

    void insert(const ApId& id);
    void insert(const HashPair& h);
    bool contains(const ApId& id) const;
    bool contains(const HashPair& h) const;

    const BloomParams& params() const noexcept { return params_; }
    // Bit j lives in byte j/8 at bit (j % 8), least significant bit first.
    std::span<const std::uint8_t> bytes() const noexcept { return bits_; }
    // Number of insert calls, not distinct items.
    std::uint64_t count() const noexcept { return count_; }
    std::uint64_t popcount() const noexcept;

    friend bool operator==(const BloomFilter&, const BloomFilter&) = default;

private:
    bool test(std::uint64_t bit) const noexcept { return (bits_[bit >> 3] >> (bit & 7)) & 1U; }

    BloomParams params_;
    std::vector<std::uint8_t> bits_;
    std::uint64_t count_ = 0;
};

}  // namespace vcell
