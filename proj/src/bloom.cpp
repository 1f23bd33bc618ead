#include "vcell/bloom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "vcell/error.hpp"
#include "vcell/hash.hpp"

namespace vcell {

void BloomParams::validate() const {
    if (m < 8) throw DataError("bloom filter needs m >= 8 bits");
    if (k < 1 || k > 64) throw DataError("bloom filter needs 1 <= k <= 64 hash functions");
}

double fp_rate(std::uint64_t m, std::uint64_t n, std::uint32_t k) {
    if (n == 0) return 0.0;
    if (m <= 1) return 1.0;
    // log of the probability that a given bit is still zero
    const double log_zero = static_cast<double>(k) * static_cast<double>(n) * std::log1p(-1.0 / static_cast<double>(m));
    const double set_fraction = -std::expm1(log_zero);
    return std::exp(static_cast<double>(k) * std::log(set_fraction));
}

BloomParams size_for(std::uint64_t n, double target_p) {
    if (n < 1) throw DataError("size_for needs at least one item");
    if (!(target_p > 0.0 && target_p < 1.0)) throw DataError("target false-positive rate must lie in (0, 1)");
    const double ln2 = std::numbers::ln2;
    const double nn = static_cast<double>(n);
    BloomParams params;
    params.m = std::max<std::uint64_t>(8, static_cast<std::uint64_t>(std::ceil(-nn * std::log(target_p) / (ln2 * ln2))));
    const double k = std::round(static_cast<double>(params.m) / nn * ln2);
    params.k = static_cast<std::uint32_t>(std::clamp(k, 1.0, 64.0));
    while (fp_rate(params.m, n, params.k) > 1.1 * target_p) params.m += std::max<std::uint64_t>(1, params.m / 64);
    return params;
}

HashPair hash_ap(const ApId& id, const std::array<std::uint64_t, 2>& seeds) {
    return HashPair{xxh64(id.str(), seeds[0]), xxh64(id.str(), seeds[1])};
}

std::vector<std::uint64_t> bit_positions(const HashPair& h, std::uint64_t m, std::uint32_t k) {
    std::vector<std::uint64_t> out(k);
    std::uint64_t g = h.h1;
    for (std::uint32_t i = 0; i < k; ++i) {
        out[i] = g % m;
        g += h.h2;
    }
    return out;
}

BloomFilter::BloomFilter(const BloomParams& params) : params_(params) {
    params_.validate();
    bits_.assign((params_.m + 7) / 8, 0);
}

BloomFilter::BloomFilter(const BloomParams& params, std::vector<std::uint8_t> bits, std::uint64_t count)
    : params_(params), bits_(std::move(bits)), count_(count) {
    params_.validate();
    if (bits_.size() != (params_.m + 7) / 8) throw DataError("bloom filter bit array has the wrong length");
}

void BloomFilter::insert(const ApId& id) { insert(hash_ap(id, params_.seeds)); }

void BloomFilter::insert(const HashPair& h) {
    std::uint64_t g = h.h1;
    for (std::uint32_t i = 0; i < params_.k; ++i) {
        const std::uint64_t bit = g % params_.m;
        bits_[bit >> 3] |= static_cast<std::uint8_t>(1U << (bit & 7));
        g += h.h2;
    }
    ++count_;
}

bool BloomFilter::contains(const ApId& id) const { return contains(hash_ap(id, params_.seeds)); }

bool BloomFilter::contains(const HashPair& h) const {
    std::uint64_t g = h.h1;
    for (std::uint32_t i = 0; i < params_.k; ++i) {
        if (!test(g % params_.m)) return false;
        g += h.h2;
    }
    return true;
}

std::uint64_t BloomFilter::popcount() const noexcept {
    std::uint64_t n = 0;
    for (const auto byte : bits_) n += static_cast<std::uint64_t>(std::popcount(byte));
    return n;
}

}  // namespace vcell
