#include <gtest/gtest.h>

#include <random>
#include <unordered_set>

#include "vcell/bloom.hpp"
#include "vcell/error.hpp"
#include "vcell/hash.hpp"

using namespace vcell;

namespace {

ApId random_ap(std::mt19937_64& rng) {
    const unsigned long long v = rng() & 0xFFFFFFFFFFFFULL;
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02llx:%02llx:%02llx:%02llx:%02llx:%02llx", (v >> 40) & 0xFF, (v >> 32) & 0xFF,
                  (v >> 24) & 0xFF, (v >> 16) & 0xFF, (v >> 8) & 0xFF, v & 0xFF);
    return ApId::parse(buf);
}

}  // namespace

// Reference values from the python `xxhash` package (xxh64).
TEST(Xxh64, MatchesReferenceVectors) {
    EXPECT_EQ(xxh64("", 0), 0xef46db3751d8e999ULL);
    EXPECT_EQ(xxh64("a", 0), 0xd24ec4f1a98c6e5bULL);
    EXPECT_EQ(xxh64("aa:bb:cc:00:00:01", 0), 0xd99ed9da9a26865bULL);
    EXPECT_EQ(xxh64("aa:bb:cc:00:00:01", 0x5643454c4c5f4831ULL), 0xa77c1e0c5294f532ULL);
    EXPECT_EQ(xxh64("aa:bb:cc:00:00:01", 0x5643454c4c5f4832ULL), 0x512dd71532e6e7c7ULL);
    EXPECT_EQ(xxh64("0123456789abcdefghijklmnopqrstuvwxyz0123456789", 12345), 0x47d6e9d4cb009bd1ULL);
}

// Golden double-hashing positions for the default seeds (computed independently in python).
TEST(BitPositions, GoldenVectors) {
    const auto h = hash_ap(ApId::parse("aa:bb:cc:00:00:01"), BloomParams::kDefaultSeeds);
    EXPECT_EQ(bit_positions(h, 1000, 7), (std::vector<std::uint64_t>{298, 105, 296, 103, 910, 101, 908}));
    EXPECT_EQ(bit_positions(h, 1102776, 8),
              (std::vector<std::uint64_t>{917034, 550057, 883552, 516575, 149598, 483093, 116116, 851915}));
}

TEST(FpRate, EdgeCases) {
    EXPECT_EQ(fp_rate(1000, 0, 7), 0.0);
    EXPECT_EQ(fp_rate(1, 1, 3), 1.0);
    EXPECT_EQ(fp_rate(1, 50, 1), 1.0);
}

// Frozen from a 50-digit mpmath evaluation of (1 - (1 - 1/m)^(kn))^k.
TEST(FpRate, MatchesHighPrecisionOracle) {
    EXPECT_NEAR(fp_rate(1'100'000, 100'000, 7), 0.0051258986783760, 1e-12);
    EXPECT_NEAR(fp_rate(10'000, 1'000, 7), 0.0081957025967687, 1e-12);
    EXPECT_NEAR(fp_rate(1'102'776, 100'000, 8), 0.0050171166692197, 1e-12);
}

TEST(FpRate, Monotonicity) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t m = 8 + rng() % 100000;
        const std::uint64_t n = rng() % 20000;
        const auto k = static_cast<std::uint32_t>(1 + rng() % 20);
        const double p = fp_rate(m, n, k);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        EXPECT_LE(p, fp_rate(m, n + 1 + rng() % 100, k));
        EXPECT_GE(p, fp_rate(m + 1 + rng() % 1000, n, k));
    }
}

TEST(SizeFor, ClosedFormSizing) {
    const auto p = size_for(100'000, 0.005);
    EXPECT_NEAR(static_cast<double>(p.m), 1'102'776.0, 1.0);
    EXPECT_EQ(p.k, 8u);
    EXPECT_LE(fp_rate(p.m, 100'000, p.k), 1.1 * 0.005);
}

TEST(SizeFor, FloorClamp) {
    const auto p = size_for(1, 0.5);
    EXPECT_GE(p.m, 8u);
    EXPECT_GE(p.k, 1u);
    EXPECT_LE(fp_rate(p.m, 1, p.k), 0.55);
}

TEST(SizeFor, PropertyMeetsTarget) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t n = 1 + rng() % 50000;
        const double target = std::pow(10.0, -std::uniform_real_distribution<double>(0.3, 9.0)(rng));
        const auto params = size_for(n, target);
        EXPECT_NO_THROW(params.validate());
        EXPECT_LE(fp_rate(params.m, n, params.k), 1.1 * target) << n << " " << target;
    }
}

TEST(SizeFor, RejectsBadInput) {
    EXPECT_THROW(size_for(0, 0.1), DataError);
    EXPECT_THROW(size_for(10, 0.0), DataError);
    EXPECT_THROW(size_for(10, 1.0), DataError);
}

TEST(BloomParams, Validation) {
    BloomParams p;
    p.m = 7;
    EXPECT_THROW(BloomFilter{p}, DataError);
    p.m = 8;
    p.k = 0;
    EXPECT_THROW(BloomFilter{p}, DataError);
    p.k = 65;
    EXPECT_THROW(BloomFilter{p}, DataError);
}

TEST(BloomFilter, BasicContract) {
    BloomParams params;
    params.m = 1024;
    params.k = 5;
    BloomFilter bf(params);
    const auto id = ApId::parse("aa:bb:cc:dd:ee:ff");
    EXPECT_FALSE(bf.contains(id));
    bf.insert(id);
    EXPECT_TRUE(bf.contains(id));
    EXPECT_LE(bf.popcount(), params.k);
    const auto bits = std::vector<std::uint8_t>(bf.bytes().begin(), bf.bytes().end());
    bf.insert(id);
    EXPECT_EQ(std::vector<std::uint8_t>(bf.bytes().begin(), bf.bytes().end()), bits);
    EXPECT_EQ(bf.count(), 2u);
}

TEST(BloomFilter, EmptyFilterRejectsEverything) {
    BloomParams params;
    params.m = 64;
    params.k = 3;
    const BloomFilter bf(params);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) EXPECT_FALSE(bf.contains(random_ap(rng)));
}

TEST(BloomFilter, NoFalseNegativesAndPopcountBound) {
    std::mt19937_64 rng(2);
    for (int round = 0; round < 20; ++round) {
        BloomParams params;
        params.m = 8 + rng() % 5000;
        params.k = static_cast<std::uint32_t>(1 + rng() % 12);
        params.seeds = {rng(), rng()};
        BloomFilter bf(params);
        std::vector<ApId> ids;
        for (int i = 0; i < 300; ++i) {
            ids.push_back(random_ap(rng));
            bf.insert(ids.back());
        }
        for (const auto& id : ids) EXPECT_TRUE(bf.contains(id));
        EXPECT_LE(bf.popcount(), params.k * bf.count());
    }
}

TEST(BloomFilter, MeasuredFpRateTracksFormula) {
    BloomParams params;
    params.m = 10'000;
    params.k = 7;
    BloomFilter bf(params);
    std::mt19937_64 rng(20240601);
    std::unordered_set<ApId> inserted;
    while (inserted.size() < 1000) {
        const auto id = random_ap(rng);
        if (inserted.insert(id).second) bf.insert(id);
    }
    std::size_t fp = 0, probes = 0;
    while (probes < 100'000) {
        const auto id = random_ap(rng);
        if (inserted.count(id)) continue;
        ++probes;
        fp += bf.contains(id) ? 1 : 0;
    }
    const double expected = fp_rate(10'000, 1'000, 7);
    const double measured = static_cast<double>(fp) / static_cast<double>(probes);
    EXPECT_NEAR(measured, expected, 0.25 * expected) << "measured " << measured;
}
