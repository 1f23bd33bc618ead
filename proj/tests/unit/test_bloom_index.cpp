#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "vcell/bloom_index.hpp"
#include "vcell/error.hpp"

using namespace vcell;
using vcell::testing::aps;
using vcell::testing::make_list;

namespace {

VcellList random_cells(std::mt19937_64& rng, int n_cells) {
    std::vector<ApSet> sets;
    for (int i = 0; i < n_cells; ++i) {
        ApSet s;
        const int k = 1 + static_cast<int>(rng() % 60);
        for (int j = 0; j < k; ++j) s.push_back(vcell::testing::ap("c" + std::to_string(rng() % 500)));
        normalize(s);
        sets.push_back(s);
    }
    return make_list(sets);
}

FormatError::Kind decode_error(const std::string& bytes) {
    try {
        deserialize_index(bytes);
    } catch (const FormatError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "decode succeeded";
    return FormatError::Kind::invalid_params;
}

}  // namespace

TEST(Crc32c, KnownVector) {
    // Standard CRC-32C check value.
    EXPECT_EQ(crc32c("123456789"), 0xE3069283u);
}

TEST(BuildIndex, SingleCell) {
    BloomParams params;
    params.m = 256;
    params.k = 4;
    const auto index = build_index(make_list({aps({"a", "b", "c"})}), FixedParams{params});
    ASSERT_EQ(index.entries.size(), 1u);
    EXPECT_EQ(index.entries[0].n, 3u);
    for (const auto& id : aps({"a", "b", "c"})) EXPECT_TRUE(index.entries[0].filter.contains(id));
}

TEST(BuildIndex, TargetPolicySizesForLargestCell) {
    std::mt19937_64 rng(31);
    const auto cells = random_cells(rng, 10);
    const auto index = build_index(cells, TargetFpRate{0.005});
    std::size_t n_max = 0;
    for (const auto& c : cells.cells) n_max = std::max(n_max, c.aps.size());
    EXPECT_EQ(index.params, size_for(n_max, 0.005));
    for (const auto& e : index.entries) {
        EXPECT_EQ(e.filter.params(), index.params);
        EXPECT_LE(fp_rate(index.params.m, e.n, index.params.k), 0.005 * 1.1);
    }
    // Entry order follows the vcell order; no false negatives.
    for (std::size_t i = 0; i < cells.cells.size(); ++i) {
        EXPECT_EQ(index.entries[i].vcell_id, cells.cells[i].vcell_id);
        for (const auto& id : cells.cells[i].aps) EXPECT_TRUE(index.entries[i].filter.contains(id));
    }
}

TEST(BuildIndex, RejectsEmpty) {
    EXPECT_THROW(build_index(VcellList{}, TargetFpRate{0.01}), DataError);
}

TEST(SerializeIndex, RoundTripIsBitExact) {
    std::mt19937_64 rng(32);
    for (int round = 0; round < 10; ++round) {
        const auto cells = random_cells(rng, 1 + static_cast<int>(rng() % 20));
        BloomParams params;
        params.m = 8 + rng() % 3000;  // exercises partial trailing bytes
        params.k = static_cast<std::uint32_t>(1 + rng() % 10);
        params.seeds = {rng(), rng()};
        const auto index = build_index(cells, FixedParams{params});
        const auto bytes = serialize_index(index);
        const auto back = deserialize_index(bytes);
        EXPECT_EQ(back, index);
        EXPECT_EQ(serialize_index(back), bytes);
    }
}

TEST(SerializeIndex, HeaderLayout) {
    BloomParams params;
    params.m = 16;
    params.k = 2;
    params.seeds = {1, 2};
    const auto bytes = serialize_index(build_index(make_list({aps({"a"})}), FixedParams{params}));
    ASSERT_EQ(bytes.size(), 37u + 24u + 2u + 4u);
    EXPECT_EQ(bytes.substr(0, 4), "VCBF");
    EXPECT_EQ(bytes[4], 1);
    EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 16);  // m, little-endian
    EXPECT_EQ(static_cast<unsigned char>(bytes[13]), 2);  // k
    EXPECT_EQ(static_cast<unsigned char>(bytes[17]), 1);  // seed0
    EXPECT_EQ(static_cast<unsigned char>(bytes[25]), 2);  // seed1
    EXPECT_EQ(static_cast<unsigned char>(bytes[33]), 1);  // cell count
}

TEST(SerializeIndex, DecodeErrors) {
    std::mt19937_64 rng(33);
    const auto bytes = serialize_index(build_index(random_cells(rng, 5), TargetFpRate{0.01}));

    auto flipped = bytes;
    flipped[bytes.size() - 10] ^= 0x01;
    EXPECT_EQ(decode_error(flipped), FormatError::Kind::checksum_mismatch);

    auto magic = bytes;
    magic[0] = 'X';
    EXPECT_EQ(decode_error(magic), FormatError::Kind::bad_magic);

    auto version = bytes;
    version[4] = static_cast<char>(255);
    EXPECT_EQ(decode_error(version), FormatError::Kind::unsupported_version);

    EXPECT_EQ(decode_error(bytes.substr(0, bytes.size() - 1)), FormatError::Kind::truncated);
    EXPECT_EQ(decode_error(bytes.substr(0, 20)), FormatError::Kind::truncated);
    EXPECT_EQ(decode_error(bytes + "x"), FormatError::Kind::trailing_bytes);
    EXPECT_EQ(decode_error("VC"), FormatError::Kind::truncated);
}
