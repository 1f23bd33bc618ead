#include "vcell/bloom_index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include <boost/crc.hpp>

#include "vcell/error.hpp"

namespace vcell {

namespace {

constexpr char kMagic[4] = {'V', 'C', 'B', 'F'};
constexpr std::size_t kHeaderSize = 4 + 1 + 8 + 4 + 8 + 8 + 4;
constexpr std::size_t kCellHeaderSize = 4 + 8 + 8 + 4;
constexpr std::uint64_t kMaxBits = std::uint64_t{1} << 40;

class Writer {
public:
    template <class T>
    void put(T value) {
        std::uint64_t raw;
        if constexpr (std::is_same_v<T, double>) {
            raw = std::bit_cast<std::uint64_t>(value);
        } else {
            raw = static_cast<std::uint64_t>(value);
        }
        for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<char>((raw >> (8 * i)) & 0xFF));
    }
    void put_bytes(const void* data, std::size_t size) { out_.append(static_cast<const char*>(data), size); }
    std::string& str() { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <class T>
    T get() {
        std::uint64_t raw = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            raw |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += sizeof(T);
        if constexpr (std::is_same_v<T, double>) {
            return std::bit_cast<double>(raw);
        } else {
            return static_cast<T>(raw);
        }
    }
    std::string_view take(std::size_t n) {
        const auto view = bytes_.substr(pos_, n);
        pos_ += n;
        return view;
    }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::uint32_t crc32c(std::string_view bytes) noexcept {
    boost::crc_optimal<32, 0x1EDC6F41, 0xFFFFFFFF, 0xFFFFFFFF, true, true> crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

VcellIndex build_index(const VcellList& vcells, const IndexPolicy& policy) {
    if (vcells.cells.empty()) throw DataError("cannot index an empty vcell list");
    std::size_t n_max = 0;
    for (const auto& cell : vcells.cells) {
        if (cell.aps.empty()) throw DataError("vcell " + std::to_string(cell.vcell_id) + " has no APs");
        n_max = std::max(n_max, cell.aps.size());
    }

    VcellIndex index;
    if (const auto* fixed = std::get_if<FixedParams>(&policy)) {
        index.params = fixed->params;
    } else {
        index.params = size_for(n_max, std::get<TargetFpRate>(policy).p);
    }
    index.params.validate();

    index.entries.reserve(vcells.cells.size());
    for (const auto& cell : vcells.cells) {
        BloomFilter filter(index.params);
        for (const auto& ap : cell.aps) filter.insert(ap);
        index.entries.push_back(
            IndexEntry{cell.vcell_id, cell.anchor, static_cast<std::uint32_t>(cell.aps.size()), std::move(filter)});
    }
    return index;
}

std::string serialize_index(const VcellIndex& index) {
    index.params.validate();
    Writer w;
    w.put_bytes(kMagic, sizeof kMagic);
    w.put<std::uint8_t>(kIndexFormatVersion);
    w.put<std::uint64_t>(index.params.m);
    w.put<std::uint32_t>(index.params.k);
    w.put<std::uint64_t>(index.params.seeds[0]);
    w.put<std::uint64_t>(index.params.seeds[1]);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(index.entries.size()));
    for (const auto& e : index.entries) {
        if (!(e.filter.params() == index.params)) throw DataError("index entries must share the index parameters");
        w.put<std::uint32_t>(e.vcell_id);
        w.put<double>(e.anchor.lat);
        w.put<double>(e.anchor.lon);
        w.put<std::uint32_t>(e.n);
        const auto bits = e.filter.bytes();
        w.put_bytes(bits.data(), bits.size());
    }
    w.put<std::uint32_t>(crc32c(w.str()));
    return std::move(w.str());
}

VcellIndex deserialize_index(std::string_view bytes) {
    using Kind = FormatError::Kind;
    if (bytes.size() < sizeof kMagic) throw FormatError(Kind::truncated, "index file truncated before magic");
    if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw FormatError(Kind::bad_magic, "not a vcell index (bad magic)");
    if (bytes.size() < 5) throw FormatError(Kind::truncated, "index file truncated before version");
    const auto version = static_cast<std::uint8_t>(bytes[4]);
    if (version != kIndexFormatVersion)
        throw FormatError(Kind::unsupported_version, "unsupported index format version " + std::to_string(version));
    if (bytes.size() < kHeaderSize + 4) throw FormatError(Kind::truncated, "index file truncated inside header");

    Reader r(bytes);
    r.take(5);
    VcellIndex index;
    index.params.m = r.get<std::uint64_t>();
    index.params.k = r.get<std::uint32_t>();
    index.params.seeds[0] = r.get<std::uint64_t>();
    index.params.seeds[1] = r.get<std::uint64_t>();
    const auto cell_count = r.get<std::uint32_t>();

    if (index.params.m > kMaxBits) throw FormatError(Kind::invalid_params, "bloom filter size out of range");
    const std::uint64_t filter_bytes = (index.params.m + 7) / 8;
    const auto expected =
        static_cast<unsigned __int128>(cell_count) * (kCellHeaderSize + filter_bytes) + kHeaderSize + 4;
    if (bytes.size() < expected) throw FormatError(Kind::truncated, "index file truncated");
    if (bytes.size() > expected) throw FormatError(Kind::trailing_bytes, "unexpected bytes after index checksum");

    const auto body = bytes.substr(0, bytes.size() - 4);
    Reader tail(bytes.substr(bytes.size() - 4));
    if (tail.get<std::uint32_t>() != crc32c(body)) throw FormatError(Kind::checksum_mismatch, "index checksum mismatch");

    try {
        index.params.validate();
    } catch (const DataError& e) {
        throw FormatError(Kind::invalid_params, e.what());
    }

    index.entries.reserve(cell_count);
    for (std::uint32_t c = 0; c < cell_count; ++c) {
        const auto id = r.get<std::uint32_t>();
        const auto lat = r.get<double>();
        const auto lon = r.get<double>();
        const auto n = r.get<std::uint32_t>();
        const auto raw = r.take(filter_bytes);
        std::vector<std::uint8_t> bits(raw.begin(), raw.end());
        if (const unsigned spare = index.params.m % 8; spare != 0 && (bits.back() >> spare) != 0)
            throw FormatError(Kind::invalid_params, "padding bits set in cell " + std::to_string(id));
        if (!GeoPoint::valid(lat, lon))
            throw FormatError(Kind::invalid_params, "anchor out of range in cell " + std::to_string(id));
        BloomFilter filter(index.params, std::move(bits), n);
        if (filter.popcount() > static_cast<std::uint64_t>(index.params.k) * n)
            throw FormatError(Kind::invalid_params, "cell " + std::to_string(id) + " has more bits set than k * n");
        index.entries.push_back(IndexEntry{id, GeoPoint{lat, lon}, n, std::move(filter)});
    }
    return index;
}

}  // namespace vcell
