#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vcell/ap_id.hpp"

namespace vcell {

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    // Throws DataError when out of range or non-finite.
    static GeoPoint make(double lat, double lon);
    static bool valid(double lat, double lon) noexcept;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// One active scan.
struct Fingerprint {
    std::uint32_t seq = 0;
    std::int64_t timestamp_ms = 0;
    GeoPoint pos;
    ApSet aps;  // sorted, unique

    bool empty() const noexcept { return aps.empty(); }

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct ScanTrace {
    std::string trace_id;
    std::optional<double> speed_hint_kph;
    std::vector<Fingerprint> scans;

    friend bool operator==(const ScanTrace&, const ScanTrace&) = default;
};

enum class LogFormat { jsonl, csv };

struct ParseOptions {
    std::string trace_id;
    std::optional<double> speed_hint_kph;
};

// Reads a scan log. Scans are sorted by timestamp and re-sequenced from 0;
// MAC addresses are canonicalized and deduplicated per scan. Throws
// ParseError (with 1-based line number where one applies).
ScanTrace parse_scan_log(std::istream& in, LogFormat format, const ParseOptions& options = {});
ScanTrace parse_scan_log(std::string_view text, LogFormat format, const ParseOptions& options = {});

// Query logs share the JSONL schema, but only `aps` is required.
std::vector<ApSet> parse_query_log(std::istream& in);

// One JSONL record per scan, in seq order.
void write_scan_log(std::ostream& out, const ScanTrace& trace);
std::string to_jsonl(const ScanTrace& trace);

struct ValidationReport {
    std::size_t scan_count = 0;
    std::size_t unique_ap_count = 0;
    std::vector<std::size_t> empty_scans;
    std::vector<std::string> violations;

    bool invariants_hold() const noexcept { return violations.empty(); }
};

ValidationReport validate_trace(const ScanTrace& trace);

// Union of all scan AP sets.
ApSet ap_universe(const ScanTrace& trace);

}  // namespace vcell
