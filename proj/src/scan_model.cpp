#include "vcell/scan_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vcell/error.hpp"

namespace vcell {

using json = nlohmann::json;

GeoPoint GeoPoint::make(double lat, double lon) {
    if (!valid(lat, lon)) {
        std::ostringstream msg;
        msg << "coordinate out of range: lat=" << lat << " lon=" << lon;
        throw DataError(msg.str());
    }
    return GeoPoint{lat, lon};
}

bool GeoPoint::valid(double lat, double lon) noexcept {
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 && lon >= -180.0 &&
           lon <= 180.0;
}

namespace {

struct RawScan {
    std::int64_t t = 0;
    GeoPoint pos;
    ApSet aps;
    std::size_t line = 0;
};

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

// Strict UTF-8 check (no overlongs, no surrogates).
bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > s.size()) return false;
        for (std::size_t j = 1; j < len; ++j) {
            const auto cc = static_cast<unsigned char>(s[i + j]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF))
            return false;
        i += len;
    }
    return true;
}

GeoPoint checked_point(double lat, double lon, std::size_t line) {
    if (!GeoPoint::valid(lat, lon)) {
        std::ostringstream msg;
        msg << "coordinate out of range (lat=" << lat << ", lon=" << lon << ")";
        throw ParseError(line, msg.str());
    }
    return GeoPoint{lat, lon};
}

ApId checked_ap(std::string_view text, std::size_t line) {
    try {
        return ApId::parse(text);
    } catch (const DataError& e) {
        throw ParseError(line, e.what());
    }
}

json parse_json_line(const std::string& line, std::size_t lineno) {
    json rec;
    try {
        rec = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(lineno, "expected a JSON object");
    return rec;
}

ApSet json_aps(const json& rec, std::size_t lineno) {
    const auto it = rec.find("aps");
    if (it == rec.end() || !it->is_array()) throw ParseError(lineno, "field 'aps' must be an array of MAC strings");
    ApSet aps;
    aps.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_string()) throw ParseError(lineno, "field 'aps' must be an array of MAC strings");
        aps.push_back(checked_ap(v.get_ref<const std::string&>(), lineno));
    }
    normalize(aps);
    return aps;
}

double json_number(const json& rec, const char* key, std::size_t lineno) {
    const auto it = rec.find(key);
    if (it == rec.end() || !it->is_number()) throw ParseError(lineno, std::string("field '") + key + "' must be a number");
    return it->get<double>();
}

std::vector<RawScan> read_jsonl(std::istream& in) {
    std::vector<RawScan> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;
        if (!valid_utf8(line)) throw ParseError(lineno, "input is not valid UTF-8");
        const json rec = parse_json_line(line, lineno);

        RawScan scan;
        scan.line = lineno;
        const auto t = rec.find("t");
        if (t == rec.end() || !(t->is_number_integer() || t->is_number_unsigned()))
            throw ParseError(lineno, "field 't' must be an integer (epoch milliseconds)");
        if (t->is_number_unsigned() && t->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
            throw ParseError(lineno, "field 't' out of range");
        scan.t = t->get<std::int64_t>();
        scan.pos = checked_point(json_number(rec, "lat", lineno), json_number(rec, "lon", lineno), lineno);
        scan.aps = json_aps(rec, lineno);
        out.push_back(std::move(scan));
    }
    return out;
}

// RFC-4180 record reader. Returns false at end of input. `lineno` is the
// 1-based line on which the returned record starts.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& lineno, std::size_t& next_line) {
    fields.clear();
    int c = in.peek();
    if (c == std::char_traits<char>::eof()) return false;
    lineno = next_line;

    std::string field;
    bool quoted = false;
    bool field_started_quoted = false;
    while (true) {
        c = in.get();
        if (c == std::char_traits<char>::eof()) {
            if (quoted) throw ParseError(lineno, "unterminated quoted field");
            fields.push_back(std::move(field));
            return true;
        }
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++next_line;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"') {
            if (!field.empty() || field_started_quoted) throw ParseError(lineno, "stray quote inside unquoted field");
            quoted = true;
            field_started_quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
            field_started_quoted = false;
        } else if (ch == '\r') {
            if (in.peek() == '\n') in.get();
            ++next_line;
            fields.push_back(std::move(field));
            return true;
        } else if (ch == '\n') {
            ++next_line;
            fields.push_back(std::move(field));
            return true;
        } else {
            if (field_started_quoted) throw ParseError(lineno, "characters after closing quote");
            field.push_back(ch);
        }
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <class T>
T csv_number(std::string_view text, const char* name, std::size_t lineno) {
    text = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ParseError(lineno, std::string("field '") + name + "' is not a valid number: '" + std::string(text) + "'");
    return value;
}

std::vector<RawScan> read_csv(std::istream& in) {
    std::vector<std::string> fields;
    std::size_t lineno = 0;
    std::size_t next_line = 1;
    if (!read_csv_record(in, fields, lineno, next_line)) throw ParseError(1, "empty CSV input; expected header 't,lat,lon,bssid'");
    for (const auto& f : fields)
        if (!valid_utf8(f)) throw ParseError(lineno, "input is not valid UTF-8");
    if (fields.size() != 4 || trim(fields[0]) != "t" || trim(fields[1]) != "lat" || trim(fields[2]) != "lon" ||
        trim(fields[3]) != "bssid")
        throw ParseError(lineno, "expected header 't,lat,lon,bssid'");

    std::map<std::int64_t, RawScan> by_time;
    while (read_csv_record(in, fields, lineno, next_line)) {
        if (fields.size() == 1 && is_blank(fields[0])) continue;
        for (const auto& f : fields)
            if (!valid_utf8(f)) throw ParseError(lineno, "input is not valid UTF-8");
        if (fields.size() != 4)
            throw ParseError(lineno, "expected 4 fields, found " + std::to_string(fields.size()));
        const auto t = csv_number<std::int64_t>(fields[0], "t", lineno);
        const GeoPoint pos =
            checked_point(csv_number<double>(fields[1], "lat", lineno), csv_number<double>(fields[2], "lon", lineno), lineno);
        auto [it, inserted] = by_time.try_emplace(t);
        RawScan& scan = it->second;
        if (inserted) {
            scan.t = t;
            scan.pos = pos;
            scan.line = lineno;
        } else if (!(scan.pos == pos)) {
            throw ParseError(lineno, "rows with t=" + std::to_string(t) + " disagree on position (first seen on line " +
                                         std::to_string(scan.line) + ")");
        }
        const auto bssid = trim(fields[3]);
        if (!bssid.empty()) scan.aps.push_back(checked_ap(bssid, lineno));
    }

    std::vector<RawScan> out;
    out.reserve(by_time.size());
    for (auto& [t, scan] : by_time) {
        normalize(scan.aps);
        out.push_back(std::move(scan));
    }
    return out;
}

ScanTrace assemble(std::vector<RawScan> raw, const ParseOptions& options) {
    if (raw.empty()) throw ParseError(0, "scan log contains no scans");
    if (options.speed_hint_kph && !(*options.speed_hint_kph > 0.0 && std::isfinite(*options.speed_hint_kph)))
        throw DataError("speed hint must be a positive number");

    std::stable_sort(raw.begin(), raw.end(), [](const RawScan& a, const RawScan& b) { return a.t < b.t; });

    std::string offenders;
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].t != raw[i - 1].t) continue;
        if (!offenders.empty()) offenders += "; ";
        offenders += "t=" + std::to_string(raw[i].t) + " (lines " + std::to_string(raw[i - 1].line) + ", " +
                     std::to_string(raw[i].line) + ")";
    }
    if (!offenders.empty()) throw ParseError(0, "duplicate timestamps: " + offenders);

    ScanTrace trace;
    trace.trace_id = options.trace_id;
    trace.speed_hint_kph = options.speed_hint_kph;
    trace.scans.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        trace.scans.push_back(Fingerprint{static_cast<std::uint32_t>(i), raw[i].t, raw[i].pos, std::move(raw[i].aps)});
    }
    return trace;
}

}  // namespace

ScanTrace parse_scan_log(std::istream& in, LogFormat format, const ParseOptions& options) {
    auto raw = format == LogFormat::jsonl ? read_jsonl(in) : read_csv(in);
    return assemble(std::move(raw), options);
}

ScanTrace parse_scan_log(std::string_view text, LogFormat format, const ParseOptions& options) {
    std::istringstream in{std::string(text)};
    return parse_scan_log(in, format, options);
}

std::vector<ApSet> parse_query_log(std::istream& in) {
    std::vector<ApSet> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;
        if (!valid_utf8(line)) throw ParseError(lineno, "input is not valid UTF-8");
        out.push_back(json_aps(parse_json_line(line, lineno), lineno));
    }
    return out;
}

void write_scan_log(std::ostream& out, const ScanTrace& trace) {
    for (const auto& scan : trace.scans) {
        nlohmann::ordered_json rec;
        rec["t"] = scan.timestamp_ms;
        rec["lat"] = scan.pos.lat;
        rec["lon"] = scan.pos.lon;
        auto& aps = rec["aps"] = nlohmann::ordered_json::array();
        for (const auto& ap : scan.aps) aps.push_back(ap.str());
        out << rec.dump() << '\n';
    }
}

std::string to_jsonl(const ScanTrace& trace) {
    std::ostringstream out;
    write_scan_log(out, trace);
    return out.str();
}

ValidationReport validate_trace(const ScanTrace& trace) {
    ValidationReport report;
    report.scan_count = trace.scans.size();
    report.unique_ap_count = ap_universe(trace).size();
    if (trace.scans.empty()) report.violations.emplace_back("trace has no scans");
    for (std::size_t i = 0; i < trace.scans.size(); ++i) {
        const auto& scan = trace.scans[i];
        if (scan.empty()) report.empty_scans.push_back(i);
        if (scan.seq != i)
            report.violations.push_back("scan " + std::to_string(i) + ": seq " + std::to_string(scan.seq) +
                                        " breaks contiguous numbering");
        if (i > 0 && scan.timestamp_ms <= trace.scans[i - 1].timestamp_ms)
            report.violations.push_back("scan " + std::to_string(i) + ": timestamp not strictly increasing");
        if (!GeoPoint::valid(scan.pos.lat, scan.pos.lon))
            report.violations.push_back("scan " + std::to_string(i) + ": coordinate out of range");
        if (std::adjacent_find(scan.aps.begin(), scan.aps.end(), [](const ApId& a, const ApId& b) { return !(a < b); }) !=
            scan.aps.end())
            report.violations.push_back("scan " + std::to_string(i) + ": AP list not sorted and duplicate-free");
    }
    if (!trace.scans.empty() && report.empty_scans.size() == trace.scans.size())
        report.violations.emplace_back("every scan is empty; no vcell can be formed");
    return report;
}

ApSet ap_universe(const ScanTrace& trace) {
    ApSet all;
    for (const auto& scan : trace.scans) all.insert(all.end(), scan.aps.begin(), scan.aps.end());
    normalize(all);
    return all;
}

}  // namespace vcell
