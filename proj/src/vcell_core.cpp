#include "vcell/vcell_core.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "vcell/error.hpp"

namespace vcell {

CellCondition::CellCondition(double cc) : cc_(cc) {
    if (!(cc >= 0.0 && cc <= 1.0)) throw DataError("cell condition must lie in [0, 1]");
}

namespace {

Vcell seed_cell(const Fingerprint& scan, std::uint32_t id) {
    Vcell cell;
    cell.vcell_id = id;
    cell.first_seq = scan.seq;
    cell.last_seq = scan.seq;
    cell.aps = scan.aps;
    cell.members.push_back(MemberScan{scan.seq, scan.pos, static_cast<std::uint32_t>(scan.aps.size())});
    return cell;
}

void finish_cell(Vcell& cell) {
    std::vector<GeoPoint> pts;
    pts.reserve(cell.members.size());
    for (const auto& m : cell.members) pts.push_back(m.pos);
    cell.anchor = geo::centroid(pts);
}

}  // namespace

VcellList form_vcells(const ScanTrace& trace, CellCondition cc) {
    VcellList out;
    out.trace_id = trace.trace_id;
    out.cc = cc;

    auto scan = std::find_if(trace.scans.begin(), trace.scans.end(), [](const Fingerprint& s) { return !s.empty(); });
    if (scan == trace.scans.end()) throw DataError("trace '" + trace.trace_id + "' has no non-empty scans");

    Vcell current = seed_cell(*scan, 0);
    for (++scan; scan != trace.scans.end(); ++scan) {
        if (scan->empty()) continue;
        const auto shared = static_cast<double>(intersection_size(scan->aps, current.aps));
        if (shared >= cc.value() * static_cast<double>(current.aps.size())) {
            current.aps = set_union(current.aps, scan->aps);
            current.last_seq = scan->seq;
            current.members.push_back(MemberScan{scan->seq, scan->pos, static_cast<std::uint32_t>(scan->aps.size())});
        } else {
            finish_cell(current);
            const auto next_id = current.vcell_id + 1;
            out.cells.push_back(std::move(current));
            current = seed_cell(*scan, next_id);
        }
    }
    finish_cell(current);
    out.cells.push_back(std::move(current));
    return out;
}

std::uint32_t assign_scan(const VcellList& vcells, std::uint32_t seq) {
    const auto it = std::upper_bound(vcells.cells.begin(), vcells.cells.end(), seq,
                                     [](std::uint32_t s, const Vcell& c) { return s < c.first_seq; });
    if (it == vcells.cells.begin()) throw DataError("scan " + std::to_string(seq) + " is not covered by any vcell");
    const Vcell& cell = *std::prev(it);
    const bool member = std::ranges::binary_search(cell.members, seq, {}, &MemberScan::seq);
    if (!member) {
        if (seq > vcells.cells.back().last_seq)
            throw DataError("scan " + std::to_string(seq) + " is beyond the last vcell");
        throw DataError("scan " + std::to_string(seq) + " is an empty scan and belongs to no vcell");
    }
    return cell.vcell_id;
}

CellStats vcell_stats(const VcellList& vcells) {
    CellStats stats;
    stats.cell_count = vcells.cells.size();
    std::size_t sightings = 0;
    std::size_t scans = 0;
    std::size_t aps = 0;
    for (const auto& cell : vcells.cells) {
        stats.ap_counts.push_back(cell.aps.size());
        stats.scan_counts.push_back(cell.members.size());
        double diameter = 0.0;
        for (std::size_t i = 0; i < cell.members.size(); ++i)
            for (std::size_t j = i + 1; j < cell.members.size(); ++j)
                diameter = std::max(diameter, geo::haversine(cell.members[i].pos, cell.members[j].pos).value());
        stats.diameters_m.push_back(diameter);
        for (const auto& m : cell.members) sightings += m.ap_count;
        scans += cell.members.size();
        aps += cell.aps.size();
    }
    if (scans > 0) stats.aps_per_fingerprint = static_cast<double>(sightings) / static_cast<double>(scans);
    if (stats.cell_count > 0) stats.mean_aps_per_cell = static_cast<double>(aps) / static_cast<double>(stats.cell_count);
    return stats;
}

std::string to_json(const VcellList& vcells, int indent) {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    doc["trace_id"] = vcells.trace_id;
    doc["cc"] = vcells.cc.value();
    auto& cells = doc["cells"] = ojson::array();
    for (const auto& cell : vcells.cells) {
        ojson c;
        c["vcell_id"] = cell.vcell_id;
        c["first_seq"] = cell.first_seq;
        c["last_seq"] = cell.last_seq;
        c["anchor"] = {{"lat", cell.anchor.lat}, {"lon", cell.anchor.lon}};
        auto& aps = c["aps"] = ojson::array();
        for (const auto& ap : cell.aps) aps.push_back(ap.str());
        auto& scans = c["scans"] = ojson::array();
        for (const auto& m : cell.members)
            scans.push_back(ojson{{"seq", m.seq}, {"lat", m.pos.lat}, {"lon", m.pos.lon}, {"n_aps", m.ap_count}});
        cells.push_back(std::move(c));
    }
    return doc.dump(indent) + "\n";
}

VcellList vcells_from_json(const std::string& text) {
    using json = nlohmann::json;
    try {
        const json doc = json::parse(text);
        VcellList out;
        out.trace_id = doc.at("trace_id").get<std::string>();
        out.cc = CellCondition(doc.at("cc").get<double>());
        for (const auto& c : doc.at("cells")) {
            Vcell cell;
            cell.vcell_id = c.at("vcell_id").get<std::uint32_t>();
            cell.first_seq = c.at("first_seq").get<std::uint32_t>();
            cell.last_seq = c.at("last_seq").get<std::uint32_t>();
            cell.anchor = GeoPoint::make(c.at("anchor").at("lat").get<double>(), c.at("anchor").at("lon").get<double>());
            for (const auto& ap : c.at("aps")) cell.aps.push_back(ApId::parse(ap.get<std::string>()));
            normalize(cell.aps);
            if (const auto s = c.find("scans"); s != c.end()) {
                for (const auto& m : *s)
                    cell.members.push_back(MemberScan{m.at("seq").get<std::uint32_t>(),
                                                      GeoPoint::make(m.at("lat").get<double>(), m.at("lon").get<double>()),
                                                      m.at("n_aps").get<std::uint32_t>()});
            }
            if (cell.aps.empty()) throw DataError("vcell " + std::to_string(cell.vcell_id) + " has no APs");
            if (cell.first_seq > cell.last_seq)
                throw DataError("vcell " + std::to_string(cell.vcell_id) + " has an inverted scan range");
            if (cell.vcell_id != out.cells.size())
                throw DataError("vcell ids must be consecutive from 0 (found " + std::to_string(cell.vcell_id) + ")");
            if (!out.cells.empty() && cell.first_seq <= out.cells.back().last_seq)
                throw DataError("vcell " + std::to_string(cell.vcell_id) + " overlaps the previous scan range");
            out.cells.push_back(std::move(cell));
        }
        return out;
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid vcell JSON: ") + e.what());
    }
}

}  // namespace vcell
