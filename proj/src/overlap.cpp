#include "vcell/overlap.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "vcell/error.hpp"

namespace vcell {

OverlapNorm parse_overlap_norm(std::string_view name) {
    if (name == "min") return OverlapNorm::min;
    if (name == "union") return OverlapNorm::union_;
    if (name == "absolute") return OverlapNorm::absolute;
    throw DataError("unknown overlap normalization '" + std::string(name) + "' (expected min, union or absolute)");
}

std::string_view to_string(OverlapNorm norm) {
    switch (norm) {
        case OverlapNorm::min: return "min";
        case OverlapNorm::union_: return "union";
        case OverlapNorm::absolute: return "absolute";
    }
    return "min";
}

OverlapCondition::OverlapCondition(double lo, double hi, OverlapNorm norm) : lo_(lo), hi_(hi), norm_(norm) {
    const bool upper_ok = norm == OverlapNorm::absolute ? std::isfinite(hi) : hi <= 1.0;
    if (!(lo >= 0.0 && lo < hi && upper_ok))
        throw DataError(norm == OverlapNorm::absolute ? "overlap condition requires 0 <= lo < hi"
                                                      : "overlap condition requires 0 <= lo < hi <= 1");
}

double overlap_fraction(const Vcell& a, const Vcell& b, OverlapNorm norm) {
    const auto shared = static_cast<double>(intersection_size(a.aps, b.aps));
    switch (norm) {
        case OverlapNorm::min: {
            const auto denom = static_cast<double>(std::min(a.aps.size(), b.aps.size()));
            return denom > 0 ? shared / denom : 0.0;
        }
        case OverlapNorm::union_: {
            const auto denom = static_cast<double>(a.aps.size() + b.aps.size()) - shared;
            return denom > 0 ? shared / denom : 0.0;
        }
        case OverlapNorm::absolute: return shared;
    }
    return 0.0;
}

std::vector<OverlapRecord> find_overlaps(const VcellList& vcells, const OverlapCondition& oc, std::size_t window) {
    if (window == 0) throw DataError("overlap window must be positive");
    std::vector<OverlapRecord> out;
    const auto& cells = vcells.cells;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::size_t last = window >= cells.size() - i ? cells.size() - 1 : i + window;
        for (std::size_t j = i + 1; j <= last; ++j) {
            const double fraction = overlap_fraction(cells[i], cells[j], oc.norm());
            if (!oc.contains(fraction)) continue;
            ApSet shared = set_intersection(cells[i].aps, cells[j].aps);
            if (shared.empty()) continue;
            out.push_back(OverlapRecord{cells[i].vcell_id, cells[j].vcell_id, std::move(shared), fraction});
        }
    }
    return out;
}

std::vector<OverlapRecord> overlaps_of(const std::vector<OverlapRecord>& records, std::uint32_t vcell_id) {
    std::vector<OverlapRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [vcell_id](const OverlapRecord& r) { return r.a == vcell_id || r.b == vcell_id; });
    return out;
}

std::string to_json(const OverlapSet& set, int indent) {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    doc["oc"] = {{"lo", set.oc.lo()}, {"hi", set.oc.hi()}, {"norm", std::string(to_string(set.oc.norm()))}};
    if (set.window == kUnboundedWindow)
        doc["window"] = nullptr;
    else
        doc["window"] = set.window;
    auto& list = doc["overlaps"] = ojson::array();
    for (const auto& r : set.overlaps) {
        ojson rec{{"a", r.a}, {"b", r.b}, {"fraction", r.fraction}};
        auto& shared = rec["shared"] = ojson::array();
        for (const auto& ap : r.shared) shared.push_back(ap.str());
        list.push_back(std::move(rec));
    }
    return doc.dump(indent) + "\n";
}

OverlapSet overlaps_from_json(const std::string& text) {
    using json = nlohmann::json;
    try {
        const json doc = json::parse(text);
        const auto& oc = doc.at("oc");
        OverlapSet out{OverlapCondition(oc.at("lo").get<double>(), oc.at("hi").get<double>(),
                                        parse_overlap_norm(oc.value("norm", std::string("min")))),
                       doc.at("window").is_null() ? kUnboundedWindow : doc.at("window").get<std::size_t>(),
                       {}};
        for (const auto& r : doc.at("overlaps")) {
            OverlapRecord rec;
            rec.a = r.at("a").get<std::uint32_t>();
            rec.b = r.at("b").get<std::uint32_t>();
            rec.fraction = r.at("fraction").get<double>();
            for (const auto& ap : r.at("shared")) rec.shared.push_back(ApId::parse(ap.get<std::string>()));
            normalize(rec.shared);
            if (rec.a >= rec.b) throw DataError("overlap record requires a < b");
            out.overlaps.push_back(std::move(rec));
        }
        return out;
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid overlap JSON: ") + e.what());
    }
}

}  // namespace vcell
