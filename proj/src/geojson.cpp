#include "vcell/geojson.hpp"

#include <nlohmann/json.hpp>

#include "vcell/error.hpp"

namespace vcell {

using ojson = nlohmann::ordered_json;

namespace {

ojson position(const GeoPoint& p) { return ojson::array({p.lon, p.lat}); }

}  // namespace

std::string to_geojson(const VcellList& vcells, const OverlapSet* overlaps, int indent) {
    ojson doc;
    doc["type"] = "FeatureCollection";
    auto& features = doc["features"] = ojson::array();

    for (const auto& cell : vcells.cells) {
        auto members = ojson::array();
        for (const auto& m : cell.members) members.push_back(position(m.pos));
        ojson feature;
        feature["type"] = "Feature";
        feature["geometry"] = {{"type", "GeometryCollection"},
                               {"geometries",
                                ojson::array({ojson{{"type", "Point"}, {"coordinates", position(cell.anchor)}},
                                              ojson{{"type", "MultiPoint"}, {"coordinates", members}}})}};
        feature["properties"] = {{"kind", "vcell"},
                                 {"vcell_id", cell.vcell_id},
                                 {"first_seq", cell.first_seq},
                                 {"last_seq", cell.last_seq},
                                 {"n_aps", cell.aps.size()},
                                 {"n_scans", cell.members.size()}};
        features.push_back(std::move(feature));
    }

    if (overlaps) {
        for (const auto& r : overlaps->overlaps) {
            if (r.a >= vcells.cells.size() || r.b >= vcells.cells.size())
                throw DataError("overlap record references a vcell missing from the cell list");
            ojson feature;
            feature["type"] = "Feature";
            feature["geometry"] = {
                {"type", "LineString"},
                {"coordinates", ojson::array({position(vcells.cells[r.a].anchor), position(vcells.cells[r.b].anchor)})}};
            feature["properties"] = {
                {"kind", "overlap"}, {"a", r.a}, {"b", r.b}, {"fraction", r.fraction}, {"shared_count", r.shared.size()}};
            features.push_back(std::move(feature));
        }
    }
    return doc.dump(indent) + "\n";
}

}  // namespace vcell
