#pragma once

#include <string>

#include "vcell/overlap.hpp"
#include "vcell/vcell_core.hpp"

namespace vcell {

// FeatureCollection with one Feature per vcell (GeometryCollection of the
// anchor Point and a MultiPoint of member scan positions) and, when given,
// one LineString Feature per overlap record joining the two anchors.
// Coordinates are [lon, lat].
std::string to_geojson(const VcellList& vcells, const OverlapSet* overlaps = nullptr, int indent = 2);

}  // namespace vcell
