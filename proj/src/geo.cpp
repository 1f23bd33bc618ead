#include "vcell/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vcell/error.hpp"

namespace vcell::geo {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double wrap_lon(double lon) {
    lon = std::fmod(lon + 180.0, 360.0);
    if (lon < 0) lon += 360.0;
    return lon - 180.0;
}

}  // namespace

Meters::Meters(double value) : value_(value) {
    if (!std::isfinite(value) || value < 0.0) throw DataError("distance must be finite and non-negative");
}

Meters haversine(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = a.lat * kDeg;
    const double phi2 = b.lat * kDeg;
    const double dphi = (b.lat - a.lat) * kDeg;
    const double dlambda = (b.lon - a.lon) * kDeg;
    const double s1 = std::sin(dphi / 2);
    const double s2 = std::sin(dlambda / 2);
    const double h = std::clamp(s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2, 0.0, 1.0);
    return Meters(2.0 * kEarthRadiusMeters * std::asin(std::sqrt(h)));
}

GeoPoint centroid(std::span<const GeoPoint> points) {
    if (points.empty()) throw DataError("centroid of an empty point list");
    const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                              [](const GeoPoint& a, const GeoPoint& b) { return a.lon < b.lon; });
    if (hi->lon - lo->lon >= 90.0) throw DataError("centroid: points span 90 degrees of longitude or more");
    double lat = 0.0;
    double lon = 0.0;
    for (const auto& p : points) {
        lat += p.lat;
        lon += p.lon;
    }
    const auto n = static_cast<double>(points.size());
    return GeoPoint{lat / n, lon / n};
}

Meters trace_length(const ScanTrace& trace) {
    Meters total;
    for (std::size_t i = 1; i < trace.scans.size(); ++i) total += haversine(trace.scans[i - 1].pos, trace.scans[i].pos);
    return total;
}

double initial_bearing(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = a.lat * kDeg;
    const double phi2 = b.lat * kDeg;
    const double dlambda = (b.lon - a.lon) * kDeg;
    const double y = std::sin(dlambda) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
    return std::atan2(y, x);
}

GeoPoint destination(const GeoPoint& origin, double bearing, double distance) {
    const double delta = distance / kEarthRadiusMeters;
    const double phi1 = origin.lat * kDeg;
    const double lambda1 = origin.lon * kDeg;
    const double sin_phi2 =
        std::clamp(std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(bearing), -1.0, 1.0);
    const double phi2 = std::asin(sin_phi2);
    const double lambda2 = lambda1 + std::atan2(std::sin(bearing) * std::sin(delta) * std::cos(phi1),
                                                std::cos(delta) - std::sin(phi1) * sin_phi2);
    return GeoPoint{phi2 / kDeg, wrap_lon(lambda2 / kDeg)};
}

GeoPoint interpolate(const GeoPoint& a, const GeoPoint& b, double f) {
    const double d = haversine(a, b).value() / kEarthRadiusMeters;
    if (d < 1e-15) return a;
    const double phi1 = a.lat * kDeg, lambda1 = a.lon * kDeg;
    const double phi2 = b.lat * kDeg, lambda2 = b.lon * kDeg;
    const double wa = std::sin((1 - f) * d) / std::sin(d);
    const double wb = std::sin(f * d) / std::sin(d);
    const double x = wa * std::cos(phi1) * std::cos(lambda1) + wb * std::cos(phi2) * std::cos(lambda2);
    const double y = wa * std::cos(phi1) * std::sin(lambda1) + wb * std::cos(phi2) * std::sin(lambda2);
    const double z = wa * std::sin(phi1) + wb * std::sin(phi2);
    return GeoPoint{std::atan2(z, std::hypot(x, y)) / kDeg, std::atan2(y, x) / kDeg};
}

}  // namespace vcell::geo
