#pragma once

#include <span>

#include "vcell/scan_model.hpp"

namespace vcell::geo {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

// Non-negative, finite distance.
class Meters {
public:
    constexpr Meters() = default;
    explicit Meters(double value);

    constexpr double value() const noexcept { return value_; }

    friend Meters operator+(Meters a, Meters b) { return Meters(a.value_ + b.value_); }
    Meters& operator+=(Meters other) { return *this = *this + other; }
    friend constexpr auto operator<=>(const Meters&, const Meters&) = default;

private:
    double value_ = 0.0;
};

// Great-circle distance on a sphere of radius kEarthRadiusMeters.
Meters haversine(const GeoPoint& a, const GeoPoint& b);

// Arithmetic mean of latitudes and longitudes. Only meaningful for small
// extents; throws DataError when empty or when the longitudes span 90 degrees
// or more.
GeoPoint centroid(std::span<const GeoPoint> points);

// Sum of consecutive haversine legs; 0 for a single scan.
Meters trace_length(const ScanTrace& trace);

// Initial bearing from a to b, radians clockwise from north.
double initial_bearing(const GeoPoint& a, const GeoPoint& b);

// Point reached by travelling `distance` meters (may be negative) from
// `origin` along `bearing` radians.
GeoPoint destination(const GeoPoint& origin, double bearing, double distance);

// Point at fraction f in [0,1] along the great circle from a to b.
GeoPoint interpolate(const GeoPoint& a, const GeoPoint& b, double f);

}  // namespace vcell::geo
