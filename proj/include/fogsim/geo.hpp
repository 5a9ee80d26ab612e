#pragma once

#include <optional>
#include <string>

namespace fogsim {

inline constexpr double kEarthRadiusKm = 6371.0;

struct Location {
    double latitude = 0.0;   // degrees, [-90, 90]
    double longitude = 0.0;  // degrees, [-180, 180]
    std::optional<int> block;

    bool valid() const {
        return latitude >= -90.0 && latitude <= 90.0 &&
               longitude >= -180.0 && longitude <= 180.0;
    }
};

// Great-circle distance in km, mean earth radius 6371.0 km.
double haversine_km(const Location& a, const Location& b);

// Moves `from` by `meters` along compass heading `heading_deg` (0 = north,
// 90 = east) using the local-tangent-plane approximation. Accurate to well
// under 0.01% at city scale.
Location step_meters(const Location& from, double heading_deg, double meters);

struct BoundingBox {
    double lat_min = 0.0, lat_max = 0.0;
    double lon_min = 0.0, lon_max = 0.0;

    bool degenerate() const { return lat_min >= lat_max || lon_min >= lon_max; }
    bool contains(const Location& l) const {
        return l.latitude >= lat_min && l.latitude <= lat_max &&
               l.longitude >= lon_min && l.longitude <= lon_max;
    }
};

} // namespace fogsim
