#include "fogsim/geo.hpp"

#include <cmath>

namespace fogsim {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
}

double haversine_km(const Location& a, const Location& b) {
    double phi1 = a.latitude * kDegToRad;
    double phi2 = b.latitude * kDegToRad;
    double dphi = (b.latitude - a.latitude) * kDegToRad;
    double dlam = (b.longitude - a.longitude) * kDegToRad;
    double s = std::sin(dphi / 2.0);
    double t = std::sin(dlam / 2.0);
    double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

Location step_meters(const Location& from, double heading_deg, double meters) {
    double theta = heading_deg * kDegToRad;
    double north_m = std::cos(theta) * meters;
    double east_m = std::sin(theta) * meters;
    double dlat = (north_m / 1000.0) / kEarthRadiusKm / kDegToRad;
    double coslat = std::cos(from.latitude * kDegToRad);
    double dlon = (east_m / 1000.0) / (kEarthRadiusKm * coslat) / kDegToRad;
    Location out = from;
    out.latitude = from.latitude + dlat;
    out.longitude = from.longitude + dlon;
    return out;
}

} // namespace fogsim
