#include "cvkit/geo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvkit {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

GeoRect::GeoRect(double lat_min, double lat_max, double lon_min, double lon_max)
    : lat_min_(lat_min), lat_max_(lat_max), lon_min_(lon_min), lon_max_(lon_max) {
    if (!(lat_min < lat_max) || !(lon_min < lon_max)) {
        throw std::invalid_argument("GeoRect: min bounds must be strictly below max bounds");
    }
    if (lat_min < -90.0 || lat_max > 90.0 || lon_min < -180.0 || lon_max > 180.0) {
        throw std::invalid_argument("GeoRect: bounds outside WGS-84 range");
    }
}

bool GeoRect::contains(const GeoPoint& p) const {
    return p.latitude >= lat_min_ && p.latitude <= lat_max_ &&
           p.longitude >= lon_min_ && p.longitude <= lon_max_;
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = a.latitude * kDegToRad;
    const double lat2 = b.latitude * kDegToRad;
    const double dlat = (b.latitude - a.latitude) * kDegToRad;
    const double dlon = (b.longitude - a.longitude) * kDegToRad;

    const double sin_dlat = std::sin(dlat / 2.0);
    const double sin_dlon = std::sin(dlon / 2.0);
    const double h = sin_dlat * sin_dlat + std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

double rectangle_area_km2(const GeoRect& r) {
    const double mean_lat = (r.lat_min() + r.lat_max()) / 2.0;
    const double east_west =
        haversine_distance({mean_lat, r.lon_min()}, {mean_lat, r.lon_max()});
    const double north_south =
        haversine_distance({r.lat_min(), r.lon_min()}, {r.lat_max(), r.lon_min()});
    return east_west * north_south / 1.0e6;
}

}  // namespace cvkit
