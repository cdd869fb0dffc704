#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cvkit/bsm.hpp"

namespace cvkit {

// Mean Earth radius. Distances here feed kilometer-scale range thresholds,
// where the spherical model is well inside the tolerance that matters.
inline constexpr double kEarthRadiusM = 6'371'000.0;

struct GeoPoint {
    double latitude = 0.0;   // degrees
    double longitude = 0.0;  // degrees

    bool operator==(const GeoPoint&) const = default;
};

// Axis-aligned geographic rectangle. Antimeridian-crossing rectangles are
// rejected at construction.
class GeoRect {
public:
    GeoRect(double lat_min, double lat_max, double lon_min, double lon_max);

    double lat_min() const { return lat_min_; }
    double lat_max() const { return lat_max_; }
    double lon_min() const { return lon_min_; }
    double lon_max() const { return lon_max_; }

    bool contains(const GeoPoint& p) const;

private:
    double lat_min_, lat_max_, lon_min_, lon_max_;
};

// Symmetric inter-vehicle distance matrix in meters, zero diagonal.
class DistanceMatrix {
public:
    explicit DistanceMatrix(std::size_t n) : n_(n), cells_(n * n, 0.0) {}

    std::size_t size() const { return n_; }

    double at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

    void set_symmetric(std::size_t i, std::size_t j, double meters) {
        cells_[i * n_ + j] = meters;
        cells_[j * n_ + i] = meters;
    }

private:
    std::size_t n_;
    std::vector<double> cells_;
};

// Great-circle distance in meters on the kEarthRadiusM sphere.
double haversine_distance(const GeoPoint& a, const GeoPoint& b);

// Rectangle area in square kilometers: east-west haversine span at the mean
// latitude times the north-south haversine span.
double rectangle_area_km2(const GeoRect& r);

// Fills the matrix with one distance evaluation per unordered pair, n(n-1)/2
// total; the mirror entry comes from symmetry. The functor overload exists so
// tests can count evaluations.
template <typename DistFn>
DistanceMatrix distance_matrix(const Timeframe& frame, DistFn&& dist) {
    const std::size_t n = frame.vehicles.size();
    DistanceMatrix m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const GeoPoint a{frame.vehicles[i].latitude, frame.vehicles[i].longitude};
        for (std::size_t j = i + 1; j < n; ++j) {
            const GeoPoint b{frame.vehicles[j].latitude, frame.vehicles[j].longitude};
            m.set_symmetric(i, j, dist(a, b));
        }
    }
    return m;
}

inline DistanceMatrix distance_matrix(const Timeframe& frame) {
    return distance_matrix(frame, [](const GeoPoint& a, const GeoPoint& b) {
        return haversine_distance(a, b);
    });
}

}  // namespace cvkit
