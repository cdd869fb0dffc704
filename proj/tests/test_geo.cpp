#include <doctest.h>

#include <cmath>
#include <random>

#include "cvkit/datagen.hpp"
#include "cvkit/geo.hpp"

using namespace cvkit;

namespace {

// Frozen with an independent haversine implementation (Python math module,
// same 6371 km sphere).
constexpr double kNorthEdgeSpanM = 24177.629819756756;
constexpr double kEquatorCellKm2 = 1.2364311664408991;

Timeframe random_frame(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> lat(42.0, 42.5);
    std::uniform_real_distribution<double> lon(-84.0, -83.5);
    Timeframe frame;
    frame.timestamp = 0;
    for (std::size_t i = 0; i < n; ++i) {
        frame.vehicles.push_back(
            BsmRecord{"v" + std::to_string(i), 0, lat(rng), lon(rng), 0.0});
    }
    return frame;
}

}  // namespace

TEST_SUITE("geo") {

TEST_CASE("identical points have zero distance") {
    const GeoPoint p{42.356186, -83.522030};
    CHECK(haversine_distance(p, p) == 0.0);
}

TEST_CASE("north edge of the test rectangle spans ~24.2 km") {
    const double d = haversine_distance({42.356186, -83.522030}, {42.356186, -83.816270});
    CHECK(d == doctest::Approx(kNorthEdgeSpanM).epsilon(1e-9));
}

TEST_CASE("symmetry and non-negativity on random pairs") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lat(-89.0, 89.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    for (int i = 0; i < 200; ++i) {
        const GeoPoint a{lat(rng), lon(rng)};
        const GeoPoint b{lat(rng), lon(rng)};
        const double ab = haversine_distance(a, b);
        const double ba = haversine_distance(b, a);
        CHECK(ab >= 0.0);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    }
}

TEST_CASE("property: triangle inequality on sampled triples") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> lat(-80.0, 80.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    for (int i = 0; i < 500; ++i) {
        const GeoPoint a{lat(rng), lon(rng)};
        const GeoPoint b{lat(rng), lon(rng)};
        const GeoPoint c{lat(rng), lon(rng)};
        const double ab = haversine_distance(a, b);
        const double bc = haversine_distance(b, c);
        const double ac = haversine_distance(a, c);
        CHECK(ac <= (ab + bc) * (1.0 + 1e-6) + 1e-9);
    }
}

TEST_CASE("rectangle area matches the 348 km² test region within 1%") {
    CHECK(rectangle_area_km2(ann_arbor_rect()) == doctest::Approx(348.16).epsilon(0.01));
}

TEST_CASE("small equatorial rectangle area") {
    const GeoRect r(0.0, 0.01, 0.0, 0.01);
    CHECK(rectangle_area_km2(r) == doctest::Approx(kEquatorCellKm2).epsilon(1e-6));
}

TEST_CASE("degenerate rectangles rejected at construction") {
    CHECK_THROWS_AS(GeoRect(42.0, 42.0, -84.0, -83.0), std::invalid_argument);
    CHECK_THROWS_AS(GeoRect(42.0, 43.0, -83.0, -84.0), std::invalid_argument);
    CHECK_THROWS_AS(GeoRect(-91.0, 0.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("distance_matrix: n=1 zero matrix, zero evaluations") {
    std::mt19937_64 rng(2);
    const Timeframe frame = random_frame(rng, 1);
    std::size_t evals = 0;
    const DistanceMatrix m = distance_matrix(frame, [&](const GeoPoint& a, const GeoPoint& b) {
        ++evals;
        return haversine_distance(a, b);
    });
    CHECK(m.size() == 1);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(evals == 0);
}

TEST_CASE("distance_matrix: evaluation count is n(n-1)/2") {
    std::mt19937_64 rng(4);
    for (const std::size_t n : {std::size_t{1}, std::size_t{10}, std::size_t{200}}) {
        const Timeframe frame = random_frame(rng, n);
        std::size_t evals = 0;
        distance_matrix(frame, [&](const GeoPoint& a, const GeoPoint& b) {
            ++evals;
            return haversine_distance(a, b);
        });
        CHECK(evals == n * (n - 1) / 2);
    }
}

TEST_CASE("distance_matrix matches pairwise recomputation") {
    std::mt19937_64 rng(6);
    const Timeframe frame = random_frame(rng, 6);
    const DistanceMatrix m = distance_matrix(frame);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            const GeoPoint a{frame.vehicles[i].latitude, frame.vehicles[i].longitude};
            const GeoPoint b{frame.vehicles[j].latitude, frame.vehicles[j].longitude};
            CHECK(m.at(i, j) == doctest::Approx(haversine_distance(a, b)).epsilon(1e-12));
            CHECK(m.at(i, j) == m.at(j, i));
        }
        CHECK(m.at(i, i) == 0.0);
    }
}

}  // TEST_SUITE
