#include <doctest.h>

#include "fogsim/geo.hpp"
#include "fogsim/rng.hpp"

#include "helpers.hpp"

#include <cmath>

using namespace fogsim;
using namespace testutil;

namespace {

const Location kMelbourne{-37.8136, 144.9631, std::nullopt};
const Location kSydney{-33.8688, 151.2093, std::nullopt};
const Location kLondon{51.5074, -0.1278, std::nullopt};
const Location kNewYork{40.7128, -74.0060, std::nullopt};
const Location kTokyo{35.6762, 139.6503, std::nullopt};
const Location kAuckland{-36.8509, 174.7645, std::nullopt};

} // namespace

TEST_CASE("great-circle distance matches the published Melbourne-Sydney figure") {
    double d = haversine_km(kMelbourne, kSydney);
    // ~713 km, +/-0.5%
    CHECK(d == doctest::Approx(713.0).epsilon(0.005));
}

TEST_CASE("distance agrees with an independent spherical formula on city pairs") {
    const Location* cities[] = {&kMelbourne, &kSydney, &kLondon,
                                &kNewYork,   &kTokyo,  &kAuckland};
    for (const Location* a : cities)
        for (const Location* b : cities) {
            if (a == b) continue;  // law of cosines is ill-conditioned at zero range
            double got = haversine_km(*a, *b);
            double want = law_of_cosines_km(*a, *b);
            CHECK(got == doctest::Approx(want).epsilon(1e-6));
        }
}

TEST_CASE("distance is symmetric and zero on identical points") {
    RngStream rng(5, "geo");
    for (int i = 0; i < 1000; ++i) {
        Location a{rng.uniform(-80.0, 80.0), rng.uniform(-179.0, 179.0), std::nullopt};
        Location b{rng.uniform(-80.0, 80.0), rng.uniform(-179.0, 179.0), std::nullopt};
        CHECK(haversine_km(a, b) == doctest::Approx(haversine_km(b, a)).epsilon(1e-12));
        CHECK(haversine_km(a, a) == doctest::Approx(0.0));
        CHECK(haversine_km(a, b) >= 0.0);
    }
}

TEST_CASE("stepping north keeps the longitude fixed and covers the distance") {
    Location start{-37.81, 144.96, std::nullopt};
    Location moved = step_meters(start, 0.0, 150.0);
    CHECK(moved.longitude == doctest::Approx(start.longitude).epsilon(1e-12));
    CHECK(moved.latitude > start.latitude);
    CHECK(haversine_km(start, moved) * 1000.0 == doctest::Approx(150.0).epsilon(1e-4));
}

TEST_CASE("stepping east at the equator moves only the longitude") {
    Location start{0.0, 10.0, std::nullopt};
    Location moved = step_meters(start, 90.0, 500.0);
    CHECK(moved.latitude == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(haversine_km(start, moved) * 1000.0 == doctest::Approx(500.0).epsilon(1e-4));
}

TEST_CASE("step length is accurate for arbitrary headings at city scale") {
    RngStream rng(17, "geo-steps");
    for (int i = 0; i < 200; ++i) {
        Location start{rng.uniform(-60.0, 60.0), rng.uniform(-170.0, 170.0), std::nullopt};
        double heading = rng.uniform(0.0, 360.0);
        double meters = rng.uniform(1.0, 2000.0);
        Location moved = step_meters(start, heading, meters);
        CHECK(haversine_km(start, moved) * 1000.0 ==
              doctest::Approx(meters).epsilon(1e-3));
    }
}

TEST_CASE("location validity bounds") {
    CHECK(Location{0.0, 0.0, std::nullopt}.valid());
    CHECK(Location{-90.0, 180.0, std::nullopt}.valid());
    CHECK_FALSE(Location{95.0, 0.0, std::nullopt}.valid());
    CHECK_FALSE(Location{0.0, -181.0, std::nullopt}.valid());
}

TEST_CASE("bounding box containment and degeneracy") {
    BoundingBox b{-1.0, 1.0, 10.0, 12.0};
    CHECK(b.contains({0.0, 11.0, std::nullopt}));
    CHECK(b.contains({-1.0, 10.0, std::nullopt}));  // edges included
    CHECK_FALSE(b.contains({1.5, 11.0, std::nullopt}));
    CHECK_FALSE(b.degenerate());
    CHECK(BoundingBox{1.0, 1.0, 0.0, 2.0}.degenerate());
    CHECK(BoundingBox{0.0, 2.0, 3.0, 1.0}.degenerate());
}
