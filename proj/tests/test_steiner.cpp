#include "mag/steiner.hpp"

#include "mag/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace mag;

namespace {
const std::vector<double> kT{0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
}

TEST_CASE("unit ball intrinsic volumes from the Steiner fit") {
    const auto res = intrinsic_volumes(DomainSpec::ball(1.0), kT, 1000000, 11);
    // expand vol((1+t)B) and match coefficients: (V0,V1,V2,V3) = (1, 4, 2pi, 4pi/3)
    CHECK(res.V[0] == doctest::Approx(1.0).epsilon(0.05));
    CHECK(res.V[1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(res.V[2] == doctest::Approx(2.0 * M_PI).epsilon(0.05));
    CHECK(res.V[3] == doctest::Approx(4.0 * M_PI / 3.0).epsilon(0.05));
    CHECK(res.fit_residual_rel < 1e-2);
    for (double se : res.std_errors) CHECK(se > 0.0);
}

TEST_CASE("ellipsoid V0 is the Euler characteristic of a convex body") {
    for (double a : {0.5, 0.25}) {
        const auto res = intrinsic_volumes(DomainSpec::ellipsoid(a), kT, 500000, 3);
        CHECK(res.V[0] == doctest::Approx(1.0).epsilon(0.05));
        // volume of the (1,1,a) ellipsoid
        CHECK(res.V[3] == doctest::Approx(4.0 * M_PI * a / 3.0).epsilon(0.03));
    }
}

TEST_CASE("flattening the ellipsoid keeps V0 finite at 1") {
    const auto res = intrinsic_volumes(DomainSpec::ellipsoid(0.125), kT, 500000, 5);
    CHECK(res.V[0] == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("non-convex and invalid requests") {
    CHECK_THROWS_AS(intrinsic_volumes(DomainSpec::solid_torus(2.0, 0.5), kT, 100000, 1),
                    NonConvexSpec);
    CHECK_THROWS_AS(intrinsic_volumes(DomainSpec::ball(1.0), {0.5, 1.0, 1.5}, 100000, 1),
                    InvalidInput); // too few offsets
    CHECK_THROWS_AS(intrinsic_volumes(DomainSpec::ball(1.0), {-0.5, 0.5, 1.0, 1.5}, 100000, 1),
                    InvalidInput);
}

TEST_CASE("seeded determinism and seed sensitivity") {
    const auto a = intrinsic_volumes(DomainSpec::ball(1.0), kT, 200000, 21);
    const auto b = intrinsic_volumes(DomainSpec::ball(1.0), kT, 200000, 21);
    CHECK(a.volumes == b.volumes);
    const auto c = intrinsic_volumes(DomainSpec::ball(1.0), kT, 200000, 22);
    CHECK(a.volumes != c.volumes);
}

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(0) == 1.0);
    CHECK(unit_ball_volume(1) == 2.0);
    CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
    CHECK(unit_ball_volume(5) == doctest::Approx(8.0 * M_PI * M_PI / 15.0).epsilon(1e-12));
}
