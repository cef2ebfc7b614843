#include "mag/magnitude.hpp"

#include "mag/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace mag;

namespace {

FiniteMetricSpace two_point_space(double d) {
    Eigen::MatrixXd m(2, 2);
    m << 0, d, d, 0;
    return FiniteMetricSpace({}, m);
}

FiniteMetricSpace equilateral_triple(double d) {
    Eigen::MatrixXd m(3, 3);
    m << 0, d, d, d, 0, d, d, d, 0;
    return FiniteMetricSpace({}, m);
}

Eigen::MatrixXd random_points(int n, int dim, std::uint64_t seed, double span = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, span);
    Eigen::MatrixXd pts(n, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j) pts(i, j) = u(rng);
    return pts;
}

// The 6-point bipartite space with cross distance 1 and within-part distance
// 2; its similarity matrix loses positive definiteness for R < ln 2.
FiniteMetricSpace bipartite_six() {
    Eigen::MatrixXd m(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            if (i == j) m(i, j) = 0.0;
            else if ((i < 3) == (j < 3)) m(i, j) = 2.0;
            else m(i, j) = 1.0;
        }
    return FiniteMetricSpace({}, m);
}

} // namespace

TEST_CASE("similarity matrix basics") {
    Eigen::MatrixXd one(1, 1);
    one << 0;
    const FiniteMetricSpace single({}, one);
    CHECK(similarity_matrix(single, 3.0) == Eigen::MatrixXd::Identity(1, 1));

    const FiniteMetricSpace pair = two_point_space(std::log(3.0));
    const Eigen::MatrixXd Z = similarity_matrix(pair, 1.0);
    CHECK(Z(0, 0) == 1.0);
    CHECK(Z(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(Z(1, 0) == Z(0, 1));
}

TEST_CASE("Euclidean similarity matrices are positive definite") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto space = FiniteMetricSpace::from_points(random_points(4, 3, seed));
        const Eigen::MatrixXd Z = similarity_matrix(space, 1.7);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Z);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("weighting closed forms") {
    Eigen::MatrixXd one(1, 1);
    one << 0;
    CHECK(weighting(FiniteMetricSpace({}, one), 2.0).w(0) == doctest::Approx(1.0).epsilon(1e-14));

    // two points at R*d = ln 3: w = 1/(1 + 1/3) = 3/4
    const auto wv = weighting(two_point_space(std::log(3.0)), 1.0);
    CHECK(wv.w(0) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(wv.w(1) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(wv.residual_max <= 1e-9);

    // equilateral triple at R*d = ln 2: w = 1/(1 + 2/2) = 1/2
    const auto wt = weighting(equilateral_triple(std::log(2.0)), 1.0);
    for (int i = 0; i < 3; ++i) CHECK(wt.w(i) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("magnitude closed forms and inverse oracle") {
    Eigen::MatrixXd one(1, 1);
    one << 0;
    CHECK(magnitude(FiniteMetricSpace({}, one), 5.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(magnitude(two_point_space(std::log(3.0)), 1.0) ==
          doctest::Approx(1.5).epsilon(1e-13));
    CHECK(magnitude(equilateral_triple(std::log(2.0)), 1.0) ==
          doctest::Approx(1.5).epsilon(1e-13));

    for (std::uint64_t seed : {101u, 102u, 103u}) {
        const auto space = FiniteMetricSpace::from_points(random_points(5, 3, seed));
        const double got = magnitude(space, 2.0);
        const double expect = static_cast<double>(oracle::magnitude_by_inverse(space.dist(), 2.0));
        CHECK(got == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("magnitude curve batches and records failures") {
    Eigen::MatrixXd one(1, 1);
    one << 0;
    const auto flat = magnitude_curve(FiniteMetricSpace({}, one), {1.0, 2.0, 3.0});
    REQUIRE(flat.samples.size() == 3);
    for (const auto& s : flat.samples) CHECK(s.value == doctest::Approx(1.0).epsilon(1e-13));

    const auto pair = magnitude_curve(two_point_space(1.0), {std::log(3.0)});
    REQUIRE(pair.samples.size() == 1);
    CHECK(pair.samples[0].value == doctest::Approx(1.5).epsilon(1e-13));

    // 100 uniform points on [0, 2]: lower bounds of 1 + R below the exact value
    Eigen::MatrixXd line(100, 1);
    for (int i = 0; i < 100; ++i) line(i, 0) = 2.0 * i / 99.0;
    const auto curve = magnitude_curve(FiniteMetricSpace::from_points(line), {1.0, 2.0, 4.0});
    REQUIRE(curve.samples.size() == 3);
    double prev = 0.0;
    for (const auto& s : curve.samples) {
        CHECK(s.value <= 1.0 + s.R + 1e-9); // exact interval magnitude 1 + l R / 2
        CHECK(s.value > prev);
        prev = s.value;
    }

    // non-positive-definite space: failure recorded, good scale still sampled
    const auto mixed = magnitude_curve(bipartite_six(), {0.5, 2.0});
    CHECK(mixed.failures.size() == 1);
    CHECK(mixed.failures[0].R == 0.5);
    REQUIRE(mixed.samples.size() == 1);
    CHECK(mixed.samples[0].R == 2.0);
}

TEST_CASE("non-positive-definite space is refused with condition report") {
    CHECK_THROWS_AS((void)magnitude(bipartite_six(), 0.5), NotPositiveDefinite);
}

TEST_CASE("catastrophic conditioning is refused, moderate is reported") {
    const auto near_dup = two_point_space(1e-15);
    CHECK_THROWS_AS((void)weighting(near_dup, 1.0), NotPositiveDefinite);

    const auto close = two_point_space(1e-5);
    const auto wv = weighting(close, 1.0);
    CHECK(wv.condition_estimate > 1e4);
    CHECK(wv.condition_estimate < 1e14);
}

TEST_CASE("input validation") {
    Eigen::MatrixXd bad(2, 2);
    bad << 0, 1, 2, 0;
    CHECK_THROWS_AS(FiniteMetricSpace({}, bad), InvalidInput);

    Eigen::MatrixXd dup(2, 2);
    dup << 0, 0, 0, 0;
    CHECK_THROWS_AS(FiniteMetricSpace({}, dup), InvalidInput);

    Eigen::MatrixXd diag(2, 2);
    diag << 1, 1, 1, 0;
    CHECK_THROWS_AS(FiniteMetricSpace({}, diag), InvalidInput);

    CHECK_THROWS_AS((void)similarity_matrix(two_point_space(1.0), -1.0), InvalidInput);
    CHECK_THROWS_AS((void)magnitude_curve(two_point_space(1.0), {2.0, 1.0}), InvalidInput);
}

TEST_CASE("property: subset monotonicity on random nested Euclidean sets") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size_dist(3, 40);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = size_dist(rng);
        const auto space = FiniteMetricSpace::from_points(random_points(n, 3, rng()));
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        const int k = std::uniform_int_distribution<int>(1, n - 1)(rng);
        const std::vector<int> sub(all.begin(), all.begin() + k);
        const double R = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
        const double inner = magnitude(space.subset(sub), R);
        const double outer = magnitude(space, R);
        CHECK(inner <= outer + 1e-9);
        CHECK(inner >= 1.0 - 1e-9);
    }
}

TEST_CASE("property: scale consistency is exact for dyadic factors") {
    const auto space = FiniteMetricSpace::from_points(random_points(12, 3, 77));
    for (double s : {0.5, 2.0, 4.0}) {
        const double a = magnitude(space.rescaled(s), 1.25);
        const double b = magnitude(space, 1.25 * s);
        CHECK(a == b); // same kernel entries bit for bit
    }
}

TEST_CASE("property: label permutation invariance") {
    std::mt19937_64 rng(99);
    const auto space = FiniteMetricSpace::from_points(random_points(15, 3, 5150));
    std::vector<int> perm(15);
    std::iota(perm.begin(), perm.end(), 0);
    for (int rep = 0; rep < 5; ++rep) {
        std::shuffle(perm.begin(), perm.end(), rng);
        const double a = magnitude(space.permuted(perm), 2.0);
        const double b = magnitude(space, 2.0);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("triangle inequality validator is opt-in") {
    Eigen::MatrixXd m(3, 3);
    m << 0, 1, 5, 1, 0, 1, 5, 1, 0; // violates the triangle inequality
    const FiniteMetricSpace space({}, m); // constructor accepts it
    CHECK_FALSE(space.satisfies_triangle_inequality());
    CHECK(two_point_space(1.0).satisfies_triangle_inequality());
}

TEST_CASE("curve CSV round trip") {
    MagnitudeCurve c;
    c.samples = {{1.0, 1.5, 2, 10.0}, {2.0, 1.75, 2, 11.0}};
    std::stringstream ss;
    c.write_csv(ss);
    const auto back = MagnitudeCurve::read_csv(ss);
    REQUIRE(back.samples.size() == 2);
    CHECK(back.samples[1].value == 1.75);
    CHECK(back.samples[1].n_points == 2);
}
