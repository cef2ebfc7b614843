#include "mag/sym/expectation.hpp"

#include "mag/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace mag::sym;

namespace {

constexpr int kDim = 2;

PolyhomSymbol term_symbol(int order, GaussianRational coeff, std::vector<int> alpha, int k,
                          int p, std::vector<ScalarPower> scalars = {}) {
    PolyhomSymbol s(kDim, order, PolyhomSymbol::kExact);
    Term t;
    t.coeff = std::move(coeff);
    t.alpha = std::move(alpha);
    t.r_exp = k;
    t.radical = p;
    t.scalars = std::move(scalars);
    s.add_term(t);
    return s;
}

} // namespace

TEST_CASE("single radical terms on the circle") {
    const auto m = Manifold::circle(1.0);

    // R^2 + |xi|^2 has sigma(x, 0, 1) = 1 in its only slice
    const auto a2 = expectation_expansion(PolyhomSymbol::radical_power(kDim, 2), m, 3);
    REQUIRE(a2.size() == 4);
    CHECK(a2[0].real() == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(a2[k]) == 0.0);

    const auto a1 = expectation_expansion(PolyhomSymbol::radical_power(kDim, 1), m, 2);
    CHECK(a1[0].real() == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
    CHECK(std::abs(a1[1]) == 0.0);
}

TEST_CASE("bound scalar integrates over the circle") {
    const int s = 2;
    const auto sym = term_symbol(s, GaussianRational(1), {0, 0}, s, 0,
                                 {{FormalScalar{"f", {}, VarSide::None}, 1}});
    Bindings b{{"f", [](double th, double) { return std::cos(th) * std::cos(th); }}};
    const auto a = expectation_expansion(sym, Manifold::circle(1.0), 1, b);
    CHECK(a[0].real() == doctest::Approx(M_PI).epsilon(1e-12)); // integral of cos^2
    CHECK(std::abs(a[1]) == 0.0);
}

TEST_CASE("torus expectation uses the product density") {
    const auto sym = term_symbol(1, GaussianRational(1), {0, 0}, 1, 0,
                                 {{FormalScalar{"f", {}, VarSide::None}, 1}});
    Bindings b{{"f", [](double th, double ph) { return std::sin(th) * std::sin(th) +
                                                        std::cos(ph) * std::cos(ph); }}};
    const auto a = expectation_expansion(sym, Manifold::torus2(1.0, 2.0), 0, b);
    // integral of (sin^2 + cos^2-ish) over the flat torus of volume 8 pi^2
    CHECK(a[0].real() == doctest::Approx(8.0 * M_PI * M_PI).epsilon(1e-12));
}

TEST_CASE("x-independent expansions reproduce direct evaluation") {
    PolyhomSymbol sym = PolyhomSymbol::radical_power(kDim, 2);
    sym += term_symbol(2, GaussianRational::ratio(3, 2), {0, 0}, 1, 0); // (3/2) R
    sym += term_symbol(2, GaussianRational(2), {0, 0}, 0, -1);          // 2 rad^{-1}
    sym += term_symbol(2, GaussianRational(1), {2, 0}, 0, -2);          // xi_1^2 rad^{-2}
    const auto m = Manifold::circle(1.5);
    const auto a = expectation_expansion(sym, m, 4);
    for (double R : {8.0, 16.0, 32.0}) {
        double series = 0.0;
        for (int k = 0; k < static_cast<int>(a.size()); ++k)
            series += a[k].real() * std::pow(R, 2 - k);
        const double direct = integrate_at_xi0(sym, m, R).real();
        CHECK(series == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("x-dependent remainder decays at the first omitted order") {
    // order s = 2 with slices down to s - 5; remainder after k_max = 3 is
    // dominated by the a_4 R^{-2} term.
    const int s = 2;
    PolyhomSymbol sym = PolyhomSymbol::radical_power(kDim, s);
    sym += term_symbol(s, GaussianRational(1), {0, 0}, 0, s - 1,
                       {{FormalScalar{"f", {}, VarSide::None}, 1}});
    sym += term_symbol(s, GaussianRational::ratio(1, 3), {0, 0}, 1, s - 3,
                       {{FormalScalar{"g", {}, VarSide::None}, 1}});
    sym += term_symbol(s, GaussianRational(2), {0, 0}, 0, s - 4,
                       {{FormalScalar{"f", {}, VarSide::None}, 2}});
    sym += term_symbol(s, GaussianRational(1), {0, 0}, 1, s - 6,
                       {{FormalScalar{"g", {}, VarSide::None}, 1}});
    Bindings b{{"f", [](double th, double) { return 1.0 + 0.5 * std::cos(th); }},
               {"g", [](double th, double) { return std::sin(th) * std::sin(th); }}};
    const auto m = Manifold::circle(1.0);
    const int k_max = 3;
    const auto a = expectation_expansion(sym, m, k_max, b);
    double prev_rem = 0.0;
    bool first = true;
    for (double R : {8.0, 16.0, 32.0}) {
        double series = 0.0;
        for (int k = 0; k <= k_max; ++k) series += a[k].real() * std::pow(R, s - k);
        const double rem = std::abs(integrate_at_xi0(sym, m, R, b).real() - series);
        CHECK(rem > 0.0);
        if (!first) {
            // halving rate at least 2^{s - k_max - 1} = 2^{-2}
            CHECK(rem <= prev_rem * std::pow(2.0, s - k_max - 1) * 1.05);
        }
        prev_rem = rem;
        first = false;
    }
}

TEST_CASE("unbound scalars are reported") {
    const auto sym = term_symbol(1, GaussianRational(1), {0, 0}, 1, 0,
                                 {{FormalScalar{"mystery", {}, VarSide::None}, 1}});
    CHECK_THROWS_AS((void)expectation_expansion(sym, Manifold::circle(1.0), 0),
                    UnboundScalar);
}

TEST_CASE("expansion depth respects the symbol truncation") {
    const auto sym = PolyhomSymbol::radical_power(kDim, 2).with_cutoff(0);
    CHECK_NOTHROW((void)expectation_expansion(sym, Manifold::circle(1.0), 2));
    CHECK_THROWS_AS((void)expectation_expansion(sym, Manifold::circle(1.0), 3), CutoffTooLow);
}
