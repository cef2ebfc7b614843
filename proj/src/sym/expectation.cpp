#include "mag/sym/expectation.hpp"

#include <cmath>

namespace mag::sym {

Manifold Manifold::circle(double radius) {
    if (!(radius > 0.0)) throw InvalidInput("circle radius must be positive");
    Manifold m;
    m.kind = Kind::Circle;
    m.r1 = radius;
    return m;
}

Manifold Manifold::torus2(double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw InvalidInput("torus radii must be positive");
    Manifold m;
    m.kind = Kind::Torus2;
    m.r1 = r1;
    m.r2 = r2;
    return m;
}

double Manifold::volume() const {
    return kind == Kind::Circle ? 2.0 * M_PI * r1 : 4.0 * M_PI * M_PI * r1 * r2;
}

namespace {

constexpr int kCircleNodes = 512;
constexpr int kTorusNodes = 96;

/// integral over M of the product of bound scalars in one term.
double integrate_scalars(const Term& t, const Manifold& m, const Bindings& bindings) {
    if (t.scalars.empty()) return m.volume();
    std::vector<std::pair<const ScalarBinding*, int>> bound;
    for (const auto& [sc, pw] : t.scalars) {
        const auto it = bindings.find(sc.name());
        if (it == bindings.end())
            throw UnboundScalar("no binding for formal scalar " + sc.name());
        bound.push_back({&it->second, pw});
    }
    auto pointwise = [&](double th, double ph) {
        double v = 1.0;
        for (const auto& [fn, pw] : bound) v *= std::pow((*fn)(th, ph), pw);
        return v;
    };
    if (m.kind == Manifold::Kind::Circle) {
        double sum = 0.0;
        for (int i = 0; i < kCircleNodes; ++i)
            sum += pointwise(2.0 * M_PI * i / kCircleNodes, 0.0);
        return sum * (2.0 * M_PI / kCircleNodes) * m.r1;
    }
    double sum = 0.0;
    for (int i = 0; i < kTorusNodes; ++i)
        for (int j = 0; j < kTorusNodes; ++j)
            sum += pointwise(2.0 * M_PI * i / kTorusNodes, 2.0 * M_PI * j / kTorusNodes);
    const double w = (2.0 * M_PI / kTorusNodes) * (2.0 * M_PI / kTorusNodes);
    return sum * w * m.r1 * m.r2;
}

/// Sum of the alpha = 0 terms of a slice-or-symbol at (xi = 0, R).
std::complex<double> integrate_terms_at_xi0(const std::vector<Term>& terms, const Manifold& m,
                                            double R, const Bindings& bindings) {
    std::complex<double> total{0.0, 0.0};
    for (const Term& t : terms) {
        if (t.alpha_norm() != 0) continue; // xi factors vanish at xi = 0
        const double rpow = std::pow(R, t.r_exp + t.radical);
        total += t.coeff.to_complex() * rpow * integrate_scalars(t, m, bindings);
    }
    return total;
}

} // namespace

std::vector<std::complex<double>> expectation_expansion(const PolyhomSymbol& sym,
                                                        const Manifold& manifold, int k_max,
                                                        const Bindings& bindings) {
    if (!sym.is_scalar_shape())
        throw InvalidInput("expectation expansion takes scalar symbols");
    if (k_max < 0) throw InvalidInput("k_max must be nonnegative");
    if (!sym.is_exact() && sym.order() - k_max < sym.cutoff())
        throw CutoffTooLow("expansion depth exceeds the symbol truncation");
    std::vector<std::complex<double>> a(k_max + 1, {0.0, 0.0});
    for (int k = 0; k <= k_max; ++k)
        a[k] = integrate_terms_at_xi0(sym.slice(k).terms(), manifold, 1.0, bindings);
    return a;
}

std::complex<double> integrate_at_xi0(const PolyhomSymbol& sym, const Manifold& manifold,
                                      double R, const Bindings& bindings) {
    if (!sym.is_scalar_shape())
        throw InvalidInput("expectation expansion takes scalar symbols");
    if (!(R > 0.0)) throw InvalidInput("R must be positive");
    return integrate_terms_at_xi0(sym.terms(), manifold, R, bindings);
}

} // namespace mag::sym
