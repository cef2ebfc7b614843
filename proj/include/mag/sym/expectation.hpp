#pragma once

// Expansion coefficients of manifold expectation values: for a scalar symbol
// of order s on a compact manifold M,
//
//   integral_M A(1) dx  ~  sum_k a_k R^{s-k},   a_k = integral_M sigma_{s-k}(x, 0, 1) dx.
//
// Formal scalars are bound to concrete functions on the manifold; quadrature
// is the periodic trapezoid rule (spectrally accurate here).

#include "mag/sym/symbol.hpp"

#include <complex>
#include <functional>
#include <map>
#include <vector>

namespace mag::sym {

struct Manifold {
    enum class Kind { Circle, Torus2 } kind = Kind::Circle;
    double r1 = 1.0;
    double r2 = 1.0;

    static Manifold circle(double radius);
    /// Flat product of two circles with radii r1 and r2.
    static Manifold torus2(double r1, double r2);

    double volume() const;
};

/// Binding of a formal scalar (by its full name, e.g. "f" or "f_1") to a
/// function of the manifold angles; circles use the first angle only.
using ScalarBinding = std::function<double(double theta, double phi)>;
using Bindings = std::map<std::string, ScalarBinding>;

/// a_0..a_{k_max}. Throws UnboundScalar when a formal coefficient that
/// appears in a retained slice has no binding.
std::vector<std::complex<double>> expectation_expansion(const PolyhomSymbol& sym,
                                                        const Manifold& manifold, int k_max,
                                                        const Bindings& bindings = {});

/// Direct evaluation integral_M sigma(x, 0, R) dx of the full (finite)
/// symbol, for cross-checking the expansion.
std::complex<double> integrate_at_xi0(const PolyhomSymbol& sym, const Manifold& manifold,
                                      double R, const Bindings& bindings = {});

} // namespace mag::sym
