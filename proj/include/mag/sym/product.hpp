#pragma once

// Composition and parametrix in the parameter-dependent calculus.
//
// The product of symbols a (left factor) and b is
//
//   sum_alpha (i^|alpha| / alpha!) d_xi^alpha a * d_x^alpha b
//
// collected by homogeneous degree and truncated at an explicit cutoff; matrix
// symbols multiply entrywise-matrix-wise with the same derivative twist.
//
// The parametrix of an elliptic symbol a of order s has principal part
// a_s^{-1} and lower parts given inductively by
//
//   b_{-s-j} = -a_s^{-1} * sum_{k+l+|alpha|=j, l<j}
//                (i^|alpha|/alpha!) d_xi^alpha a_{s-k} * d_x^alpha b_{-s-l},
//
// which makes product(a, parametrix(a)) the identity modulo terms below the
// retained range. Exact rational arithmetic keeps those residuals literally
// zero.
//
// Cutoffs are mandatory and checked: a truncated input cannot produce output
// deeper than max(a.cutoff + b.order, b.cutoff + a.order); requesting more
// throws CutoffTooLow. Cutoffs and orders are Douglis-Nirenberg-relative for
// matrix symbols (plain degrees in the scalar case).
//
// Principal-symbol inversion supports the parameter-elliptic class whose
// (offset-normalized) principal entries are constants times radical powers
// (R^2+|xi|^2)^{deg/2}; anything else fails the ellipticity probe and throws
// NotElliptic.

#include "mag/sym/symbol.hpp"

namespace mag::sym {

PolyhomSymbol symbol_product(const PolyhomSymbol& a, const PolyhomSymbol& b, int cutoff);

PolyhomSymbol parametrix(const PolyhomSymbol& a, int cutoff);

} // namespace mag::sym
