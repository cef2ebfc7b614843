#pragma once

// Two-variable boundary symbols a(x', y', xi', R) and their reduction to
// one-variable symbols at a base point.
//
// Coefficients are polynomials in sided formal scalars (x-side and y-side
// jets of a graph function S and any other named functions). The base point
// carries the constraints S(0) = 0 and grad S(0) = 0, with the second-order
// jet of S retained as formal constants S_ls. The reduction evaluates
//
//   a(0,0,xi,R) - i * sum_l  d^2 a / dxi_l dy_l (0,0,xi,R)
//               - 1/2 * sum_{l,s} d^4 a / dxi_l dxi_s dy_l dy_s (0,0,xi,R)
//
// and truncates at a target degree.

#include "mag/sym/symbol.hpp"

namespace mag::sym {

struct JetSpec {
    std::string function = "S"; // jet-constrained base name
    int depth = 2;              // highest stored derivative order
    bool exact_polynomial = false; // derivatives beyond depth are identically zero
};

class TwoVariableSymbol {
public:
    TwoVariableSymbol() = default;
    /// Scalar-shaped storage whose terms may carry X- and Y-sided scalars.
    /// Validates that jet-function scalars never exceed the stored depth
    /// (unless the jet is an exact polynomial, in which case they are zero
    /// and dropped).
    TwoVariableSymbol(PolyhomSymbol storage, JetSpec jet = {});

    const PolyhomSymbol& storage() const { return storage_; }
    const JetSpec& jet() const { return jet_; }
    int dim() const { return storage_.dim(); }
    int order() const { return storage_.order(); }

    TwoVariableSymbol dxi(int direction) const;
    /// Derivative in the second point variable; throws JetTooShallow when it
    /// would need a jet coefficient beyond the stored depth.
    TwoVariableSymbol dy(int direction) const;

    /// Evaluate both point variables at the base point: jet scalars of order
    /// <= 1 vanish, all other sided scalars become unsided formal constants.
    PolyhomSymbol at_base_point() const;

    HomogeneityReport homogeneity_check(std::uint64_t probe_seed = 7) const {
        return storage_.homogeneity_check(probe_seed);
    }

private:
    PolyhomSymbol storage_;
    JetSpec jet_;
};

PolyhomSymbol reduce_two_variable(const TwoVariableSymbol& sym, int target_degree);

} // namespace mag::sym
