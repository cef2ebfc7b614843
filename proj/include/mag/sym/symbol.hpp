#pragma once

// Finite truncations of polyhomogeneous parameter-dependent symbols.
//
// A symbol is a sum of terms
//
//   coeff * (formal scalar monomial)(x) * xi^alpha * R^k * (R^2 + |xi|^2)^{p/2}
//
// each homogeneous in the joint variable (xi, R) of degree |alpha| + k + p.
// The radical factor is first-class and never expanded. Coefficients are
// Gaussian rationals; formal scalars are named smooth functions of the base
// point with a record of applied partial derivatives, so x-differentiation
// stays symbolic and exact.
//
// Matrix-valued symbols are dense with Douglis-Nirenberg degree offsets per
// row/column: the entry (r, c) of a symbol of order s has principal degree
// s + row_off[r] - col_off[c], and all truncation bookkeeping ("relative
// degree") is offset-shifted the same way. Scalar symbols are the (1, 1)
// case with zero offsets, where relative and absolute degree coincide.

#include "mag/errors.hpp"
#include "mag/sym/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace mag::sym {

enum class VarSide : std::uint8_t { None = 0, X = 1, Y = 2 };

/// Named formal scalar with applied partial derivatives (sorted directions,
/// 1-based). `side` distinguishes the two point arguments of two-variable
/// symbols; one-variable symbols use side None.
struct FormalScalar {
    std::string base;
    std::vector<int> derivs;
    VarSide side = VarSide::None;

    auto operator<=>(const FormalScalar&) const = default;
    /// "f", "f_1", "S_12", "y:S_2", ...
    std::string name() const;
    static FormalScalar parse(const std::string& name);
};

using ScalarPower = std::pair<FormalScalar, int>;

struct Term {
    GaussianRational coeff;
    std::vector<ScalarPower> scalars; // sorted, unique, powers >= 1
    std::vector<int> alpha;           // xi exponents; size = symbol dimension
    int r_exp = 0;                    // power of R
    int radical = 0;                  // p in (R^2 + |xi|^2)^{p/2}
    int degree = 0;                   // declared; normally |alpha| + r_exp + radical
    int row = 0;
    int col = 0;

    int alpha_norm() const;
    int computed_degree() const { return alpha_norm() + r_exp + radical; }
    bool structure_equal(const Term& o) const; // everything except coeff
    std::complex<double> eval(const std::vector<double>& xi, double R,
                              const std::function<double(const FormalScalar&)>& bind) const;
};

struct HomogeneityTermReport {
    std::size_t index = 0;
    int declared = 0;
    double measured = 0.0;
    bool pass = false;
};

struct HomogeneityReport {
    bool all_pass = true;
    std::vector<HomogeneityTermReport> terms;
};

enum class Parity { Even, Odd };

struct ParityTermReport {
    std::size_t index = 0;
    Parity parity = Parity::Even;
    std::complex<double> value_at_xi0{0.0, 0.0};
    bool vanishes_at_xi0 = false;
    bool survives = false; // nonzero structure at xi = 0 (alpha == 0)
};

struct ParityReport {
    bool odd_terms_all_vanish = true;
    std::vector<ParityTermReport> terms;
};

class PolyhomSymbol {
public:
    /// Sentinel cutoff for symbols known exactly (finite term lists with no
    /// discarded tail).
    static constexpr int kExact = std::numeric_limits<int>::min() / 2;

    PolyhomSymbol() = default;
    PolyhomSymbol(int dim, int order, int cutoff, int rows = 1, int cols = 1,
                  std::vector<int> row_offsets = {}, std::vector<int> col_offsets = {});

    // --- constructors for common pieces (scalar shape) ---
    static PolyhomSymbol zero(int dim, int order, int cutoff = kExact);
    static PolyhomSymbol constant(int dim, GaussianRational value);
    static PolyhomSymbol xi(int dim, int direction);          // degree 1
    static PolyhomSymbol r_power(int dim, int k);             // R^k
    static PolyhomSymbol radical_power(int dim, int p);       // (R^2+|xi|^2)^{p/2}
    static PolyhomSymbol scalar_fn(int dim, const std::string& base,
                                   VarSide side = VarSide::None);
    /// Identity matrix symbol with the given offsets on both sides.
    static PolyhomSymbol identity(int dim, int size, std::vector<int> offsets = {});
    /// diag((R^2+|xi|^2)^{j/2}), j = 0..size-1, with row offsets 0..size-1.
    static PolyhomSymbol dn_radical_diagonal(int dim, int size);

    int dim() const { return dim_; }
    int order() const { return order_; }
    int cutoff() const { return cutoff_; }
    bool is_exact() const { return cutoff_ == kExact; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_scalar_shape() const { return rows_ == 1 && cols_ == 1; }
    const std::vector<int>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& col_offsets() const { return col_offsets_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int relative_degree(const Term& t) const {
        return t.degree - row_offsets_[t.row] + col_offsets_[t.col];
    }

    /// Append a term (degree recomputed unless `keep_declared`), then merge.
    void add_term(Term t, bool keep_declared = false);
    /// Append many terms with a single merge pass.
    void add_terms(std::vector<Term> ts);

    PolyhomSymbol& operator+=(const PolyhomSymbol& o);
    friend PolyhomSymbol operator+(PolyhomSymbol a, const PolyhomSymbol& b) { return a += b; }
    PolyhomSymbol operator-() const;
    PolyhomSymbol scaled(const GaussianRational& q) const;

    /// Terms at relative-degree drop k (i.e. relative degree order - k).
    PolyhomSymbol slice(int k) const;
    /// Distinct relative-degree drops present, ascending.
    std::vector<int> slice_drops() const;
    /// Drop terms of relative degree < rel_cutoff and stamp the new cutoff.
    PolyhomSymbol truncated(int rel_cutoff) const;
    PolyhomSymbol with_cutoff(int rel_cutoff) const;

    /// d/d xi_l: degree drops by one on every term.
    PolyhomSymbol dxi(int direction) const;
    /// Formal base-point derivative acting on scalars of the given side.
    PolyhomSymbol dx(int direction, VarSide side = VarSide::None) const;

    /// Scale-test every term at (xi, R) vs (2 xi, 2 R) against its declared
    /// degree; formal scalars are bound to fixed pseudorandom values.
    HomogeneityReport homogeneity_check(std::uint64_t probe_seed = 7) const;

    /// Classify terms even/odd under xi -> -xi and evaluate them at xi = 0.
    ParityReport parity_vanishing_check(std::uint64_t probe_seed = 7) const;

    std::complex<double> eval_entry(int row, int col, const std::vector<double>& xi, double R,
                                    const std::function<double(const FormalScalar&)>& bind) const;

    bool operator==(const PolyhomSymbol& o) const;

    nlohmann::json to_json() const;
    static PolyhomSymbol from_json(const nlohmann::json& j);

private:
    void canonicalize();

    int dim_ = 2;
    int order_ = 0;
    int cutoff_ = kExact;
    int rows_ = 1;
    int cols_ = 1;
    std::vector<int> row_offsets_{0};
    std::vector<int> col_offsets_{0};
    std::vector<Term> terms_;
};

/// Product of two bare terms (coefficients multiply, monomials merge).
Term term_product(const Term& a, const Term& b);

} // namespace mag::sym
