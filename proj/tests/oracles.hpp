#pragma once

// Test-only oracles, deliberately independent of the library solve paths:
// a long-double Gauss-Jordan inverse for magnitude cross-checks and a naive
// symbol-composition expansion for the calculus tests.

#include "mag/sym/symbol.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace oracle {

/// Magnitude by explicit long-double Gauss-Jordan inversion of the
/// similarity matrix with full pivoting; no Cholesky, no Eigen solve.
inline long double magnitude_by_inverse(const Eigen::MatrixXd& dist, double R) {
    const int n = static_cast<int>(dist.rows());
    std::vector<std::vector<long double>> a(n, std::vector<long double>(2 * n, 0.0L));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = expl(-static_cast<long double>(R) * dist(i, j));
        a[i][n + i] = 1.0L;
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (fabsl(a[r][col]) > fabsl(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        const long double p = a[col][col];
        for (int c = 0; c < 2 * n; ++c) a[col][c] /= p;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const long double f = a[r][col];
            if (f == 0.0L) continue;
            for (int c = 0; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    long double mag = 0.0L;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mag += a[i][n + j];
    return mag;
}

/// Composition of two SCALAR symbols by the defining sum, written as plain
/// nested loops over single derivatives (no multi-index machinery shared
/// with the library implementation).
inline mag::sym::PolyhomSymbol naive_scalar_product(const mag::sym::PolyhomSymbol& a,
                                                    const mag::sym::PolyhomSymbol& b,
                                                    int cutoff) {
    using namespace mag::sym;
    const int dim = a.dim();
    PolyhomSymbol out(dim, a.order() + b.order(), cutoff);
    // Enumerate alpha by recursing on repeated single derivatives: alpha with
    // |alpha| = q is generated as all nondecreasing direction sequences.
    std::vector<Term> acc;
    const int q_max = a.order() + b.order() - cutoff;
    std::vector<int> dirs;
    auto emit = [&](const std::vector<int>& seq) {
        PolyhomSymbol da = a;
        PolyhomSymbol db = b;
        for (int d : seq) {
            da = da.dxi(d);
            db = db.dx(d);
        }
        if (da.is_zero() || db.is_zero()) return;
        // i^q / (multiplicity-corrected count): a nondecreasing sequence with
        // counts c_1..c_dim corresponds to the multi-index alpha = (c_i) and
        // appears exactly once here, so the factor is i^|alpha| / alpha!.
        Rational alpha_fact(1);
        int run = 1;
        for (size_t i = 1; i <= seq.size(); ++i) {
            if (i < seq.size() && seq[i] == seq[i - 1]) {
                ++run;
                alpha_fact *= run;
            } else run = 1;
        }
        GaussianRational f{Rational(1) / alpha_fact};
        f = f.times_i_power(static_cast<unsigned>(seq.size()));
        for (const Term& ta : da.terms())
            for (const Term& tb : db.terms()) {
                Term t = term_product(ta, tb);
                t.coeff *= f;
                acc.push_back(std::move(t));
            }
    };
    std::function<void(int, int)> rec = [&](int start, int remaining) {
        emit(dirs);
        if (remaining == 0) return;
        for (int d = start; d <= dim; ++d) {
            dirs.push_back(d);
            rec(d, remaining - 1);
            dirs.pop_back();
        }
    };
    rec(1, q_max);
    out.add_terms(std::move(acc));
    return out.truncated(cutoff);
}

inline std::mt19937_64 test_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

} // namespace oracle
