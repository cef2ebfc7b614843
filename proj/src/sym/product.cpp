#include "mag/sym/product.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mag::sym {

namespace {

void enumerate_multi_indices(int dim, int total, std::vector<int>& cur, int pos,
                             const std::function<void(const std::vector<int>&)>& fn) {
    if (pos == dim - 1) {
        cur[pos] = total;
        fn(cur);
        return;
    }
    for (int v = 0; v <= total; ++v) {
        cur[pos] = v;
        enumerate_multi_indices(dim, total - v, cur, pos + 1, fn);
    }
}

Rational multi_factorial(const std::vector<int>& alpha) {
    Rational f(1);
    for (int a : alpha)
        for (int k = 2; k <= a; ++k) f *= k;
    return f;
}

PolyhomSymbol dxi_multi(const PolyhomSymbol& s, const std::vector<int>& alpha) {
    PolyhomSymbol out = s;
    for (size_t d = 0; d < alpha.size(); ++d)
        for (int k = 0; k < alpha[d]; ++k) out = out.dxi(static_cast<int>(d) + 1);
    return out;
}

PolyhomSymbol dx_multi(const PolyhomSymbol& s, const std::vector<int>& alpha, VarSide side) {
    PolyhomSymbol out = s;
    for (size_t d = 0; d < alpha.size(); ++d)
        for (int k = 0; k < alpha[d]; ++k) out = out.dx(static_cast<int>(d) + 1, side);
    return out;
}

/// Matrix product of two term lists (no derivative twist).
void accumulate_matrix_product(const PolyhomSymbol& a, const PolyhomSymbol& b,
                               const GaussianRational& factor, std::vector<Term>& out) {
    for (const Term& ta : a.terms())
        for (const Term& tb : b.terms()) {
            if (ta.col != tb.row) continue;
            Term t = term_product(ta, tb);
            t.coeff *= factor;
            if (!t.coeff.is_zero()) out.push_back(std::move(t));
        }
}

/// One twisted block: (i^|alpha|/alpha!) d_xi^alpha a_block * d_x^alpha b_block.
void accumulate_twisted(const PolyhomSymbol& a_block, const PolyhomSymbol& b_block,
                        const std::vector<int>& alpha, std::vector<Term>& out) {
    int q = 0;
    for (int v : alpha) q += v;
    const PolyhomSymbol da = q == 0 ? a_block : dxi_multi(a_block, alpha);
    if (da.is_zero()) return;
    const PolyhomSymbol db = q == 0 ? b_block : dx_multi(b_block, alpha, VarSide::None);
    if (db.is_zero()) return;
    GaussianRational factor{Rational(1) / multi_factorial(alpha)};
    factor = factor.times_i_power(static_cast<unsigned>(q));
    accumulate_matrix_product(da, db, factor, out);
}

int max_available_drop(const PolyhomSymbol& s) {
    // How many degrees below the principal the symbol is trusted for.
    return s.is_exact() ? std::numeric_limits<int>::max() / 4 : s.order() - s.cutoff();
}

} // namespace

PolyhomSymbol symbol_product(const PolyhomSymbol& a, const PolyhomSymbol& b, int cutoff) {
    if (a.dim() != b.dim()) throw InvalidInput("symbol dimensions differ");
    if (a.cols() != b.rows()) throw InvalidInput("symbol shapes are not composable");
    if (a.col_offsets() != b.row_offsets())
        throw InvalidInput("Douglis-Nirenberg offsets do not chain");

    const int order_sum = a.order() + b.order();
    // Reliability: unknown tails of one factor hit the principal of the other.
    int reliable = PolyhomSymbol::kExact;
    if (!a.is_exact()) reliable = std::max(reliable, a.cutoff() + b.order());
    if (!b.is_exact()) reliable = std::max(reliable, b.cutoff() + a.order());
    if (reliable != PolyhomSymbol::kExact && cutoff < reliable) {
        std::ostringstream msg;
        msg << "requested cutoff " << cutoff << " is below the reliable degree " << reliable
            << " implied by the input truncations";
        throw CutoffTooLow(msg.str());
    }

    PolyhomSymbol out(a.dim(), order_sum, cutoff, a.rows(), b.cols(), a.row_offsets(),
                      b.col_offsets());
    std::vector<Term> acc;
    const auto drops_a = a.slice_drops();
    const auto drops_b = b.slice_drops();
    std::map<int, PolyhomSymbol> slices_a, slices_b;
    for (int k : drops_a) slices_a.emplace(k, a.slice(k));
    for (int l : drops_b) slices_b.emplace(l, b.slice(l));

    const int max_j = order_sum - cutoff;
    std::vector<int> alpha(a.dim(), 0);
    for (int k : drops_a)
        for (int l : drops_b) {
            const int q_max = max_j - k - l;
            for (int q = 0; q <= q_max; ++q)
                enumerate_multi_indices(a.dim(), q, alpha, 0, [&](const std::vector<int>& al) {
                    accumulate_twisted(slices_a.at(k), slices_b.at(l), al, acc);
                });
        }
    out.add_terms(std::move(acc));
    return out.truncated(cutoff);
}

namespace {

/// Exact inverse of a square Gaussian-rational matrix; empty on singular.
std::vector<std::vector<GaussianRational>> invert_matrix(
    std::vector<std::vector<GaussianRational>> m) {
    const int n = static_cast<int>(m.size());
    std::vector<std::vector<GaussianRational>> inv(n, std::vector<GaussianRational>(n));
    for (int i = 0; i < n; ++i) inv[i][i] = GaussianRational(1);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (!m[r][col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) return {};
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        const GaussianRational pinv = m[col][col].inverse();
        for (int c = 0; c < n; ++c) {
            m[col][c] *= pinv;
            inv[col][c] *= pinv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            const GaussianRational f = m[r][col];
            for (int c = 0; c < n; ++c) {
                m[r][c] = m[r][c] - f * m[col][c];
                inv[r][c] = inv[r][c] - f * inv[col][c];
            }
        }
    }
    return inv;
}

[[noreturn]] void fail_ellipticity_probe(const PolyhomSymbol& principal) {
    // Report a concrete (xi, R) probe where the principal part degenerates.
    const auto bind = [](const FormalScalar&) { return 1.0; };
    const int dim = principal.dim();
    std::vector<std::vector<double>> probes = {std::vector<double>(dim, 0.0)};
    for (int d = 0; d < dim; ++d) {
        std::vector<double> e(dim, 0.0);
        e[d] = 1.0;
        probes.push_back(e);
    }
    for (const auto& xi : probes) {
        for (double R : {1.0, 1e-4}) {
            if (principal.rows() == 1) {
                if (std::abs(principal.eval_entry(0, 0, xi, R, bind)) < 1e-10) {
                    std::ostringstream msg;
                    msg << "principal symbol vanishes at probe (|xi|="
                        << (xi == probes[0] ? 0.0 : 1.0) << ", R=" << R << ")";
                    throw NotElliptic(msg.str());
                }
            }
        }
    }
    throw NotElliptic(
        "principal symbol is outside the invertible class (constant times radical powers "
        "after offset normalization)");
}

} // namespace

PolyhomSymbol parametrix(const PolyhomSymbol& a, int cutoff) {
    if (a.rows() != a.cols()) throw InvalidInput("parametrix requires a square symbol");
    const int s = a.order();
    if (cutoff == PolyhomSymbol::kExact)
        throw InvalidInput("parametrix truncation must be explicit");
    const int depth = -s - cutoff; // number of sub-principal slices requested
    if (depth < 0) throw InvalidInput("parametrix cutoff must lie at or below order -s");
    if (depth > max_available_drop(a)) {
        std::ostringstream msg;
        msg << "parametrix to depth " << depth << " needs input slices below the cutoff "
            << a.cutoff();
        throw CutoffTooLow(msg.str());
    }

    // Principal inversion. Entries must be x-independent radical monomials;
    // the Douglis-Nirenberg offsets carry all degree variation.
    const PolyhomSymbol principal = a.slice(0);
    const int n = a.rows();
    std::vector<std::vector<GaussianRational>> C(n, std::vector<GaussianRational>(n));
    bool shape_ok = true;
    for (const Term& t : principal.terms()) {
        if (t.alpha_norm() != 0 || t.r_exp != 0 || !t.scalars.empty()) {
            shape_ok = false;
            break;
        }
        C[t.row][t.col] = t.coeff;
    }
    std::vector<std::vector<GaussianRational>> Cinv;
    if (shape_ok) Cinv = invert_matrix(C);
    if (!shape_ok || Cinv.empty()) fail_ellipticity_probe(principal);

    PolyhomSymbol inv_principal(a.dim(), -s, PolyhomSymbol::kExact, n, n, a.col_offsets(),
                                a.row_offsets());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (Cinv[r][c].is_zero()) continue;
            Term t;
            t.coeff = Cinv[r][c];
            t.alpha.assign(a.dim(), 0);
            t.radical = -s + a.col_offsets()[r] - a.row_offsets()[c];
            t.row = r;
            t.col = c;
            inv_principal.add_term(std::move(t));
        }

    std::map<int, PolyhomSymbol> b_slices; // drop j -> slice of the parametrix
    b_slices.emplace(0, inv_principal);
    std::map<int, PolyhomSymbol> a_slices;
    for (int k : a.slice_drops()) a_slices.emplace(k, a.slice(k));

    std::vector<int> alpha(a.dim(), 0);
    for (int j = 1; j <= depth; ++j) {
        std::vector<Term> acc;
        for (const auto& [k, ak] : a_slices) {
            if (k > j) continue;
            for (int l = 0; l < j; ++l) {
                const int q = j - k - l;
                if (q < 0 || !b_slices.count(l)) continue;
                enumerate_multi_indices(a.dim(), q, alpha, 0, [&](const std::vector<int>& al) {
                    accumulate_twisted(ak, b_slices.at(l), al, acc);
                });
            }
        }
        PolyhomSymbol sum(a.dim(), -j, PolyhomSymbol::kExact, n, n, a.row_offsets(),
                          a.row_offsets());
        sum.add_terms(std::move(acc));
        std::vector<Term> negated;
        accumulate_matrix_product(inv_principal, sum, GaussianRational(-1), negated);
        PolyhomSymbol bj(a.dim(), -s - j, PolyhomSymbol::kExact, n, n, a.col_offsets(),
                         a.row_offsets());
        bj.add_terms(std::move(negated));
        b_slices.emplace(j, std::move(bj));
    }

    PolyhomSymbol out(a.dim(), -s, cutoff, n, n, a.col_offsets(), a.row_offsets());
    std::vector<Term> all;
    for (const auto& [j, bj] : b_slices)
        for (const Term& t : bj.terms()) all.push_back(t);
    out.add_terms(std::move(all));
    return out;
}

} // namespace mag::sym
