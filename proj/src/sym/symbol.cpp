#include "mag/sym/symbol.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mag::sym {

std::string GaussianRational::str() const {
    std::ostringstream os;
    os << re;
    if (im != 0) os << (im > 0 ? "+" : "") << im << "i";
    return os.str();
}

// ---------------- FormalScalar ----------------

std::string FormalScalar::name() const {
    std::string out;
    if (side == VarSide::X) out += "x:";
    else if (side == VarSide::Y) out += "y:";
    out += base;
    if (!derivs.empty()) {
        out += "_";
        for (int d : derivs) out += std::to_string(d);
    }
    return out;
}

FormalScalar FormalScalar::parse(const std::string& name) {
    FormalScalar s;
    std::string rest = name;
    if (rest.rfind("x:", 0) == 0) {
        s.side = VarSide::X;
        rest = rest.substr(2);
    } else if (rest.rfind("y:", 0) == 0) {
        s.side = VarSide::Y;
        rest = rest.substr(2);
    }
    const auto us = rest.rfind('_');
    if (us != std::string::npos && us + 1 < rest.size() &&
        std::all_of(rest.begin() + us + 1, rest.end(), [](char c) { return c >= '1' && c <= '9'; })) {
        s.base = rest.substr(0, us);
        for (size_t i = us + 1; i < rest.size(); ++i) s.derivs.push_back(rest[i] - '0');
        std::sort(s.derivs.begin(), s.derivs.end());
    } else {
        s.base = rest;
    }
    if (s.base.empty()) throw InvalidInput("empty formal scalar name: " + name);
    return s;
}

// ---------------- Term ----------------

int Term::alpha_norm() const {
    int n = 0;
    for (int a : alpha) n += a;
    return n;
}

bool Term::structure_equal(const Term& o) const {
    return row == o.row && col == o.col && degree == o.degree && alpha == o.alpha &&
           r_exp == o.r_exp && radical == o.radical && scalars == o.scalars;
}

std::complex<double> Term::eval(const std::vector<double>& xi, double R,
                                const std::function<double(const FormalScalar&)>& bind) const {
    std::complex<double> v = coeff.to_complex();
    for (const auto& [sc, pw] : scalars) v *= std::pow(bind(sc), pw);
    for (size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] != 0) v *= std::pow(xi[i], alpha[i]);
    if (r_exp != 0) v *= std::pow(R, r_exp);
    if (radical != 0) {
        double q = R * R;
        for (double x : xi) q += x * x;
        v *= std::pow(q, radical / 2.0);
    }
    return v;
}

Term term_product(const Term& a, const Term& b) {
    Term t;
    t.coeff = a.coeff * b.coeff;
    t.row = a.row;
    t.col = b.col;
    t.alpha.resize(a.alpha.size());
    for (size_t i = 0; i < a.alpha.size(); ++i) t.alpha[i] = a.alpha[i] + b.alpha[i];
    t.r_exp = a.r_exp + b.r_exp;
    t.radical = a.radical + b.radical;
    // merge scalar monomials
    t.scalars = a.scalars;
    for (const auto& sp : b.scalars) {
        auto it = std::lower_bound(t.scalars.begin(), t.scalars.end(), sp,
                                   [](const ScalarPower& x, const ScalarPower& y) {
                                       return x.first < y.first;
                                   });
        if (it != t.scalars.end() && it->first == sp.first) it->second += sp.second;
        else t.scalars.insert(it, sp);
    }
    t.degree = t.computed_degree();
    return t;
}

// ---------------- PolyhomSymbol ----------------

PolyhomSymbol::PolyhomSymbol(int dim, int order, int cutoff, int rows, int cols,
                             std::vector<int> row_offsets, std::vector<int> col_offsets)
    : dim_(dim), order_(order), cutoff_(cutoff), rows_(rows), cols_(cols),
      row_offsets_(std::move(row_offsets)), col_offsets_(std::move(col_offsets)) {
    if (dim_ < 1 || dim_ > 9) throw InvalidInput("symbol dimension must be in 1..9");
    if (rows_ < 1 || cols_ < 1) throw InvalidInput("bad symbol shape");
    if (row_offsets_.empty()) row_offsets_.assign(rows_, 0);
    if (col_offsets_.empty()) col_offsets_.assign(cols_, 0);
    if (static_cast<int>(row_offsets_.size()) != rows_ ||
        static_cast<int>(col_offsets_.size()) != cols_)
        throw InvalidInput("offset vectors must match the symbol shape");
}

PolyhomSymbol PolyhomSymbol::zero(int dim, int order, int cutoff) {
    return PolyhomSymbol(dim, order, cutoff);
}

PolyhomSymbol PolyhomSymbol::constant(int dim, GaussianRational value) {
    PolyhomSymbol s(dim, 0, kExact);
    Term t;
    t.coeff = std::move(value);
    t.alpha.assign(dim, 0);
    s.add_term(std::move(t));
    return s;
}

PolyhomSymbol PolyhomSymbol::xi(int dim, int direction) {
    if (direction < 1 || direction > dim) throw InvalidInput("xi direction out of range");
    PolyhomSymbol s(dim, 1, kExact);
    Term t;
    t.coeff = GaussianRational(1);
    t.alpha.assign(dim, 0);
    t.alpha[direction - 1] = 1;
    s.add_term(std::move(t));
    return s;
}

PolyhomSymbol PolyhomSymbol::r_power(int dim, int k) {
    PolyhomSymbol s(dim, k, kExact);
    Term t;
    t.coeff = GaussianRational(1);
    t.alpha.assign(dim, 0);
    t.r_exp = k;
    s.add_term(std::move(t));
    return s;
}

PolyhomSymbol PolyhomSymbol::radical_power(int dim, int p) {
    PolyhomSymbol s(dim, p, kExact);
    Term t;
    t.coeff = GaussianRational(1);
    t.alpha.assign(dim, 0);
    t.radical = p;
    s.add_term(std::move(t));
    return s;
}

PolyhomSymbol PolyhomSymbol::scalar_fn(int dim, const std::string& base, VarSide side) {
    PolyhomSymbol s(dim, 0, kExact);
    Term t;
    t.coeff = GaussianRational(1);
    t.alpha.assign(dim, 0);
    t.scalars.push_back({FormalScalar{base, {}, side}, 1});
    s.add_term(std::move(t));
    return s;
}

PolyhomSymbol PolyhomSymbol::identity(int dim, int size, std::vector<int> offsets) {
    if (offsets.empty()) offsets.assign(size, 0);
    PolyhomSymbol s(dim, 0, kExact, size, size, offsets, offsets);
    for (int j = 0; j < size; ++j) {
        Term t;
        t.coeff = GaussianRational(1);
        t.alpha.assign(dim, 0);
        t.row = t.col = j;
        s.add_term(std::move(t));
    }
    return s;
}

PolyhomSymbol PolyhomSymbol::dn_radical_diagonal(int dim, int size) {
    std::vector<int> row_off(size);
    for (int j = 0; j < size; ++j) row_off[j] = j;
    PolyhomSymbol s(dim, 0, kExact, size, size, row_off, std::vector<int>(size, 0));
    for (int j = 0; j < size; ++j) {
        Term t;
        t.coeff = GaussianRational(1);
        t.alpha.assign(dim, 0);
        t.radical = j;
        t.row = t.col = j;
        s.add_term(std::move(t));
    }
    return s;
}

void PolyhomSymbol::add_term(Term t, bool keep_declared) {
    if (static_cast<int>(t.alpha.size()) != dim_)
        throw InvalidInput("term multi-index size does not match symbol dimension");
    if (t.row < 0 || t.row >= rows_ || t.col < 0 || t.col >= cols_)
        throw InvalidInput("term position outside the symbol shape");
    for (int a : t.alpha)
        if (a < 0) throw InvalidInput("negative xi exponent");
    if (!keep_declared) t.degree = t.computed_degree();
    std::sort(t.scalars.begin(), t.scalars.end());
    if (relative_degree(t) > order_)
        throw InvalidInput("term degree exceeds the symbol order");
    terms_.push_back(std::move(t));
    canonicalize();
}

void PolyhomSymbol::add_terms(std::vector<Term> ts) {
    for (Term& t : ts) {
        if (static_cast<int>(t.alpha.size()) != dim_)
            throw InvalidInput("term multi-index size does not match symbol dimension");
        if (t.row < 0 || t.row >= rows_ || t.col < 0 || t.col >= cols_)
            throw InvalidInput("term position outside the symbol shape");
        t.degree = t.computed_degree();
        if (relative_degree(t) > order_)
            throw InvalidInput("term degree exceeds the symbol order");
        terms_.push_back(std::move(t));
    }
    canonicalize();
}

namespace {

/// Sort a scalar monomial and combine repeated scalars (two sided scalars can
/// collapse to the same name at the base point).
void merge_scalar_powers(std::vector<ScalarPower>& scalars) {
    std::sort(scalars.begin(), scalars.end());
    std::vector<ScalarPower> merged;
    for (auto& sp : scalars) {
        if (!merged.empty() && merged.back().first == sp.first)
            merged.back().second += sp.second;
        else
            merged.push_back(std::move(sp));
    }
    std::erase_if(merged, [](const ScalarPower& sp) { return sp.second == 0; });
    scalars = std::move(merged);
}

bool term_key_less(const Term& a, const Term& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    if (a.degree != b.degree) return a.degree > b.degree; // principal first
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.r_exp != b.r_exp) return a.r_exp < b.r_exp;
    if (a.radical != b.radical) return a.radical < b.radical;
    return a.scalars < b.scalars;
}

} // namespace

void PolyhomSymbol::canonicalize() {
    for (auto& t : terms_) merge_scalar_powers(t.scalars);
    std::sort(terms_.begin(), terms_.end(), term_key_less);
    std::vector<Term> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().structure_equal(t))
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff.is_zero(); });
    terms_ = std::move(merged);
}

PolyhomSymbol& PolyhomSymbol::operator+=(const PolyhomSymbol& o) {
    if (dim_ != o.dim_ || rows_ != o.rows_ || cols_ != o.cols_)
        throw InvalidInput("cannot add symbols of different shape/dimension");
    order_ = std::max(order_, o.order_);
    if (cutoff_ == kExact) cutoff_ = o.cutoff_;
    else if (o.cutoff_ != kExact) cutoff_ = std::max(cutoff_, o.cutoff_);
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canonicalize();
    return *this;
}

PolyhomSymbol PolyhomSymbol::operator-() const {
    return scaled(GaussianRational(-1));
}

PolyhomSymbol PolyhomSymbol::scaled(const GaussianRational& q) const {
    PolyhomSymbol s = *this;
    if (q.is_zero()) {
        s.terms_.clear();
        return s;
    }
    for (auto& t : s.terms_) t.coeff *= q;
    return s;
}

PolyhomSymbol PolyhomSymbol::slice(int k) const {
    PolyhomSymbol s(dim_, order_, kExact, rows_, cols_, row_offsets_, col_offsets_);
    for (const auto& t : terms_)
        if (relative_degree(t) == order_ - k) s.terms_.push_back(t);
    return s;
}

std::vector<int> PolyhomSymbol::slice_drops() const {
    std::vector<int> drops;
    for (const auto& t : terms_) {
        const int d = order_ - relative_degree(t);
        if (std::find(drops.begin(), drops.end(), d) == drops.end()) drops.push_back(d);
    }
    std::sort(drops.begin(), drops.end());
    return drops;
}

PolyhomSymbol PolyhomSymbol::truncated(int rel_cutoff) const {
    PolyhomSymbol s = *this;
    std::erase_if(s.terms_, [&](const Term& t) { return relative_degree(t) < rel_cutoff; });
    s.cutoff_ = rel_cutoff;
    return s;
}

PolyhomSymbol PolyhomSymbol::with_cutoff(int rel_cutoff) const {
    PolyhomSymbol s = *this;
    s.cutoff_ = rel_cutoff;
    return s;
}

PolyhomSymbol PolyhomSymbol::dxi(int direction) const {
    if (direction < 1 || direction > dim_) throw InvalidInput("xi direction out of range");
    const int d = direction - 1;
    PolyhomSymbol s(dim_, order_ - 1, cutoff_ == kExact ? kExact : cutoff_ - 1, rows_, cols_,
                    row_offsets_, col_offsets_);
    for (const auto& t : terms_) {
        if (t.alpha[d] > 0) {
            Term u = t;
            u.coeff *= GaussianRational(Rational(t.alpha[d]));
            u.alpha[d] -= 1;
            u.degree -= 1;
            s.terms_.push_back(std::move(u));
        }
        if (t.radical != 0) {
            Term u = t; // d/dxi (R^2+|xi|^2)^{p/2} = p xi_d (R^2+|xi|^2)^{(p-2)/2}
            u.coeff *= GaussianRational(Rational(t.radical));
            u.alpha[d] += 1;
            u.radical -= 2;
            u.degree -= 1;
            s.terms_.push_back(std::move(u));
        }
    }
    s.canonicalize();
    return s;
}

PolyhomSymbol PolyhomSymbol::dx(int direction, VarSide side) const {
    if (direction < 1 || direction > dim_) throw InvalidInput("base direction out of range");
    PolyhomSymbol s(dim_, order_, cutoff_, rows_, cols_, row_offsets_, col_offsets_);
    for (const auto& t : terms_) {
        for (size_t i = 0; i < t.scalars.size(); ++i) {
            const auto& [sc, pw] = t.scalars[i];
            if (sc.side != side) continue;
            Term u = t;
            u.coeff *= GaussianRational(Rational(pw));
            if (pw == 1) u.scalars.erase(u.scalars.begin() + i);
            else u.scalars[i].second -= 1;
            FormalScalar dsc = sc;
            dsc.derivs.push_back(direction);
            std::sort(dsc.derivs.begin(), dsc.derivs.end());
            auto it = std::lower_bound(u.scalars.begin(), u.scalars.end(), dsc,
                                       [](const ScalarPower& x, const FormalScalar& y) {
                                           return x.first < y;
                                       });
            if (it != u.scalars.end() && it->first == dsc) it->second += 1;
            else u.scalars.insert(it, {dsc, 1});
            s.terms_.push_back(std::move(u));
        }
    }
    s.canonicalize();
    return s;
}

namespace {

double probe_value(const FormalScalar& sc, std::uint64_t seed) {
    // stable pseudorandom binding in [0.5, 1.5]
    std::uint64_t h = seed;
    for (char c : sc.name()) h = h * 1099511628211ULL + static_cast<unsigned char>(c);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return 0.5 + (h >> 11) * 0x1.0p-53;
}

} // namespace

HomogeneityReport PolyhomSymbol::homogeneity_check(std::uint64_t probe_seed) const {
    HomogeneityReport rep;
    std::vector<double> xi(dim_);
    for (int i = 0; i < dim_; ++i) xi[i] = 0.3 + 0.17 * (i + 1);
    const double R = 0.83;
    std::vector<double> xi2(dim_);
    for (int i = 0; i < dim_; ++i) xi2[i] = 2.0 * xi[i];
    const auto bind = [&](const FormalScalar& sc) { return probe_value(sc, probe_seed); };
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const Term& t = terms_[i];
        const double v1 = std::abs(t.eval(xi, R, bind));
        const double v2 = std::abs(t.eval(xi2, 2.0 * R, bind));
        HomogeneityTermReport tr;
        tr.index = i;
        tr.declared = t.degree;
        tr.measured = std::log2(v2 / v1);
        tr.pass = std::abs(tr.measured - t.degree) <= 1e-12 * std::max(1.0, std::abs(tr.measured));
        rep.terms.push_back(tr);
        rep.all_pass = rep.all_pass && tr.pass;
    }
    return rep;
}

ParityReport PolyhomSymbol::parity_vanishing_check(std::uint64_t probe_seed) const {
    ParityReport rep;
    const auto bind = [&](const FormalScalar& sc) { return probe_value(sc, probe_seed); };
    const std::vector<double> xi0(dim_, 0.0);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const Term& t = terms_[i];
        ParityTermReport tr;
        tr.index = i;
        tr.parity = (t.alpha_norm() % 2 == 0) ? Parity::Even : Parity::Odd;
        tr.value_at_xi0 = t.eval(xi0, 1.0, bind);
        tr.vanishes_at_xi0 = std::abs(tr.value_at_xi0) == 0.0;
        tr.survives = t.alpha_norm() == 0;
        if (tr.parity == Parity::Odd && !tr.vanishes_at_xi0) rep.odd_terms_all_vanish = false;
        rep.terms.push_back(tr);
    }
    return rep;
}

std::complex<double> PolyhomSymbol::eval_entry(
    int row, int col, const std::vector<double>& xi, double R,
    const std::function<double(const FormalScalar&)>& bind) const {
    std::complex<double> v{0.0, 0.0};
    for (const auto& t : terms_)
        if (t.row == row && t.col == col) v += t.eval(xi, R, bind);
    return v;
}

bool PolyhomSymbol::operator==(const PolyhomSymbol& o) const {
    if (dim_ != o.dim_ || rows_ != o.rows_ || cols_ != o.cols_) return false;
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].structure_equal(o.terms_[i]) && terms_[i].coeff == o.terms_[i].coeff))
            return false;
    return true;
}

// ---------------- JSON ----------------

namespace {

nlohmann::json rational_to_json(const Rational& r) {
    const Integer num = boost::multiprecision::numerator(r);
    const Integer den = boost::multiprecision::denominator(r);
    const Integer lim = Integer(1) << 62;
    nlohmann::json j = nlohmann::json::array();
    if (num > -lim && num < lim) j.push_back(static_cast<std::int64_t>(num));
    else j.push_back(num.str());
    if (den < lim) j.push_back(static_cast<std::int64_t>(den));
    else j.push_back(den.str());
    return j;
}

Rational rational_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw InvalidInput("rational must be [num, den]");
    auto part = [](const nlohmann::json& v) {
        if (v.is_string()) return Integer(v.get<std::string>());
        if (v.is_number_integer()) return Integer(v.get<std::int64_t>());
        throw InvalidInput("rational parts must be integers or decimal strings");
    };
    const Integer den = part(j[1]);
    if (den == 0) throw InvalidInput("zero denominator");
    return Rational(part(j[0]), den);
}

} // namespace

nlohmann::json PolyhomSymbol::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : terms_) {
        nlohmann::json scalars = nlohmann::json::object();
        for (const auto& [sc, pw] : t.scalars) scalars[sc.name()] = pw;
        nlohmann::json jt = {{"degree", t.degree},
                             {"alpha", t.alpha},
                             {"k", t.r_exp},
                             {"p", t.radical},
                             {"coeff",
                              {{"re", rational_to_json(t.coeff.re)},
                               {"im", rational_to_json(t.coeff.im)}}},
                             {"scalars", scalars}};
        if (rows_ != 1 || cols_ != 1) {
            jt["row"] = t.row;
            jt["col"] = t.col;
        }
        terms.push_back(std::move(jt));
    }
    nlohmann::json j = {{"dim", dim_},
                        {"order", order_},
                        {"shape", {rows_, cols_}},
                        {"terms", terms}};
    if (cutoff_ == kExact) j["cutoff"] = nullptr;
    else j["cutoff"] = cutoff_;
    if (rows_ != 1 || cols_ != 1) {
        j["row_offsets"] = row_offsets_;
        j["col_offsets"] = col_offsets_;
    }
    return j;
}

PolyhomSymbol PolyhomSymbol::from_json(const nlohmann::json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        const int order = j.at("order").get<int>();
        int rows = 1, cols = 1;
        if (j.contains("shape")) {
            rows = j["shape"].at(0).get<int>();
            cols = j["shape"].at(1).get<int>();
        }
        int cutoff = kExact;
        if (j.contains("cutoff") && !j["cutoff"].is_null()) cutoff = j["cutoff"].get<int>();
        std::vector<int> row_off, col_off;
        if (j.contains("row_offsets")) row_off = j["row_offsets"].get<std::vector<int>>();
        if (j.contains("col_offsets")) col_off = j["col_offsets"].get<std::vector<int>>();
        PolyhomSymbol s(dim, order, cutoff, rows, cols, row_off, col_off);
        for (const auto& jt : j.at("terms")) {
            Term t;
            t.coeff = GaussianRational(rational_from_json(jt.at("coeff").at("re")),
                                       rational_from_json(jt.at("coeff").at("im")));
            t.alpha = jt.at("alpha").get<std::vector<int>>();
            t.r_exp = jt.at("k").get<int>();
            t.radical = jt.at("p").get<int>();
            t.degree = jt.at("degree").get<int>();
            if (jt.contains("row")) t.row = jt["row"].get<int>();
            if (jt.contains("col")) t.col = jt["col"].get<int>();
            if (jt.contains("scalars"))
                for (const auto& [name, pw] : jt["scalars"].items())
                    t.scalars.push_back({FormalScalar::parse(name), pw.get<int>()});
            s.add_term(std::move(t), /*keep_declared=*/true);
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad symbol JSON: ") + e.what());
    }
}

} // namespace mag::sym
