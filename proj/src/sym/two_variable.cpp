#include "mag/sym/two_variable.hpp"

namespace mag::sym {

namespace {

bool is_jet_scalar(const FormalScalar& sc, const JetSpec& jet) {
    return sc.side != VarSide::None && sc.base == jet.function;
}

} // namespace

TwoVariableSymbol::TwoVariableSymbol(PolyhomSymbol storage, JetSpec jet)
    : storage_(std::move(storage)), jet_(std::move(jet)) {
    if (!storage_.is_scalar_shape())
        throw InvalidInput("two-variable symbols are scalar-shaped");
    std::vector<Term> kept;
    for (const Term& t : storage_.terms()) {
        bool drop = false;
        for (const auto& [sc, pw] : t.scalars) {
            if (is_jet_scalar(sc, jet_) &&
                static_cast<int>(sc.derivs.size()) > jet_.depth) {
                if (jet_.exact_polynomial) {
                    drop = true; // identically zero for a polynomial jet
                    break;
                }
                throw JetTooShallow("term references " + sc.name() +
                                    " beyond the stored jet depth " +
                                    std::to_string(jet_.depth));
            }
        }
        if (!drop) kept.push_back(t);
    }
    PolyhomSymbol cleaned(storage_.dim(), storage_.order(), storage_.cutoff());
    cleaned.add_terms(std::move(kept));
    storage_ = std::move(cleaned);
}

TwoVariableSymbol TwoVariableSymbol::dxi(int direction) const {
    TwoVariableSymbol out = *this;
    out.storage_ = storage_.dxi(direction);
    return out;
}

TwoVariableSymbol TwoVariableSymbol::dy(int direction) const {
    // Differentiating a jet scalar already at the stored depth is only legal
    // for exact polynomial jets (the result is zero).
    for (const Term& t : storage_.terms())
        for (const auto& [sc, pw] : t.scalars)
            if (sc.side == VarSide::Y && is_jet_scalar(sc, jet_) &&
                static_cast<int>(sc.derivs.size()) >= jet_.depth && !jet_.exact_polynomial)
                throw JetTooShallow("d/dy needs " + sc.name() +
                                    " derivatives beyond the stored jet depth " +
                                    std::to_string(jet_.depth));
    TwoVariableSymbol out = *this;
    out.storage_ = storage_.dx(direction, VarSide::Y);
    if (jet_.exact_polynomial) {
        // Discard jet scalars that exceeded the polynomial degree.
        std::vector<Term> kept;
        for (const Term& t : out.storage_.terms()) {
            bool drop = false;
            for (const auto& [sc, pw] : t.scalars)
                if (is_jet_scalar(sc, jet_) && static_cast<int>(sc.derivs.size()) > jet_.depth)
                    drop = true;
            if (!drop) kept.push_back(t);
        }
        PolyhomSymbol cleaned(storage_.dim(), out.storage_.order(), out.storage_.cutoff());
        cleaned.add_terms(std::move(kept));
        out.storage_ = std::move(cleaned);
    }
    return out;
}

PolyhomSymbol TwoVariableSymbol::at_base_point() const {
    PolyhomSymbol out(storage_.dim(), storage_.order(), storage_.cutoff());
    std::vector<Term> evaluated;
    for (const Term& t : storage_.terms()) {
        Term u = t;
        u.scalars.clear();
        bool vanish = false;
        for (const auto& [sc, pw] : t.scalars) {
            if (sc.side == VarSide::None) {
                u.scalars.push_back({sc, pw});
                continue;
            }
            if (is_jet_scalar(sc, jet_) && sc.derivs.size() <= 1) {
                vanish = true; // S(0) = 0 and grad S(0) = 0
                break;
            }
            FormalScalar constant = sc;
            constant.side = VarSide::None;
            u.scalars.push_back({std::move(constant), pw});
        }
        if (!vanish) evaluated.push_back(std::move(u));
    }
    out.add_terms(std::move(evaluated));
    return out;
}

PolyhomSymbol reduce_two_variable(const TwoVariableSymbol& sym, int target_degree) {
    const int dim = sym.dim();
    PolyhomSymbol total = sym.at_base_point();

    PolyhomSymbol first_correction(dim, sym.order() - 1, PolyhomSymbol::kExact);
    for (int l = 1; l <= dim; ++l)
        first_correction += sym.dxi(l).dy(l).at_base_point();
    total += first_correction.scaled(GaussianRational(Rational(0), Rational(-1))); // -i

    PolyhomSymbol second_correction(dim, sym.order() - 2, PolyhomSymbol::kExact);
    for (int l = 1; l <= dim; ++l)
        for (int s = 1; s <= dim; ++s)
            second_correction += sym.dxi(l).dxi(s).dy(l).dy(s).at_base_point();
    total += second_correction.scaled(GaussianRational(Rational(-1, 2)));

    return total.truncated(target_degree);
}

} // namespace mag::sym
