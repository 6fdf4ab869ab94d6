#include "qspace/integration.hpp"

namespace qspace {

CPoly antiderivative(long base_q_pow, Idx var, const CPoly& f) {
    CPoly out;
    for (const auto& [m, c] : f.terms()) {
        const int n = m.exponent(var);
        if (var == Idx::Zero) {
            out.add(m.with_exponent(var, n + 1), c / CScalar(n + 1));
        } else {
            const QScalar d = qnum(n + 1, QBase::q_pow(base_q_pow));
            out.add(m.with_exponent(var, n + 1), c / CScalar(d));
        }
    }
    return out;
}

CPoly inverse_partial_series_term(DFamily fam, int k, const CPoly& f) {
    const bool plain = fam == DFamily::Plain;
    const long dbase = plain ? 4 : -4;
    const long tbase = plain ? 2 : -2;
    const Idx main_var = plain ? Idx::Minus : Idx::Plus;
    const Idx corr_var = plain ? Idx::Plus : Idx::Minus;
    const QScalar lam = plain ? -QScalar::lambda() : QScalar::lambda();

    // innermost: x3 -> q^{-2(k+1)} x3 (plain) then D^{-1} in the main variable
    const long scale_pow = plain ? -2L * (k + 1) : 2L * (k + 1);
    CPoly r = antiderivative(dbase, main_var,
                             f.scale_var(Idx::Three, CScalar(QScalar::q_power(scale_pow))));
    for (int i = 0; i < k; ++i) {
        // bracket: -lambda x^corr D^{-1}_{main} D^2_{q^2, x3} (plain; sign folded in lam)
        CPoly inner = jackson_D(tbase, Idx::Three, jackson_D(tbase, Idx::Three, r));
        inner = antiderivative(dbase, main_var, inner);
        r = CPoly::variable(corr_var) * CScalar(lam) * inner;
    }
    const long pref = plain ? 2L * k * (k + 1) : -2L * k * (k + 1);
    return r * CScalar(QScalar::q_power(pref));
}

CPoly inverse_partial(DFamily fam, Idx a, const CPoly& f) {
    const bool plain = fam == DFamily::Plain;
    const CScalar q2(QScalar::q_power(2));
    const CScalar qm2(QScalar::q_power(-2));
    if (a == Idx::Zero) return antiderivative(0, Idx::Zero, f);
    if (plain) {
        switch (a) {
            case Idx::Plus:
                return antiderivative(4, Idx::Plus, f);
            case Idx::Three:
                return antiderivative(2, Idx::Three, f.scale_var(Idx::Plus, qm2));
            case Idx::Minus: {
                CPoly out;
                const int kmax = f.max_exponent(Idx::Three) / 2 + 1;
                for (int k = 0; k <= kmax; ++k) {
                    const CPoly term = inverse_partial_series_term(fam, k, f);
                    if (term.is_zero()) break;
                    out += term;
                }
                return out;
            }
            default: break;
        }
    } else {
        switch (a) {
            case Idx::Minus:
                return antiderivative(-4, Idx::Minus, f);
            case Idx::Three:
                return antiderivative(-2, Idx::Three, f.scale_var(Idx::Minus, q2));
            case Idx::Plus: {
                CPoly out;
                const int kmax = f.max_exponent(Idx::Three) / 2 + 1;
                for (int k = 0; k <= kmax; ++k) {
                    const CPoly term = inverse_partial_series_term(fam, k, f);
                    if (term.is_zero()) break;
                    out += term;
                }
                return out;
            }
            default: break;
        }
    }
    throw integration_error("inverse_partial: bad index");
}

}  // namespace qspace
