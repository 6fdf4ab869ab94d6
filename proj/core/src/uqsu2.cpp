#include "qspace/uqsu2.hpp"

#include <sstream>

namespace qspace {

std::string uqgen_name(UqGen g) {
    switch (g) {
        case UqGen::Tplus: return "T+";
        case UqGen::Tminus: return "T-";
        case UqGen::T3: return "T3";
        case UqGen::Tau: return "tau";
        case UqGen::TauPowHalf: return "tau^1/2";
        case UqGen::TauPowMinusHalf: return "tau^-1/2";
        case UqGen::Casimir: return "casimir";
    }
    return "?";
}

RepVector RepVector::basis(int twoj, int twom) {
    if (twoj < 0 || std::abs(twom) > twoj || (twoj - twom) % 2 != 0)
        throw uqsu2_error("invalid weight state");
    RepVector v;
    v.add({twoj, twom}, CScalar(1));
    return v;
}

void RepVector::add(JM state, const CScalar& c) {
    if (c.is_zero()) return;
    auto it = amp_.find(state);
    if (it == amp_.end()) {
        amp_.emplace(state, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) amp_.erase(it);
    }
}

RepVector RepVector::operator+(const RepVector& o) const {
    RepVector r = *this;
    for (const auto& [s, c] : o.amp_) r.add(s, c);
    return r;
}

RepVector RepVector::operator-(const RepVector& o) const {
    RepVector r = *this;
    for (const auto& [s, c] : o.amp_) r.add(s, -c);
    return r;
}

RepVector RepVector::operator*(const CScalar& c) const {
    RepVector r;
    if (c.is_zero()) return r;
    for (const auto& [s, v] : amp_) r.add(s, v * c);
    return r;
}

std::string RepVector::to_string() const {
    if (amp_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, c] : amp_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")|";
        if (s.twoj % 2 == 0) os << s.twoj / 2;
        else os << s.twoj << "/2";
        os << ",";
        if (s.twom % 2 == 0) os << s.twom / 2;
        else os << s.twom << "/2";
        os << ">";
    }
    return os.str();
}

QScalar qnum_half(long twon, long base_q_pow) {
    // [[n]]_{q^k} = (1 - q^{kn})/(1 - q^k) = (1 - s^{k*twon})/(1 - s^{2k})
    const QScalar one(1);
    const QScalar num = one - QScalar::s_power(base_q_pow * twon);
    const QScalar den = one - QScalar::s_power(2 * base_q_pow);
    return num / den;
}

QScalar casimir_eigenvalue(int twoj) {
    return qnum_half(twoj, -2) * qnum_half(twoj + 2, 2);
}

namespace {

RepVector act_basis(UqGen g, const JM& s) {
    RepVector out;
    const int twoj = s.twoj, twom = s.twom;
    switch (g) {
        case UqGen::T3:
            out.add(s, CScalar(QScalar::q_power(-1) * qnum_half(2 * twom, -2)));
            return out;
        case UqGen::Tau:
            out.add(s, CScalar(QScalar::s_power(-4 * twom)));
            return out;
        case UqGen::TauPowHalf:
            out.add(s, CScalar(QScalar::s_power(-2 * twom)));
            return out;
        case UqGen::TauPowMinusHalf:
            out.add(s, CScalar(QScalar::s_power(2 * twom)));
            return out;
        case UqGen::Tplus: {
            if (twom >= twoj) return out;
            const QScalar prod = qnum_half(twoj + twom + 2, -2) * qnum_half(twoj - twom, 2);
            out.add({twoj, twom + 2},
                    CScalar(QScalar::q_power(-1)) * CScalar(RScalar::sqrt_of(prod)));
            return out;
        }
        case UqGen::Tminus: {
            if (twom <= -twoj) return out;
            const QScalar prod = qnum_half(twoj + twom, -2) * qnum_half(twoj - twom + 2, 2);
            out.add({twoj, twom - 2},
                    CScalar(QScalar::q_power(1)) * CScalar(RScalar::sqrt_of(prod)));
            return out;
        }
        case UqGen::Casimir:
            break;
    }
    const QScalar lam2inv = (QScalar::lambda() * QScalar::lambda()).inverse();
    RepVector v;
    v.add(s, CScalar(1));
    RepVector r = act(UqGen::TauPowHalf, v) * CScalar(QScalar::q_power(2) * lam2inv);
    r = r + act(UqGen::TauPowMinusHalf, v) * CScalar(lam2inv);
    r = r + act(UqGen::TauPowMinusHalf, act(UqGen::Tplus, act(UqGen::Tminus, v)));
    r = r - v * CScalar(QScalar::q_power(1) * lam2inv * QScalar::lambda_plus());
    return r;
}

UqGen leg_of(Gen g) {
    switch (g) {
        case Gen::Tplus: return UqGen::Tplus;
        case Gen::Tminus: return UqGen::Tminus;
        case Gen::T3: return UqGen::T3;
        case Gen::TauHalf: return UqGen::TauPowHalf;
        case Gen::TauHalfInv: return UqGen::TauPowMinusHalf;
        default: throw uqsu2_error("unexpected symmetry-sector generator");
    }
}

}  // namespace

RepVector act(UqGen g, const RepVector& v) {
    RepVector out;
    for (const auto& [s, c] : v.amplitudes()) {
        const RepVector part = act_basis(g, s);
        for (const auto& [s2, c2] : part.amplitudes()) out.add(s2, c2 * c);
    }
    return out;
}

std::vector<TensorTerm> coproduct(UqGen g) {
    const NCElement one = NCElement::one();
    switch (g) {
        case UqGen::Tplus:
            return {{NCElement::generator(Gen::Tplus), one},
                    {NCElement::generator(Gen::TauHalf), NCElement::generator(Gen::Tplus)}};
        case UqGen::Tminus:
            return {{NCElement::generator(Gen::Tminus), one},
                    {NCElement::generator(Gen::TauHalf), NCElement::generator(Gen::Tminus)}};
        case UqGen::T3:
            return {{NCElement::generator(Gen::T3), one},
                    {NCElement::word({Gen::TauHalf, Gen::TauHalf}),
                     NCElement::generator(Gen::T3)}};
        default:
            throw uqsu2_error("coproduct: unsupported generator " + uqgen_name(g));
    }
}

NCElement antipode(UqGen g) {
    switch (g) {
        case UqGen::Tplus: return -NCElement::word({Gen::TauHalfInv, Gen::Tplus});
        case UqGen::Tminus: return -NCElement::word({Gen::TauHalfInv, Gen::Tminus});
        case UqGen::T3:
            return -NCElement::word({Gen::TauHalfInv, Gen::TauHalfInv, Gen::T3});
        case UqGen::TauPowHalf: return NCElement::generator(Gen::TauHalfInv);
        case UqGen::TauPowMinusHalf: return NCElement::generator(Gen::TauHalf);
        case UqGen::Tau: return NCElement::word({Gen::TauHalfInv, Gen::TauHalfInv});
        default:
            throw uqsu2_error("antipode: unsupported generator " + uqgen_name(g));
    }
}

CScalar counit(UqGen g) {
    switch (g) {
        case UqGen::Tplus:
        case UqGen::Tminus:
        case UqGen::T3:
            return CScalar(0);
        case UqGen::Tau:
        case UqGen::TauPowHalf:
        case UqGen::TauPowMinusHalf:
            return CScalar(1);
        default:
            throw uqsu2_error("counit: unsupported generator " + uqgen_name(g));
    }
}

NCElement act_on_coordinate(UqGen g, Gen coordinate) {
    if (coordinate == Gen::X0) {
        switch (g) {
            case UqGen::Tplus:
            case UqGen::Tminus:
            case UqGen::T3:
                return NCElement();
            case UqGen::Tau:
            case UqGen::TauPowHalf:
            case UqGen::TauPowMinusHalf:
                return NCElement::generator(Gen::X0);
            default:
                throw uqsu2_error("act_on_coordinate: unsupported generator");
        }
    }
    int twom;
    switch (coordinate) {
        case Gen::Xminus: twom = -2; break;
        case Gen::X3: twom = 0; break;
        case Gen::Xplus: twom = 2; break;
        default:
            throw uqsu2_error("act_on_coordinate: not a coordinate generator");
    }
    const RepVector image = act(g, RepVector::basis(2, twom));
    NCElement out;
    for (const auto& [s, c] : image.amplitudes()) {
        Gen target;
        if (s.twom == -2) target = Gen::Xminus;
        else if (s.twom == 0) target = Gen::X3;
        else target = Gen::Xplus;
        out += c * NCElement::generator(target);
    }
    return out;
}

NCElement commute_through(UqGen g, Gen coordinate) {
    NCElement out;
    for (const auto& term : coproduct(g)) {
        if (term.left.terms().size() != 1)
            throw uqsu2_error("commute_through: unexpected coproduct leg");
        const auto& [w, c] = *term.left.terms().begin();
        NCElement acted = NCElement::generator(coordinate);
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            NCElement next;
            for (const auto& [aw, ac] : acted.terms()) {
                if (aw.size() != 1) throw uqsu2_error("commute_through: non-linear leg");
                next += ac * act_on_coordinate(leg_of(*it), aw[0]);
            }
            acted = next;
        }
        out += (c * acted) * term.right;
    }
    return out;
}

std::vector<UqCheck> uqsu2_identity_check(int max_twoj) {
    std::vector<UqCheck> out;
    auto record = [&](const std::string& name, bool ok) { out.push_back({name, ok}); };

    const CScalar qc(QScalar::q_power(1));
    const CScalar qi(QScalar::q_power(-1));
    const CScalar q2(QScalar::q_power(2));
    const CScalar qm2(QScalar::q_power(-2));
    const CScalar lp(QScalar::lambda_plus());

    bool rel1 = true, rel2 = true, rel3 = true;
    for (int twoj = 0; twoj <= max_twoj; ++twoj) {
        for (int twom = -twoj; twom <= twoj; twom += 2) {
            const RepVector v = RepVector::basis(twoj, twom);
            const RepVector r1 = act(UqGen::Tplus, act(UqGen::Tminus, v)) * qi -
                                 act(UqGen::Tminus, act(UqGen::Tplus, v)) * qc -
                                 act(UqGen::T3, v);
            if (!r1.is_zero()) rel1 = false;
            const RepVector r2 = act(UqGen::T3, act(UqGen::Tplus, v)) * q2 -
                                 act(UqGen::Tplus, act(UqGen::T3, v)) * qm2 -
                                 act(UqGen::Tplus, v) * lp;
            if (!r2.is_zero()) rel2 = false;
            const RepVector r3 = act(UqGen::Tminus, act(UqGen::T3, v)) * q2 -
                                 act(UqGen::T3, act(UqGen::Tminus, v)) * qm2 -
                                 act(UqGen::Tminus, v) * lp;
            if (!r3.is_zero()) rel3 = false;
        }
    }
    record("relation q^-1 T+T- - q T-T+ = T3", rel1);
    record("relation q^2 T3T+ - q^-2 T+T3 = lam_+ T+", rel2);
    record("relation q^2 T-T3 - q^-2 T3T- = lam_+ T-", rel3);

    bool tau_ok = true;
    for (int twoj = 0; twoj <= max_twoj; ++twoj)
        for (int twom = -twoj; twom <= twoj; twom += 2) {
            const RepVector v = RepVector::basis(twoj, twom);
            const RepVector lhs = act(UqGen::Tau, v);
            const RepVector rhs = v - act(UqGen::T3, v) * CScalar(QScalar::lambda());
            if (!(lhs == rhs)) tau_ok = false;
        }
    record("tau = 1 - lambda T3", tau_ok);

    bool cas_diag = true, cas_comm = true;
    for (int twoj = 0; twoj <= max_twoj; ++twoj) {
        const CScalar ev(casimir_eigenvalue(twoj));
        for (int twom = -twoj; twom <= twoj; twom += 2) {
            const RepVector v = RepVector::basis(twoj, twom);
            if (!(act(UqGen::Casimir, v) == v * ev)) cas_diag = false;
            for (UqGen g : {UqGen::Tplus, UqGen::Tminus, UqGen::T3}) {
                const RepVector c1 = act(UqGen::Casimir, act(g, v));
                const RepVector c2 = act(g, act(UqGen::Casimir, v));
                if (!(c1 == c2)) cas_comm = false;
            }
        }
    }
    record("Casimir eigenvalue [[j]][[j+1]]", cas_diag);
    record("Casimir commutes with the generators", cas_comm);

    const CScalar rt = CScalar(RScalar::sqrt_of(QScalar::lambda_plus()));
    auto shalf = [](long k) { return CScalar(QScalar::s_power(k)); };
    bool trip = true;
    auto expect = [&](UqGen g, Gen x, const NCElement& e) {
        if (!(act_on_coordinate(g, x) == e)) trip = false;
    };
    expect(UqGen::Tminus, Gen::Xminus, NCElement());
    expect(UqGen::Tminus, Gen::X3, shalf(3) * rt * NCElement::generator(Gen::Xminus));
    expect(UqGen::Tminus, Gen::Xplus, shalf(1) * rt * NCElement::generator(Gen::X3));
    expect(UqGen::T3, Gen::Xminus, -(q2 * lp) * NCElement::generator(Gen::Xminus));
    expect(UqGen::T3, Gen::X3, NCElement());
    expect(UqGen::T3, Gen::Xplus, (qm2 * lp) * NCElement::generator(Gen::Xplus));
    expect(UqGen::Tplus, Gen::Xminus, shalf(-1) * rt * NCElement::generator(Gen::X3));
    expect(UqGen::Tplus, Gen::X3, shalf(-3) * rt * NCElement::generator(Gen::Xplus));
    expect(UqGen::Tplus, Gen::Xplus, NCElement());
    record("triplet actions match the printed table", trip);

    bool cross = true;
    for (UqGen g : {UqGen::Tplus, UqGen::Tminus, UqGen::T3}) {
        Gen tg = g == UqGen::Tplus ? Gen::Tplus
                                   : (g == UqGen::Tminus ? Gen::Tminus : Gen::T3);
        for (Gen x : {Gen::Xplus, Gen::X3, Gen::Xminus, Gen::X0}) {
            const NCElement via_rules = normalize(NCElement::word({tg, x}));
            const NCElement via_coproduct = normalize(commute_through(g, x));
            if (!(via_rules == via_coproduct)) cross = false;
        }
    }
    record("cross-product relations agree with the coproduct route", cross);

    bool hopf = true;
    for (UqGen g : {UqGen::Tplus, UqGen::Tminus, UqGen::T3}) {
        NCElement left, right;
        for (const auto& term : coproduct(g)) {
            auto apply_antipode = [&](const NCElement& e) {
                NCElement total;
                for (const auto& [w, c] : e.terms()) {
                    NCElement prod = NCElement::one();
                    for (auto it = w.rbegin(); it != w.rend(); ++it)
                        prod = antipode(leg_of(*it)) * prod;
                    total += c * prod;
                }
                return total;
            };
            left += apply_antipode(term.left) * term.right;
            right += term.left * apply_antipode(term.right);
        }
        if (!normalize(left).is_zero()) hopf = false;
        if (!normalize(right).is_zero()) hopf = false;
    }
    record("Hopf axiom m(S x id)Delta = eps = m(id x S)Delta", hopf);

    const CScalar lam(QScalar::lambda());
    std::vector<NCElement> rels;
    rels.push_back(NCElement::word({Gen::X3, Gen::Xplus}) -
                   q2 * NCElement::word({Gen::Xplus, Gen::X3}));
    rels.push_back(NCElement::word({Gen::X3, Gen::Xminus}) -
                   qm2 * NCElement::word({Gen::Xminus, Gen::X3}));
    rels.push_back(NCElement::word({Gen::Xminus, Gen::Xplus}) -
                   NCElement::word({Gen::Xplus, Gen::Xminus}) -
                   lam * NCElement::word({Gen::X3, Gen::X3}));
    bool covar = true;
    for (Gen t : {Gen::Tplus, Gen::T3, Gen::Tminus}) {
        const NCElement tg = NCElement::generator(t);
        for (const NCElement& r : rels) {
            if (!normalize(tg * r - r * tg).is_zero()) covar = false;
        }
    }
    record("coordinate relations commute through the symmetry generators", covar);

    return out;
}

}  // namespace qspace
