#include "qspace/ncspace.hpp"

#include <array>
#include <optional>
#include <sstream>

namespace qspace {

namespace {
constexpr int kGenCount = static_cast<int>(Gen::Count);
constexpr long kStepBudget = 1000000;
}  // namespace

std::string gen_name(Gen g) {
    switch (g) {
        case Gen::Tplus: return "T+";
        case Gen::T3: return "T3";
        case Gen::Tminus: return "T-";
        case Gen::TauHalf: return "tau^1/2";
        case Gen::TauHalfInv: return "tau^-1/2";
        case Gen::Lambda: return "Lam";
        case Gen::LambdaInv: return "Lam^-1";
        case Gen::Xplus: return "X+";
        case Gen::X3: return "X3";
        case Gen::Xminus: return "X-";
        case Gen::X0: return "X0";
        case Gen::dXplus: return "dX+";
        case Gen::dX3: return "dX3";
        case Gen::dXminus: return "dX-";
        case Gen::dX0: return "dX0";
        case Gen::Dplus: return "d+";
        case Gen::D3: return "d3";
        case Gen::Dminus: return "d-";
        case Gen::D0: return "d0";
        case Gen::DhPlus: return "dh+";
        case Gen::Dh3: return "dh3";
        case Gen::DhMinus: return "dh-";
        case Gen::Dh0: return "dh0";
        default: return "?";
    }
}

Gen coordinate_gen(Idx a) {
    switch (a) {
        case Idx::Plus: return Gen::Xplus;
        case Idx::Three: return Gen::X3;
        case Idx::Minus: return Gen::Xminus;
        case Idx::Zero: return Gen::X0;
    }
    throw ncspace_error("bad index");
}

Gen differential_gen(Idx a) {
    switch (a) {
        case Idx::Plus: return Gen::dXplus;
        case Idx::Three: return Gen::dX3;
        case Idx::Minus: return Gen::dXminus;
        case Idx::Zero: return Gen::dX0;
    }
    throw ncspace_error("bad index");
}

Gen derivative_gen(DFamily fam, Idx a) {
    if (fam == DFamily::Plain) {
        switch (a) {
            case Idx::Plus: return Gen::Dplus;
            case Idx::Three: return Gen::D3;
            case Idx::Minus: return Gen::Dminus;
            case Idx::Zero: return Gen::D0;
        }
    } else {
        switch (a) {
            case Idx::Plus: return Gen::DhPlus;
            case Idx::Three: return Gen::Dh3;
            case Idx::Minus: return Gen::DhMinus;
            case Idx::Zero: return Gen::Dh0;
        }
    }
    throw ncspace_error("bad index");
}

// ---- NCElement ----------------------------------------------------------------

void NCElement::add(NCWord w, CScalar c) {
    if (c.is_zero()) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(std::move(w), std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

NCElement NCElement::operator+(const NCElement& o) const {
    NCElement r = *this;
    for (const auto& [w, c] : o.terms_) r.add(w, c);
    return r;
}

NCElement NCElement::operator-(const NCElement& o) const {
    NCElement r = *this;
    for (const auto& [w, c] : o.terms_) r.add(w, -c);
    return r;
}

NCElement NCElement::operator*(const NCElement& o) const {
    NCElement r;
    for (const auto& [w1, c1] : terms_) {
        for (const auto& [w2, c2] : o.terms_) {
            NCWord w = w1;
            w.insert(w.end(), w2.begin(), w2.end());
            r.add(std::move(w), c1 * c2);
        }
    }
    return r;
}

NCElement NCElement::operator*(const CScalar& c) const {
    NCElement r;
    if (c.is_zero()) return r;
    for (const auto& [w, v] : terms_) r.add(w, v * c);
    return r;
}

NCElement NCElement::operator-() const {
    NCElement r;
    for (const auto& [w, c] : terms_) r.add(w, -c);
    return r;
}

NCElement operator*(const CScalar& c, const NCElement& e) { return e * c; }

std::string NCElement::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        for (Gen g : w) os << " " << gen_name(g);
    }
    return os.str();
}

// ---- rewriting system -----------------------------------------------------------

namespace {

using RuleRhs = std::vector<std::pair<NCWord, CScalar>>;

struct RewriteSystem {
    NormalOrdering ordering;
    std::array<std::array<std::optional<RuleRhs>, kGenCount>, kGenCount> rules;
    std::array<int, kGenCount> rank;

    const std::optional<RuleRhs>& rule(Gen a, Gen b) const {
        return rules[static_cast<int>(a)][static_cast<int>(b)];
    }
    void set(Gen a, Gen b, RuleRhs rhs) {
        rules[static_cast<int>(a)][static_cast<int>(b)] = std::move(rhs);
    }
};

Idx spatial_at(int k) {
    static const std::array<Idx, 3> s = {Idx::Plus, Idx::Three, Idx::Minus};
    return s[k];
}

void build_t_sector(RewriteSystem& sys) {
    const QScalar q2 = QScalar::q_power(2);
    const QScalar qm2 = QScalar::q_power(-2);
    const QScalar qm4 = QScalar::q_power(-4);
    const QScalar lp = QScalar::lambda_plus();
    const CScalar one(1);

    sys.set(Gen::T3, Gen::Tplus,
            {{{Gen::Tplus, Gen::T3}, CScalar(qm4)}, {{Gen::Tplus}, CScalar(qm2 * lp)}});
    sys.set(Gen::Tminus, Gen::Tplus,
            {{{Gen::Tplus, Gen::Tminus}, CScalar(qm2)},
             {{Gen::T3}, CScalar(-QScalar::q_power(-1))}});
    sys.set(Gen::Tminus, Gen::T3,
            {{{Gen::T3, Gen::Tminus}, CScalar(qm4)}, {{Gen::Tminus}, CScalar(qm2 * lp)}});

    sys.set(Gen::TauHalf, Gen::Tplus, {{{Gen::Tplus, Gen::TauHalf}, CScalar(qm2)}});
    sys.set(Gen::TauHalf, Gen::T3, {{{Gen::T3, Gen::TauHalf}, one}});
    sys.set(Gen::TauHalf, Gen::Tminus, {{{Gen::Tminus, Gen::TauHalf}, CScalar(q2)}});
    sys.set(Gen::TauHalfInv, Gen::Tplus, {{{Gen::Tplus, Gen::TauHalfInv}, CScalar(q2)}});
    sys.set(Gen::TauHalfInv, Gen::T3, {{{Gen::T3, Gen::TauHalfInv}, one}});
    sys.set(Gen::TauHalfInv, Gen::Tminus,
            {{{Gen::Tminus, Gen::TauHalfInv}, CScalar(qm2)}});
    sys.set(Gen::TauHalfInv, Gen::TauHalf, {{{}, one}});
    sys.set(Gen::TauHalf, Gen::TauHalfInv, {{{}, one}});

    for (Gen t : {Gen::Tplus, Gen::T3, Gen::Tminus, Gen::TauHalf, Gen::TauHalfInv}) {
        sys.set(Gen::Lambda, t, {{{t, Gen::Lambda}, one}});
        sys.set(Gen::LambdaInv, t, {{{t, Gen::LambdaInv}, one}});
    }
    sys.set(Gen::LambdaInv, Gen::Lambda, {{{}, one}});
    sys.set(Gen::Lambda, Gen::LambdaInv, {{{}, one}});
}

void build_x_vs_t(RewriteSystem& sys) {
    const CScalar one(1);
    const QScalar q1 = QScalar::q_power(1);
    const QScalar q2 = QScalar::q_power(2);
    const QScalar q4 = QScalar::q_power(4);
    const QScalar qm2 = QScalar::q_power(-2);
    const QScalar qm4 = QScalar::q_power(-4);
    const QScalar lp = QScalar::lambda_plus();
    const CScalar rt_lp = CScalar(RScalar::sqrt_of(lp));
    auto shalf = [](long k) { return CScalar(QScalar::s_power(k)); };  // q^{k/2}

    // X T -> T X + lower, inverted from the printed T X relations.
    sys.set(Gen::Xminus, Gen::Tminus, {{{Gen::Tminus, Gen::Xminus}, CScalar(qm2)}});
    sys.set(Gen::X3, Gen::Tminus,
            {{{Gen::Tminus, Gen::X3}, one}, {{Gen::Xminus}, -shalf(3) * rt_lp}});
    sys.set(Gen::Xplus, Gen::Tminus,
            {{{Gen::Tminus, Gen::Xplus}, CScalar(q2)}, {{Gen::X3}, -shalf(5) * rt_lp}});
    sys.set(Gen::Xminus, Gen::T3,
            {{{Gen::T3, Gen::Xminus}, CScalar(qm4)}, {{Gen::Xminus}, CScalar(qm2 * lp)}});
    sys.set(Gen::X3, Gen::T3, {{{Gen::T3, Gen::X3}, one}});
    sys.set(Gen::Xplus, Gen::T3,
            {{{Gen::T3, Gen::Xplus}, CScalar(q4)}, {{Gen::Xplus}, CScalar(-(q2 * lp))}});
    sys.set(Gen::Xminus, Gen::Tplus,
            {{{Gen::Tplus, Gen::Xminus}, CScalar(qm2)}, {{Gen::X3}, -shalf(-5) * rt_lp}});
    sys.set(Gen::X3, Gen::Tplus,
            {{{Gen::Tplus, Gen::X3}, one}, {{Gen::Xplus}, -shalf(-3) * rt_lp}});
    sys.set(Gen::Xplus, Gen::Tplus, {{{Gen::Tplus, Gen::Xplus}, CScalar(q2)}});
    sys.set(Gen::X0, Gen::Tplus, {{{Gen::Tplus, Gen::X0}, one}});
    sys.set(Gen::X0, Gen::T3, {{{Gen::T3, Gen::X0}, one}});
    sys.set(Gen::X0, Gen::Tminus, {{{Gen::Tminus, Gen::X0}, one}});

    // tau^{1/2} scalings: tau^{1/2} X+ = q^-2 X+ tau^{1/2}, etc.
    auto tau_rules = [&](Gen tau, const QScalar& fp, const QScalar& fm) {
        sys.set(Gen::Xplus, tau, {{{tau, Gen::Xplus}, CScalar(fp.inverse())}});
        sys.set(Gen::X3, tau, {{{tau, Gen::X3}, one}});
        sys.set(Gen::Xminus, tau, {{{tau, Gen::Xminus}, CScalar(fm.inverse())}});
        sys.set(Gen::X0, tau, {{{tau, Gen::X0}, one}});
        sys.set(Gen::dXplus, tau, {{{tau, Gen::dXplus}, CScalar(fp.inverse())}});
        sys.set(Gen::dX3, tau, {{{tau, Gen::dX3}, one}});
        sys.set(Gen::dXminus, tau, {{{tau, Gen::dXminus}, CScalar(fm.inverse())}});
        sys.set(Gen::dX0, tau, {{{tau, Gen::dX0}, one}});
    };
    tau_rules(Gen::TauHalf, qm2, q2);
    tau_rules(Gen::TauHalfInv, q2, qm2);

    // scaling operator: Lambda X^A = q^4 X^A Lambda, Lambda d^A = q^-4 d^A Lambda.
    auto lam_rules = [&](Gen lam, const QScalar& fx) {
        const QScalar fd = fx.inverse();
        for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus}) {
            sys.set(coordinate_gen(a), lam, {{{lam, coordinate_gen(a)}, CScalar(fx.inverse())}});
            sys.set(differential_gen(a), lam,
                    {{{lam, differential_gen(a)}, CScalar(fx.inverse())}});
            sys.set(derivative_gen(DFamily::Plain, a), lam,
                    {{{lam, derivative_gen(DFamily::Plain, a)}, CScalar(fd.inverse())}});
            sys.set(derivative_gen(DFamily::Hatted, a), lam,
                    {{{lam, derivative_gen(DFamily::Hatted, a)}, CScalar(fd.inverse())}});
        }
        sys.set(Gen::X0, lam, {{{lam, Gen::X0}, one}});
        sys.set(Gen::dX0, lam, {{{lam, Gen::dX0}, one}});
        sys.set(Gen::D0, lam, {{{lam, Gen::D0}, one}});
        sys.set(Gen::Dh0, lam, {{{lam, Gen::Dh0}, one}});
    };
    lam_rules(Gen::Lambda, q4);
    lam_rules(Gen::LambdaInv, qm4);
    (void)q1;
}

void build_x_sector(RewriteSystem& sys) {
    const CScalar one(1);
    const QScalar q2 = QScalar::q_power(2);
    const QScalar qm2 = QScalar::q_power(-2);
    const CScalar lam = CScalar(QScalar::lambda());
    if (sys.ordering == NormalOrdering::Standard) {
        sys.set(Gen::X3, Gen::Xplus, {{{Gen::Xplus, Gen::X3}, CScalar(q2)}});
        sys.set(Gen::Xminus, Gen::X3, {{{Gen::X3, Gen::Xminus}, CScalar(q2)}});
        sys.set(Gen::Xminus, Gen::Xplus,
                {{{Gen::Xplus, Gen::Xminus}, one}, {{Gen::X3, Gen::X3}, lam}});
        for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus})
            sys.set(Gen::X0, coordinate_gen(a), {{{coordinate_gen(a), Gen::X0}, one}});
    } else {
        sys.set(Gen::Xplus, Gen::X3, {{{Gen::X3, Gen::Xplus}, CScalar(qm2)}});
        sys.set(Gen::X3, Gen::Xminus, {{{Gen::Xminus, Gen::X3}, CScalar(qm2)}});
        sys.set(Gen::Xplus, Gen::Xminus,
                {{{Gen::Xminus, Gen::Xplus}, one}, {{Gen::X3, Gen::X3}, -lam}});
        for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus})
            sys.set(coordinate_gen(a), Gen::X0, {{{Gen::X0, coordinate_gen(a)}, one}});
    }
}

// Straightening rules for the spatial differentials, solved from
// (P_S + P_T) dX dX = 0 with the good basis {dX+dX3, dX+dX-, dX3dX-}.
void build_dx_sector(RewriteSystem& sys) {
    const CScalar one(1);
    auto projs = projectors(false);
    QMatrix m = projs[0].matrix + projs[1].matrix;  // P_S + P_T, 9x9

    // column order: bad pairs first, then good pairs
    const std::array<std::pair<Idx, Idx>, 6> bad = {{{Idx::Plus, Idx::Plus},
                                                     {Idx::Minus, Idx::Minus},
                                                     {Idx::Three, Idx::Plus},
                                                     {Idx::Minus, Idx::Three},
                                                     {Idx::Three, Idx::Three},
                                                     {Idx::Minus, Idx::Plus}}};
    const std::array<std::pair<Idx, Idx>, 3> good = {{{Idx::Plus, Idx::Three},
                                                      {Idx::Plus, Idx::Minus},
                                                      {Idx::Three, Idx::Minus}}};
    std::array<int, 9> col;  // col[k] = pair-basis position
    for (int k = 0; k < 6; ++k) col[k] = PairBasis::position(bad[k].first, bad[k].second);
    for (int k = 0; k < 3; ++k)
        col[6 + k] = PairBasis::position(good[k].first, good[k].second);

    // Build the permuted system and reduce.
    QMatrix a(9);
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) a.at(r, c) = m.at(r, col[c]);
    // Gaussian elimination to reduced row echelon form on the first 6 columns.
    int row = 0;
    std::vector<int> pivot_col;
    for (int c = 0; c < 9 && row < 9; ++c) {
        int p = -1;
        for (int r = row; r < 9; ++r)
            if (!a.at(r, c).is_zero()) {
                p = r;
                break;
            }
        if (p < 0) continue;
        for (int j = 0; j < 9; ++j) std::swap(a.at(p, j), a.at(row, j));
        const QScalar inv = a.at(row, c).inverse();
        for (int j = 0; j < 9; ++j) a.at(row, j) = a.at(row, j) * inv;
        for (int r = 0; r < 9; ++r) {
            if (r == row || a.at(r, c).is_zero()) continue;
            const QScalar f = a.at(r, c);
            for (int j = 0; j < 9; ++j) a.at(r, j) = a.at(r, j) - f * a.at(row, j);
        }
        pivot_col.push_back(c);
        ++row;
    }
    if (pivot_col.size() != 6 || pivot_col.back() > 5)
        throw ncspace_error("differential straightening: unexpected pivot structure");

    for (int r = 0; r < 6; ++r) {
        const int bc = pivot_col[r];
        RuleRhs rhs;
        for (int k = 0; k < 3; ++k) {
            const QScalar coeff = -a.at(r, 6 + k);
            if (coeff.is_zero()) continue;
            rhs.push_back(
                {{differential_gen(good[k].first), differential_gen(good[k].second)},
                 CScalar(coeff)});
        }
        sys.set(differential_gen(bad[bc].first), differential_gen(bad[bc].second),
                std::move(rhs));
    }

    // time differential: dX0 dX^A = -dX^A dX0, dX0 dX0 = 0
    for (Idx a2 : {Idx::Plus, Idx::Three, Idx::Minus})
        sys.set(Gen::dX0, differential_gen(a2),
                {{{differential_gen(a2), Gen::dX0}, -one}});
    sys.set(Gen::dX0, Gen::dX0, {});
}

void build_dx_vs_x(RewriteSystem& sys) {
    const CScalar one(1);
    const QScalar qm4 = QScalar::q_power(-4);
    const QMatrix rinv = rhat_inverse(false);
    for (Idx e : {Idx::Plus, Idx::Three, Idx::Minus}) {
        for (Idx f : {Idx::Plus, Idx::Three, Idx::Minus}) {
            RuleRhs rhs;
            for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus}) {
                for (Idx b : {Idx::Plus, Idx::Three, Idx::Minus}) {
                    const QScalar c =
                        qm4 * rinv.at(PairBasis::position(e, f), PairBasis::position(a, b));
                    if (c.is_zero()) continue;
                    rhs.push_back({{coordinate_gen(a), differential_gen(b)}, CScalar(c)});
                }
            }
            sys.set(differential_gen(e), coordinate_gen(f), std::move(rhs));
        }
        sys.set(differential_gen(e), Gen::X0, {{{Gen::X0, differential_gen(e)}, one}});
        sys.set(Gen::dX0, coordinate_gen(e), {{{coordinate_gen(e), Gen::dX0}, one}});
    }
    sys.set(Gen::dX0, Gen::X0, {{{Gen::X0, Gen::dX0}, one}});  // b = 1
}

void build_derivatives(RewriteSystem& sys) {
    const CScalar one(1);
    const QScalar q4 = QScalar::q_power(4);
    const QScalar qm4 = QScalar::q_power(-4);
    const QScalar qm2 = QScalar::q_power(-2);
    const CScalar lam = CScalar(QScalar::lambda());
    const QMatrix r = rhat(false);
    const QMatrix rinv = rhat_inverse(false);

    // Leibniz rules d_B X^A = delta^A_B + q^4 R^{AC}_{BD} X^D d_C (plain) and
    // q^-4 R^-1 for the hatted family.
    auto leibniz = [&](DFamily fam, const QMatrix& mat, const QScalar& factor) {
        for (Idx b : {Idx::Plus, Idx::Three, Idx::Minus}) {
            for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus}) {
                RuleRhs rhs;
                if (a == b) rhs.push_back({{}, one});
                for (Idx c : {Idx::Plus, Idx::Three, Idx::Minus}) {
                    for (Idx d : {Idx::Plus, Idx::Three, Idx::Minus}) {
                        const QScalar v =
                            factor * mat.at(PairBasis::position(a, c), PairBasis::position(b, d));
                        if (v.is_zero()) continue;
                        rhs.push_back({{coordinate_gen(d), derivative_gen(fam, c)}, CScalar(v)});
                    }
                }
                sys.set(derivative_gen(fam, b), coordinate_gen(a), std::move(rhs));
            }
            sys.set(derivative_gen(fam, b), Gen::X0,
                    {{{Gen::X0, derivative_gen(fam, b)}, one}});
        }
        const Gen d0 = derivative_gen(fam, Idx::Zero);
        for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus})
            sys.set(d0, coordinate_gen(a), {{{coordinate_gen(a), d0}, one}});
        sys.set(d0, Gen::X0, {{{}, one}, {{Gen::X0, d0}, one}});
    };
    leibniz(DFamily::Plain, r, q4);
    leibniz(DFamily::Hatted, rinv, qm4);

    // derivative-derivative relations (same shape for both families)
    auto internal = [&](DFamily fam) {
        const Gen dp = derivative_gen(fam, Idx::Plus);
        const Gen d3 = derivative_gen(fam, Idx::Three);
        const Gen dm = derivative_gen(fam, Idx::Minus);
        const Gen d0 = derivative_gen(fam, Idx::Zero);
        sys.set(d3, dp, {{{dp, d3}, CScalar(qm2)}});
        sys.set(dm, d3, {{{d3, dm}, CScalar(qm2)}});
        sys.set(dm, dp, {{{dp, dm}, one}, {{d3, d3}, -lam}});
        for (Gen da : {dp, d3, dm}) sys.set(d0, da, {{{da, d0}, one}});
    };
    internal(DFamily::Plain);
    internal(DFamily::Hatted);
}

const RewriteSystem& system_for(NormalOrdering ord) {
    static const RewriteSystem standard = [] {
        RewriteSystem sys;
        sys.ordering = NormalOrdering::Standard;
        for (int i = 0; i < kGenCount; ++i) sys.rank[i] = i;
        build_t_sector(sys);
        build_x_vs_t(sys);
        build_x_sector(sys);
        build_dx_sector(sys);
        build_dx_vs_x(sys);
        build_derivatives(sys);
        return sys;
    }();
    static const RewriteSystem reversed = [] {
        RewriteSystem sys;
        sys.ordering = NormalOrdering::Reversed;
        for (int i = 0; i < kGenCount; ++i) sys.rank[i] = i;
        // reversed coordinate sector: X0 < X- < X3 < X+
        sys.rank[static_cast<int>(Gen::Xplus)] = static_cast<int>(Gen::X0);
        sys.rank[static_cast<int>(Gen::Xminus)] = static_cast<int>(Gen::X3);
        sys.rank[static_cast<int>(Gen::X3)] = static_cast<int>(Gen::Xminus);
        sys.rank[static_cast<int>(Gen::X0)] = static_cast<int>(Gen::Xplus);
        build_t_sector(sys);
        build_x_vs_t(sys);
        build_x_sector(sys);
        build_dx_sector(sys);
        build_dx_vs_x(sys);
        build_derivatives(sys);
        return sys;
    }();
    return ord == NormalOrdering::Standard ? standard : reversed;
}

void check_word_supported(const NCWord& w) {
    bool plain = false, hatted = false;
    for (Gen g : w) {
        if (g >= Gen::Dplus && g <= Gen::D0) plain = true;
        if (g >= Gen::DhPlus && g <= Gen::Dh0) hatted = true;
    }
    if (plain && hatted)
        throw ncspace_error(
            "word mixes the plain and hatted derivative families; convert explicitly");
}

struct NormalizeContext {
    const RewriteSystem& sys;
    RewriteStrategy strategy;
    long steps = 0;
    std::map<NCWord, NCElement>* cache = nullptr;

    NCElement normalize_word(const NCWord& w) {
        if (cache) {
            auto it = cache->find(w);
            if (it != cache->end()) return it->second;
        }
        int found = -1;
        if (strategy == RewriteStrategy::LeftmostFirst) {
            for (int i = 0; i + 1 < static_cast<int>(w.size()); ++i) {
                const auto& rule = sys.rule(w[i], w[i + 1]);
                if (rule) {
                    found = i;
                    break;
                }
                if (sys.rank[static_cast<int>(w[i])] > sys.rank[static_cast<int>(w[i + 1])])
                    throw ncspace_error("no commutation rule for pair " + gen_name(w[i]) +
                                        " " + gen_name(w[i + 1]));
            }
        } else {
            for (int i = static_cast<int>(w.size()) - 2; i >= 0; --i) {
                const auto& rule = sys.rule(w[i], w[i + 1]);
                if (rule) {
                    found = i;
                    break;
                }
            }
            if (found < 0) {
                // verify orderedness
                for (int i = 0; i + 1 < static_cast<int>(w.size()); ++i)
                    if (sys.rank[static_cast<int>(w[i])] > sys.rank[static_cast<int>(w[i + 1])])
                        throw ncspace_error("no commutation rule for pair " + gen_name(w[i]) +
                                            " " + gen_name(w[i + 1]));
            }
        }
        NCElement result;
        if (found < 0) {
            result.add(w, CScalar(1));
        } else {
            if (++steps > kStepBudget) throw ncspace_error("rewrite step budget exhausted");
            const auto& rule = *sys.rule(w[found], w[found + 1]);
            for (const auto& [repl, coeff] : rule) {
                NCWord nw;
                nw.reserve(w.size() - 2 + repl.size());
                nw.insert(nw.end(), w.begin(), w.begin() + found);
                nw.insert(nw.end(), repl.begin(), repl.end());
                nw.insert(nw.end(), w.begin() + found + 2, w.end());
                const NCElement sub = normalize_word(nw);
                for (const auto& [sw, sc] : sub.terms()) result.add(sw, sc * coeff);
            }
        }
        if (cache) cache->emplace(w, result);
        return result;
    }
};

std::map<NCWord, NCElement>& cache_for(NormalOrdering ord) {
    static std::map<NCWord, NCElement> standard_cache;
    static std::map<NCWord, NCElement> reversed_cache;
    return ord == NormalOrdering::Standard ? standard_cache : reversed_cache;
}

}  // namespace

NCElement normalize(const NCElement& e, NormalOrdering ord, RewriteStrategy strategy) {
    const RewriteSystem& sys = system_for(ord);
    NormalizeContext ctx{sys, strategy};
    if (strategy == RewriteStrategy::LeftmostFirst) ctx.cache = &cache_for(ord);
    NCElement out;
    for (const auto& [w, c] : e.terms()) {
        check_word_supported(w);
        const NCElement n = ctx.normalize_word(w);
        for (const auto& [nw, nc] : n.terms()) out.add(nw, nc * c);
    }
    return out;
}

NCElement moyal_weyl(const CPoly& f, NormalOrdering ord) {
    NCElement out;
    for (const auto& [m, c] : f.terms()) {
        NCWord w;
        if (ord == NormalOrdering::Standard) {
            w.insert(w.end(), m.xp, Gen::Xplus);
            w.insert(w.end(), m.x3, Gen::X3);
            w.insert(w.end(), m.xm, Gen::Xminus);
            w.insert(w.end(), m.t, Gen::X0);
        } else {
            w.insert(w.end(), m.t, Gen::X0);
            w.insert(w.end(), m.xm, Gen::Xminus);
            w.insert(w.end(), m.x3, Gen::X3);
            w.insert(w.end(), m.xp, Gen::Xplus);
        }
        out.add(std::move(w), c);
    }
    return out;
}

CPoly moyal_weyl_inv(const NCElement& e, NormalOrdering ord) {
    CPoly out;
    for (const auto& [w, c] : e.terms()) {
        CMono m;
        int phase = 0;  // position in the expected ordering
        for (Gen g : w) {
            int slot;
            switch (g) {
                case Gen::Xplus: slot = ord == NormalOrdering::Standard ? 0 : 3; m.xp++; break;
                case Gen::X3: slot = ord == NormalOrdering::Standard ? 1 : 2; m.x3++; break;
                case Gen::Xminus: slot = ord == NormalOrdering::Standard ? 2 : 1; m.xm++; break;
                case Gen::X0: slot = ord == NormalOrdering::Standard ? 3 : 0; m.t++; break;
                default:
                    throw ncspace_error("moyal_weyl_inv: non-coordinate generator " +
                                        gen_name(g));
            }
            if (slot < phase)
                throw ncspace_error("moyal_weyl_inv: word is not normal-ordered");
            phase = slot;
        }
        out.add(m, c);
    }
    return out;
}

NCElement conjugate_nc(const NCElement& e) {
    auto conj_gen = [](Gen g) -> std::pair<Gen, CScalar> {
        const QScalar q = QScalar::q_power(1);
        const QScalar qi = QScalar::q_power(-1);
        switch (g) {
            case Gen::Xplus: return {Gen::Xminus, CScalar(-q)};
            case Gen::X3: return {Gen::X3, CScalar(1)};
            case Gen::Xminus: return {Gen::Xplus, CScalar(-qi)};
            case Gen::X0: return {Gen::X0, CScalar(1)};
            case Gen::dXplus: return {Gen::dXminus, CScalar(-q)};
            case Gen::dX3: return {Gen::dX3, CScalar(1)};
            case Gen::dXminus: return {Gen::dXplus, CScalar(-qi)};
            case Gen::dX0: return {Gen::dX0, CScalar(1)};
            // conj(d_A) = -g^{AB} q^-6 dhat_B: the conjugate calculus carries the
            // family rescaling (hatted = q^6 * conjugated) along with the metric.
            case Gen::Dplus: return {Gen::DhMinus, CScalar(QScalar::q_power(-5))};
            case Gen::D3: return {Gen::Dh3, CScalar(-QScalar::q_power(-6))};
            case Gen::Dminus: return {Gen::DhPlus, CScalar(QScalar::q_power(-7))};
            case Gen::D0: return {Gen::D0, CScalar(-1)};
            case Gen::DhPlus: return {Gen::Dminus, CScalar(QScalar::q_power(7))};
            case Gen::Dh3: return {Gen::D3, CScalar(-QScalar::q_power(6))};
            case Gen::DhMinus: return {Gen::Dplus, CScalar(QScalar::q_power(5))};
            case Gen::Dh0: return {Gen::Dh0, CScalar(-1)};
            default:
                throw ncspace_error("conjugation of " + gen_name(g) + " is unsupported");
        }
    };
    NCElement out;
    for (const auto& [w, c] : e.terms()) {
        NCWord nw;
        CScalar coeff = c.conj();
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            auto [g2, f] = conj_gen(*it);
            nw.push_back(g2);
            coeff *= f;
        }
        out.add(std::move(nw), coeff);
    }
    return out;
}

CPoly oracle_star(const CPoly& f, const CPoly& g, NormalOrdering ord) {
    const NCElement prod = moyal_weyl(f, ord) * moyal_weyl(g, ord);
    return moyal_weyl_inv(normalize(prod, ord), ord);
}

CPoly derivative_action_oracle(DFamily fam, Idx a, const CPoly& f) {
    const NormalOrdering ord =
        fam == DFamily::Plain ? NormalOrdering::Standard : NormalOrdering::Reversed;
    NCElement e = NCElement::generator(derivative_gen(fam, a)) * moyal_weyl(f, ord);
    e = normalize(e, ord);
    NCElement coordinate_part;
    for (const auto& [w, c] : e.terms()) {
        bool has_derivative = false;
        for (Gen g : w)
            if (g >= Gen::Dplus) has_derivative = true;
        if (!has_derivative) coordinate_part.add(w, c);
    }
    return moyal_weyl_inv(coordinate_part, ord);
}

NCElement hat_conversion(const NCElement& e) {
    const QScalar q6 = QScalar::q_power(6);
    const QScalar qm6 = QScalar::q_power(-6);
    NCElement out;
    for (const auto& [w, c] : e.terms()) {
        NCWord nw;
        CScalar coeff = c;
        for (Gen g : w) {
            switch (g) {
                case Gen::Dplus: nw.push_back(Gen::DhPlus); coeff *= CScalar(qm6); break;
                case Gen::D3: nw.push_back(Gen::Dh3); coeff *= CScalar(qm6); break;
                case Gen::Dminus: nw.push_back(Gen::DhMinus); coeff *= CScalar(qm6); break;
                case Gen::D0: nw.push_back(Gen::Dh0); break;
                case Gen::DhPlus: nw.push_back(Gen::Dplus); coeff *= CScalar(q6); break;
                case Gen::Dh3: nw.push_back(Gen::D3); coeff *= CScalar(q6); break;
                case Gen::DhMinus: nw.push_back(Gen::Dminus); coeff *= CScalar(q6); break;
                case Gen::Dh0: nw.push_back(Gen::D0); break;
                default: nw.push_back(g); break;
            }
        }
        out.add(std::move(nw), coeff);
    }
    return out;
}

std::vector<CheckResult> differential_relation_check() {
    std::vector<CheckResult> out;
    const std::array<Idx, 3> spatial = {Idx::Plus, Idx::Three, Idx::Minus};
    auto projs = projectors(false);
    for (int which : {0, 1}) {  // P_S, P_T
        const QMatrix& p = projs[which].matrix;
        bool ok = true;
        std::string first_fail;
        for (Idx a : spatial) {
            for (Idx b : spatial) {
                NCElement e;
                for (Idx c : spatial) {
                    for (Idx d : spatial) {
                        const QScalar v =
                            p.at(PairBasis::position(a, b), PairBasis::position(c, d));
                        if (v.is_zero()) continue;
                        e.add({differential_gen(c), differential_gen(d)}, CScalar(v));
                    }
                }
                if (!normalize(e).is_zero()) {
                    ok = false;
                    if (first_fail.empty())
                        first_fail = idx_name(a) + idx_name(b);
                }
            }
        }
        out.push_back({which == 0 ? "(P_S) dX dX = 0" : "(P_T) dX dX = 0", ok, first_fail});
    }
    {
        const QMatrix r = rhat(false);
        bool ok = true;
        std::string first_fail;
        for (Idx a : spatial) {
            for (Idx b : spatial) {
                NCElement rel = NCElement::word({coordinate_gen(a), differential_gen(b)});
                for (Idx c : spatial) {
                    for (Idx d : spatial) {
                        const QScalar v = QScalar::q_power(4) *
                                          r.at(PairBasis::position(a, b), PairBasis::position(c, d));
                        if (v.is_zero()) continue;
                        rel = rel - CScalar(v) *
                                        NCElement::word({differential_gen(c), coordinate_gen(d)});
                    }
                }
                if (!normalize(rel).is_zero()) {
                    ok = false;
                    if (first_fail.empty()) first_fail = idx_name(a) + idx_name(b);
                }
            }
        }
        out.push_back({"X^A dX^B = q^4 R^{AB}_{CD} dX^C X^D", ok, first_fail});
    }
    return out;
}

OneForm exterior_derivative(const CPoly& f) {
    OneForm out;
    for (Idx i : {Idx::Zero, Idx::Plus, Idx::Three, Idx::Minus})
        out.comp[static_cast<int>(i)] = derivative_action_oracle(DFamily::Plain, i, f);
    return out;
}

std::map<std::pair<Gen, Gen>, CPoly> exterior_derivative2(const CPoly& f) {
    const OneForm df = exterior_derivative(f);
    std::map<std::pair<Gen, Gen>, CPoly> out;
    for (Idx i : {Idx::Zero, Idx::Plus, Idx::Three, Idx::Minus}) {
        const CPoly& gi = df.comp[static_cast<int>(i)];
        if (gi.is_zero()) continue;
        for (Idx j : {Idx::Zero, Idx::Plus, Idx::Three, Idx::Minus}) {
            const CPoly gij = derivative_action_oracle(DFamily::Plain, j, gi);
            if (gij.is_zero()) continue;
            // contribution -dX^i dX^j * gij; straighten the two-form word
            const NCElement form = normalize(
                NCElement::word({differential_gen(i), differential_gen(j)}),
                NormalOrdering::Standard);
            for (const auto& [w, c] : form.terms()) {
                if (w.size() != 2) throw ncspace_error("unexpected two-form word");
                QScalar plain;
                if (!c.is_plain(&plain))
                    throw ncspace_error("two-form straightening with non-plain scalar");
                auto key = std::make_pair(w[0], w[1]);
                auto it = out.find(key);
                const CPoly add = gij * CScalar(-plain);
                if (it == out.end())
                    out.emplace(key, add);
                else
                    it->second += add;
            }
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        if (it->second.is_zero()) it = out.erase(it);
        else ++it;
    }
    return out;
}

}  // namespace qspace
