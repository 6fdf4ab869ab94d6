#include "qspace/calculus.hpp"

namespace qspace {

CPoly jackson_D(long base_q_pow, Idx var, const CPoly& f) {
    CPoly out;
    for (const auto& [m, c] : f.terms()) {
        const int n = m.exponent(var);
        if (n == 0) continue;
        const QScalar num = qnum(n, QBase::q_pow(base_q_pow));
        out.add(m.with_exponent(var, n - 1), c * CScalar(num));
    }
    return out;
}

namespace {

// product [[n]][[n-1]]...[[n-k+1]] in the given base (falling q-factorial)
QScalar falling_qfact(int n, int k, long base_q_pow) {
    QScalar r(1);
    for (int i = 0; i < k; ++i) r = r * qnum(n - i, QBase::q_pow(base_q_pow));
    return r;
}

}  // namespace

CPoly star(const CPoly& f, const CPoly& g, NormalOrdering ord) {
    CPoly out;
    const bool rev = (ord == NormalOrdering::Reversed);
    const long dbase = rev ? -4 : 4;
    const QScalar lam = rev ? -QScalar::lambda() : QScalar::lambda();
    for (const auto& [m1, c1] : f.terms()) {
        for (const auto& [m2, c2] : g.terms()) {
            const int kmax = rev ? std::min(m1.xp, m2.xm) : std::min(m1.xm, m2.xp);
            for (int k = 0; k <= kmax; ++k) {
                QScalar coeff = lam.pow(k) / qfact(k, QBase::q_pow(dbase));
                CMono a = m1, b = m2;
                if (!rev) {
                    coeff = coeff * falling_qfact(m1.xm, k, 4) * falling_qfact(m2.xp, k, 4);
                    a.xm -= k;
                    b.xp -= k;
                    // q^{2(n3 n'+ + n- n'3)} on the differentiated factors
                    coeff = coeff *
                            QScalar::q_power(2L * (a.x3 * b.xp + a.xm * b.x3));
                } else {
                    coeff = coeff * falling_qfact(m1.xp, k, -4) * falling_qfact(m2.xm, k, -4);
                    a.xp -= k;
                    b.xm -= k;
                    coeff = coeff *
                            QScalar::q_power(-2L * (a.x3 * b.xm + a.xp * b.x3));
                }
                CMono m = a + b;
                m.x3 += 2 * k;
                out.add(m, c1 * c2 * CScalar(coeff));
            }
        }
    }
    return out;
}

namespace {

CPoly partial_left(DFamily fam, Idx a, const CPoly& f) {
    const CScalar q2(QScalar::q_power(2));
    const CScalar qm2(QScalar::q_power(-2));
    const CScalar lam(QScalar::lambda());
    if (fam == DFamily::Plain) {
        switch (a) {
            case Idx::Plus:
                return jackson_D(4, Idx::Plus, f);
            case Idx::Three:
                return jackson_D(2, Idx::Three, f.scale_var(Idx::Plus, q2));
            case Idx::Minus: {
                CPoly r = jackson_D(4, Idx::Minus, f.scale_var(Idx::Three, q2));
                r += CPoly::variable(Idx::Plus) * lam *
                     jackson_D(2, Idx::Three, jackson_D(2, Idx::Three, f));
                return r;
            }
            case Idx::Zero: {
                CPoly out;
                for (const auto& [m, c] : f.terms()) {
                    if (m.t == 0) continue;
                    out.add(m.with_exponent(Idx::Zero, m.t - 1), c * CScalar(m.t));
                }
                return out;
            }
        }
    } else {
        switch (a) {
            case Idx::Minus:
                return jackson_D(-4, Idx::Minus, f);
            case Idx::Three:
                return jackson_D(-2, Idx::Three, f.scale_var(Idx::Minus, qm2));
            case Idx::Plus: {
                CPoly r = jackson_D(-4, Idx::Plus, f.scale_var(Idx::Three, qm2));
                r -= CPoly::variable(Idx::Minus) * lam *
                     jackson_D(-2, Idx::Three, jackson_D(-2, Idx::Three, f));
                return r;
            }
            case Idx::Zero:
                return partial_left(DFamily::Plain, Idx::Zero, f);
        }
    }
    throw calculus_error("partial: bad index");
}

}  // namespace

CPoly partial(DFamily fam, Idx a, Side side, const CPoly& f) {
    if (side == Side::Left) return partial_left(fam, a, f);
    if (a == Idx::Zero) return -partial_left(fam, Idx::Zero, f);
    // Right actions contract the metric from the right:
    // f <| d_A = (f <| d^B) g_{BA}.  With the antidiagonal metric the partner
    // index is unique.
    const Idx b = a == Idx::Plus ? Idx::Minus : (a == Idx::Minus ? Idx::Plus : Idx::Three);
    return partial_upper(fam, b, Side::Right, f) * CScalar(metric_lower(b, a));
}

CPoly partial_upper(DFamily fam, Idx a, Side side, const CPoly& f) {
    if (a == Idx::Zero) return partial(fam, Idx::Zero, side, f);
    if (side == Side::Right) {
        // primitive transport: f <| d^i = -conj(d_i |> conj(f)), same family
        return -conjugate_fn(partial_left(fam, a, conjugate_fn(f)));
    }
    const auto [b, g] = raise_index(a);
    return partial(fam, b, Side::Left, f) * CScalar(g);
}

CPoly conjugate_fn(const CPoly& f) {
    const CScalar mq(-QScalar::q_power(1));
    const CScalar mqi(-QScalar::q_power(-1));
    CPoly out;
    for (const auto& [m, c] : f.terms()) {
        CScalar coeff = c.conj();
        for (int i = 0; i < m.xp; ++i) coeff *= mq;
        for (int i = 0; i < m.xm; ++i) coeff *= mqi;
        out.add(CMono{m.xm, m.x3, m.xp, m.t}, coeff);
    }
    return out;
}

// ---- LinOp ------------------------------------------------------------------

LinOp LinOp::identity() { return LinOp(); }

LinOp LinOp::jackson(long base_q_pow, Idx var) {
    LinOp op;
    op.kind_ = Kind::Jackson;
    op.base_ = base_q_pow;
    op.var_ = var;
    return op;
}

LinOp LinOp::scale_var(Idx var, CScalar factor) {
    LinOp op;
    op.kind_ = Kind::ScaleVar;
    op.var_ = var;
    op.factor_ = std::move(factor);
    return op;
}

LinOp LinOp::mul(CPoly p) {
    LinOp op;
    op.kind_ = Kind::MulPoly;
    op.poly_ = std::move(p);
    return op;
}

LinOp LinOp::time_derivative() {
    LinOp op;
    op.kind_ = Kind::TimeDeriv;
    return op;
}

LinOp LinOp::partial_op(DFamily fam, Idx a, bool upper, Side side) {
    LinOp op;
    op.kind_ = Kind::Partial;
    op.family_ = fam;
    op.var_ = a;
    op.upper_ = upper;
    op.side_ = side;
    return op;
}

LinOp LinOp::mono_weight(std::function<CScalar(const CMono&)> w) {
    LinOp op;
    op.kind_ = Kind::MonoWeight;
    op.mono_fn_ = std::move(w);
    return op;
}

LinOp LinOp::compose(std::vector<LinOp> parts) {
    LinOp op;
    op.kind_ = Kind::Compose;
    op.parts_ = std::move(parts);
    return op;
}

LinOp LinOp::sum(std::vector<std::pair<CScalar, LinOp>> parts) {
    LinOp op;
    op.kind_ = Kind::Sum;
    for (auto& [c, p] : parts) {
        op.weights_.push_back(c);
        op.parts_.push_back(p);
    }
    return op;
}

LinOp LinOp::then(const LinOp& next) const { return compose({*this, next}); }

LinOp LinOp::scaled(const CScalar& c) const { return sum({{c, *this}}); }

LinOp LinOp::operator+(const LinOp& o) const {
    return sum({{CScalar(1), *this}, {CScalar(1), o}});
}

CPoly LinOp::apply(const CPoly& f) const {
    switch (kind_) {
        case Kind::Identity:
            return f;
        case Kind::Jackson:
            return jackson_D(base_, var_, f);
        case Kind::ScaleVar:
            return f.scale_var(var_, factor_);
        case Kind::MulPoly:
            return poly_ * f;
        case Kind::TimeDeriv:
            return partial(DFamily::Plain, Idx::Zero, Side::Left, f);
        case Kind::Partial:
            return upper_ ? partial_upper(family_, var_, side_, f)
                          : partial(family_, var_, side_, f);
        case Kind::MonoWeight: {
            CPoly out;
            for (const auto& [m, c] : f.terms()) out.add(m, c * mono_fn_(m));
            return out;
        }
        case Kind::Compose: {
            CPoly r = f;
            for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) r = it->apply(r);
            return r;
        }
        case Kind::Sum: {
            CPoly r;
            for (size_t i = 0; i < parts_.size(); ++i)
                r += parts_[i].apply(f) * weights_[i];
            return r;
        }
    }
    throw calculus_error("LinOp: bad kind");
}

bool equal_at_q(const CPoly& a, const CPoly& b, const Rat& q0) {
    const CPoly d = a - b;
    for (const auto& [m, c] : d.terms()) {
        QScalar re, im;
        if (!c.re().is_plain(&re) || !c.im().is_plain(&im))
            throw calculus_error("equal_at_q: coefficient has radicals");
        if (re.eval_at(q0) != 0 || im.eval_at(q0) != 0) return false;
    }
    return true;
}

}  // namespace qspace
