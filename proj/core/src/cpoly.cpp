#include "qspace/cpoly.hpp"

#include <sstream>

namespace qspace {

int CMono::exponent(Idx a) const {
    switch (a) {
        case Idx::Plus: return xp;
        case Idx::Three: return x3;
        case Idx::Minus: return xm;
        case Idx::Zero: return t;
    }
    return 0;
}

CMono CMono::with_exponent(Idx a, int e) const {
    CMono m = *this;
    switch (a) {
        case Idx::Plus: m.xp = e; break;
        case Idx::Three: m.x3 = e; break;
        case Idx::Minus: m.xm = e; break;
        case Idx::Zero: m.t = e; break;
    }
    return m;
}

CPoly CPoly::monomial(CMono m, CScalar c) {
    CPoly p;
    p.add(m, c);
    return p;
}

CPoly CPoly::variable(Idx a) {
    CMono m;
    switch (a) {
        case Idx::Plus: m.xp = 1; break;
        case Idx::Three: m.x3 = 1; break;
        case Idx::Minus: m.xm = 1; break;
        case Idx::Zero: m.t = 1; break;
    }
    return monomial(m);
}

CPoly CPoly::time_var() { return monomial(CMono{0, 0, 0, 1}); }

void CPoly::add(const CMono& m, const CScalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

const CScalar& CPoly::coefficient(const CMono& m) const {
    static const CScalar zero;
    auto it = terms_.find(m);
    return it == terms_.end() ? zero : it->second;
}

CPoly CPoly::operator+(const CPoly& o) const {
    CPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add(m, c);
    return r;
}

CPoly CPoly::operator-(const CPoly& o) const {
    CPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add(m, -c);
    return r;
}

CPoly CPoly::operator-() const {
    CPoly r;
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
}

CPoly CPoly::operator*(const CPoly& o) const {
    CPoly r;
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) r.add(m1 + m2, c1 * c2);
    return r;
}

CPoly CPoly::operator*(const CScalar& c) const {
    CPoly r;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.add(m, v * c);
    return r;
}

CPoly operator*(const CScalar& c, const CPoly& p) { return p * c; }

CPoly CPoly::scale_var(Idx a, const CScalar& c) const {
    CPoly r;
    for (const auto& [m, v] : terms_) {
        const int e = m.exponent(a);
        CScalar f = v;
        for (int i = 0; i < e; ++i) f *= c;
        r.add(m, f);
    }
    return r;
}

CPoly CPoly::scale_time(const CScalar& c) const { return scale_var(Idx::Zero, c); }

CPoly CPoly::truncate_degree(int n) const {
    CPoly r;
    for (const auto& [m, v] : terms_)
        if (m.total_degree() <= n) r.add(m, v);
    return r;
}

int CPoly::max_total_degree() const {
    int d = 0;
    for (const auto& [m, v] : terms_) d = std::max(d, m.total_degree());
    return d;
}

int CPoly::max_exponent(Idx a) const {
    int d = 0;
    for (const auto& [m, v] : terms_) d = std::max(d, m.exponent(a));
    return d;
}

std::string CPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        if (m.xp) os << "*(x+)^" << m.xp;
        if (m.x3) os << "*(x3)^" << m.x3;
        if (m.xm) os << "*(x-)^" << m.xm;
        if (m.t) os << "*t^" << m.t;
    }
    return os.str();
}

}  // namespace qspace
