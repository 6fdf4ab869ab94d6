#include "qspace/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qspace {

// ---- Poly ------------------------------------------------------------------

Poly Poly::monomial(Rat c, int deg) {
    Poly p;
    if (c != 0) {
        p.coef_.assign(deg + 1, Rat(0));
        p.coef_[deg] = std::move(c);
    }
    return p;
}

const Rat& Poly::operator[](int i) const {
    static const Rat zero(0);
    if (i < 0 || i >= static_cast<int>(coef_.size())) return zero;
    return coef_[i];
}

Rat& Poly::at(int i) {
    if (i >= static_cast<int>(coef_.size())) coef_.resize(i + 1, Rat(0));
    return coef_[i];
}

void Poly::trim() {
    while (!coef_.empty() && coef_.back() == 0) coef_.pop_back();
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (int i = 0; i <= o.degree(); ++i) r.at(i) += o[i];
    r.trim();
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (int i = 0; i <= o.degree(); ++i) r.at(i) -= o[i];
    r.trim();
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& c : r.coef_) c = -c;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    Poly r;
    r.coef_.assign(degree() + o.degree() + 1, Rat(0));
    for (int i = 0; i <= degree(); ++i) {
        if (coef_[i] == 0) continue;
        for (int j = 0; j <= o.degree(); ++j) {
            if (o.coef_[j] == 0) continue;
            r.coef_[i + j] += coef_[i] * o.coef_[j];
        }
    }
    r.trim();
    return r;
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& quo, Poly& rem) {
    if (b.is_zero()) throw scalar_error("polynomial division by zero");
    quo = Poly();
    rem = a;
    const int db = b.degree();
    const Rat lb = b.leading();
    while (!rem.is_zero() && rem.degree() >= db) {
        const int k = rem.degree() - db;
        const Rat c = rem.leading() / lb;
        quo.at(k) += c;
        for (int i = 0; i <= db; ++i) rem.at(i + k) -= c * b[i];
        rem.trim();
    }
    quo.trim();
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.monic();
}

Poly Poly::derivative() const {
    Poly r;
    for (int i = 1; i <= degree(); ++i)
        if (coef_[i] != 0) r.at(i - 1) = Rat(i) * coef_[i];
    r.trim();
    return r;
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    Poly r = *this;
    const Rat l = leading();
    for (auto& c : r.coef_) c /= l;
    return r;
}

int Poly::low_order() const {
    for (int i = 0; i < static_cast<int>(coef_.size()); ++i)
        if (coef_[i] != 0) return i;
    return -1;
}

Rat Poly::eval_rat(const Rat& x) const {
    Rat v(0);
    for (int i = degree(); i >= 0; --i) v = v * x + coef_[i];
    return v;
}

double Poly::eval_double(double x) const {
    double v = 0;
    for (int i = degree(); i >= 0; --i) v = v * x + coef_[i].get_d();
    return v;
}

namespace {

Poly poly_div_exact(const Poly& a, const Poly& b) {
    Poly q, r;
    Poly::divmod(a, b, q, r);
    if (!r.is_zero()) throw scalar_error("poly_div_exact: not divisible");
    return q;
}

// Yun's squarefree factorization of a monic polynomial over Q:
// p = prod_i a_i^i with a_i squarefree, pairwise coprime.
std::vector<Poly> yun_squarefree(const Poly& p) {
    std::vector<Poly> factors;  // factors[i-1] = a_i
    if (p.degree() <= 0) return factors;
    Poly g = Poly::gcd(p, p.derivative());
    if (g.degree() == 0) {
        factors.push_back(p.monic());
        return factors;
    }
    Poly c = poly_div_exact(p.monic(), g);
    Poly d = poly_div_exact(p.monic().derivative(), g) - c.derivative();
    while (c.degree() > 0) {
        Poly a = Poly::gcd(c, d);
        factors.push_back(a);
        c = poly_div_exact(c, a);
        d = poly_div_exact(d, a) - c.derivative();
    }
    return factors;
}

// Split monic p = square^2 * core with core monic squarefree.
void squarefree_split(const Poly& p, Poly& square, Poly& core) {
    square = Poly(Rat(1));
    core = Poly(Rat(1));
    if (p.degree() <= 0) return;
    auto factors = yun_squarefree(p.monic());
    for (size_t i = 0; i < factors.size(); ++i) {
        const long mult = static_cast<long>(i) + 1;
        const Poly& a = factors[i];
        if (a.degree() == 0) continue;
        for (long k = 0; k < mult / 2; ++k) square = square * a;
        if (mult % 2) core = core * a;
    }
    core = core.monic();
}

Int squarefree_int(const Int& n, Int& root) {
    // n = root^2 * d with d squarefree (n > 0).
    Int d = 1;
    root = 1;
    Int m = n;
    for (Int p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) root *= p;
        if (e % 2) d *= p;
    }
    d *= m;
    return d;
}

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

}  // namespace

// ---- QScalar ---------------------------------------------------------------

QScalar::QScalar(const Poly& num, const Poly& den, long shift)
    : shift_(shift), num_(num), den_(den) {
    canonicalize();
}

void QScalar::canonicalize() {
    if (den_.is_zero()) throw scalar_error("zero denominator");
    if (num_.is_zero()) {
        shift_ = 0;
        den_ = Poly(Rat(1));
        return;
    }
    const int ln = num_.low_order();
    const int ld = den_.low_order();
    if (ln > 0) {
        num_ = poly_div_exact(num_, Poly::monomial(Rat(1), ln));
        shift_ += ln;
    }
    if (ld > 0) {
        den_ = poly_div_exact(den_, Poly::monomial(Rat(1), ld));
        shift_ -= ld;
    }
    Poly g = Poly::gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = poly_div_exact(num_, g);
        den_ = poly_div_exact(den_, g);
    }
    const Rat lead = den_.leading();
    if (lead != 1) {
        Poly scale(Rat(1) / lead);
        num_ = num_ * scale;
        den_ = den_ * scale;
    }
}

QScalar QScalar::s_power(long k) {
    QScalar r;
    r.shift_ = k;
    r.num_ = Poly(Rat(1));
    r.den_ = Poly(Rat(1));
    return r;
}

QScalar QScalar::lambda() { return q_power(1) - q_power(-1); }
QScalar QScalar::lambda_plus() { return q_power(1) + q_power(-1); }

bool QScalar::is_one() const {
    return shift_ == 0 && num_ == Poly(Rat(1)) && den_ == Poly(Rat(1));
}

bool QScalar::is_rational(Rat* out) const {
    if (is_zero()) {
        if (out) *out = 0;
        return true;
    }
    if (shift_ == 0 && num_.degree() == 0 && den_.degree() == 0) {
        if (out) *out = num_.constant();
        return true;
    }
    return false;
}

bool QScalar::operator==(const QScalar& o) const {
    return shift_ == o.shift_ && num_ == o.num_ && den_ == o.den_;
}

bool QScalar::operator<(const QScalar& o) const {
    if (shift_ != o.shift_) return shift_ < o.shift_;
    auto cmp_poly = [](const Poly& a, const Poly& b) -> int {
        if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
        for (int i = a.degree(); i >= 0; --i)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    };
    const int c = cmp_poly(num_, o.num_);
    if (c != 0) return c < 0;
    return cmp_poly(den_, o.den_) < 0;
}

QScalar QScalar::operator+(const QScalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    const long sh = std::min(shift_, o.shift_);
    const Poly a = num_ * Poly::monomial(Rat(1), static_cast<int>(shift_ - sh)) * o.den_;
    const Poly b = o.num_ * Poly::monomial(Rat(1), static_cast<int>(o.shift_ - sh)) * den_;
    return QScalar(a + b, den_ * o.den_, sh);
}

QScalar QScalar::operator-(const QScalar& o) const { return *this + (-o); }

QScalar QScalar::operator-() const {
    QScalar r = *this;
    r.num_ = -r.num_;
    return r;
}

QScalar QScalar::operator*(const QScalar& o) const {
    if (is_zero() || o.is_zero()) return QScalar();
    return QScalar(num_ * o.num_, den_ * o.den_, shift_ + o.shift_);
}

QScalar QScalar::inverse() const {
    if (is_zero()) throw scalar_error("inverse of zero");
    return QScalar(den_, num_, -shift_);
}

QScalar QScalar::operator/(const QScalar& o) const { return *this * o.inverse(); }

QScalar QScalar::pow(long n) const {
    if (n == 0) return QScalar(1);
    QScalar base = n > 0 ? *this : inverse();
    long m = n > 0 ? n : -n;
    QScalar r(1);
    while (m > 0) {
        if (m & 1) r = r * base;
        base = base * base;
        m >>= 1;
    }
    return r;
}

namespace {
// -1: zero poly; 0/1: all nonzero coefficients sit at exponents == parity (mod 2);
// -2: mixed parity.
int poly_parity(const Poly& p) {
    int par = -1;
    for (int i = 0; i <= p.degree(); ++i) {
        if (p[i] == 0) continue;
        if (par == -1) par = i % 2;
        else if (par != i % 2) return -2;
    }
    return par;
}
}  // namespace

bool QScalar::is_q_rational() const {
    if (is_zero()) return true;
    const int pn = poly_parity(num_);
    const int pd = poly_parity(den_);
    if (pn == -2 || pd == -2) {
        // mixed parity can still be q-rational only if both polys are in q and
        // shift even
        auto even_only = [](const Poly& p) {
            for (int i = 1; i <= p.degree(); i += 2)
                if (p[i] != 0) return false;
            return true;
        };
        return shift_ % 2 == 0 && even_only(num_) && even_only(den_);
    }
    return ((shift_ + (pn < 0 ? 0 : pn) - (pd < 0 ? 0 : pd)) % 2 + 2) % 2 == 0;
}

Rat QScalar::eval_at(const Rat& q0) const {
    if (is_zero()) return Rat(0);
    if (!is_q_rational())
        throw scalar_error("eval_at: value involves q^{1/2}; use float mode");
    const int pn = std::max(poly_parity(num_), 0);
    const int pd = std::max(poly_parity(den_), 0);
    auto eval_q = [&](const Poly& p, int parity) -> Rat {
        std::vector<Rat> c;
        for (int i = parity; i <= p.degree(); i += 2) c.push_back(p[i]);
        Rat v(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * q0 + *it;
        return v;
    };
    const long total_s = shift_ + pn - pd;
    if (total_s % 2 != 0) throw scalar_error("eval_at: fractional q power");
    const Rat nv = eval_q(num_, pn);
    const Rat dv = eval_q(den_, pd);
    if (dv == 0) throw scalar_error("eval_at: pole at the requested q");
    const long e = total_s / 2;
    if (q0 == 0 && e < 0) throw scalar_error("eval_at: pole at q=0");
    Rat qe(1);
    const Rat base = e >= 0 ? q0 : Rat(1) / q0;
    for (long i = 0; i < (e >= 0 ? e : -e); ++i) qe *= base;
    return (nv / dv) * qe;
}

double QScalar::eval_double(double q0) const {
    if (q0 <= 0) throw scalar_error("eval_double: need q > 0");
    const double s = std::sqrt(q0);
    const double dv = den_.eval_double(s);
    if (dv == 0) throw scalar_error("eval_double: pole");
    return std::pow(s, static_cast<double>(shift_)) * num_.eval_double(s) / dv;
}

std::string QScalar::to_string() const {
    if (is_zero()) return "0";
    auto term_str = [&](const Rat& c, long s_exp, bool lead) {
        std::ostringstream os;
        Rat a = c;
        if (!lead && a > 0) os << " + ";
        else if (!lead) { os << " - "; a = -a; }
        else if (a < 0) { os << "-"; a = -a; }
        const bool unit = (a == 1);
        if (s_exp == 0) {
            os << rat_str(a);
            return os.str();
        }
        if (!unit) os << rat_str(a) << "*";
        if (s_exp % 2 == 0) {
            os << "q";
            if (s_exp != 2) os << "^" << s_exp / 2;
        } else {
            os << "q^(" << s_exp << "/2)";
        }
        return os.str();
    };
    const bool denom_unit = den_.degree() == 0 && den_.constant() == 1;
    std::ostringstream nums;
    bool first = true;
    for (int i = 0; i <= num_.degree(); ++i) {
        if (num_[i] == 0) continue;
        nums << term_str(num_[i], shift_ + i, first);
        first = false;
    }
    if (denom_unit) return nums.str();
    std::ostringstream os;
    os << "(" << nums.str() << ")/(";
    first = true;
    for (int i = 0; i <= den_.degree(); ++i) {
        if (den_[i] == 0) continue;
        os << term_str(den_[i], i, first);
        first = false;
    }
    os << ")";
    return os.str();
}

QScalar operator*(const Rat& r, const QScalar& x) { return QScalar(r) * x; }

// ---- Radicand / RScalar ------------------------------------------------------

bool Radicand::operator==(const Radicand& o) const {
    return d == o.d && spow == o.spow && poly == o.poly;
}

bool Radicand::operator<(const Radicand& o) const {
    if (d != o.d) return d < o.d;
    if (spow != o.spow) return spow < o.spow;
    if (poly.degree() != o.poly.degree()) return poly.degree() < o.poly.degree();
    for (int i = poly.degree(); i >= 0; --i)
        if (poly[i] != o.poly[i]) return poly[i] < o.poly[i];
    return false;
}

RScalar::RScalar(const QScalar& c) {
    if (!c.is_zero()) terms_[Radicand{}] = c;
}

void RScalar::add_term(const Radicand& r, const QScalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(r);
    if (it == terms_.end()) {
        terms_.emplace(r, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

RScalar RScalar::sqrt_of(const QScalar& v) {
    if (v.is_zero()) return RScalar();
    // v = s^shift * num/den (den monic):  sqrt(v) = sqrt(s^shift * num * den)/den.
    const Poly nd = v.num() * v.den();
    const Rat content = nd.leading();
    if (content < 0)
        throw scalar_error("sqrt_of: negative leading coefficient unsupported");
    const Poly body = nd.monic();
    const long shift = v.shift();
    const long s_out = (shift >= 0) ? shift / 2 : -((-shift + 1) / 2);
    const int s_rem = static_cast<int>(shift - 2 * s_out);
    Poly square, core;
    squarefree_split(body, square, core);
    Int m = content.get_num(), n = content.get_den();
    Int rm, rn;
    const Int dm = squarefree_int(m, rm);
    const Int dn = squarefree_int(n, rn);
    // sqrt(m/n) = rm/(rn*dn) * sqrt(dm*dn)
    Radicand rad;
    rad.d = dm * dn;
    rad.spow = s_rem;
    rad.poly = core;
    const Rat outside_rat = Rat(rm) / (Rat(rn) * Rat(dn));
    const QScalar outside = QScalar(Poly(outside_rat) * square, v.den(), s_out);
    RScalar r;
    r.add_term(rad, outside);
    return r;
}

bool RScalar::is_plain(QScalar* out) const {
    if (terms_.empty()) {
        if (out) *out = QScalar();
        return true;
    }
    if (terms_.size() == 1 && terms_.begin()->first.trivial()) {
        if (out) *out = terms_.begin()->second;
        return true;
    }
    return false;
}

RScalar RScalar::operator+(const RScalar& o) const {
    RScalar r = *this;
    for (const auto& [rad, c] : o.terms_) r.add_term(rad, c);
    return r;
}

RScalar RScalar::operator-(const RScalar& o) const { return *this + (-o); }

RScalar RScalar::operator-() const {
    RScalar r;
    for (const auto& [rad, c] : terms_) r.terms_[rad] = -c;
    return r;
}

RScalar RScalar::operator*(const RScalar& o) const {
    RScalar r;
    for (const auto& [ra, ca] : terms_) {
        for (const auto& [rb, cb] : o.terms_) {
            QScalar coef = ca * cb;
            Radicand prod;
            Int g;
            mpz_gcd(g.get_mpz_t(), ra.d.get_mpz_t(), rb.d.get_mpz_t());
            prod.d = (ra.d / g) * (rb.d / g);
            coef = QScalar(Rat(g)) * coef;
            const int ssum = ra.spow + rb.spow;
            prod.spow = ssum % 2;
            if (ssum >= 2) coef = QScalar::s_power(1) * coef;
            const Poly pg = Poly::gcd(ra.poly, rb.poly);
            const Poly pa = poly_div_exact(ra.poly, pg);
            const Poly pb = poly_div_exact(rb.poly, pg);
            prod.poly = (pa * pb).monic();
            if (pg.degree() > 0) coef = QScalar(pg, Poly(Rat(1))) * coef;
            r.add_term(prod, coef);
        }
    }
    return r;
}

RScalar RScalar::inverse() const {
    if (terms_.empty()) throw scalar_error("inverse of zero");
    if (terms_.size() != 1)
        throw scalar_error("inverse of a multi-radical sum is not supported");
    const auto& [rad, c] = *terms_.begin();
    if (rad.trivial()) return RScalar(c.inverse());
    // 1/(c sqrt(R)) = sqrt(R)/(c R)
    const QScalar R = QScalar(Poly(Rat(rad.d)) * rad.poly, Poly(Rat(1)), rad.spow);
    RScalar r;
    r.add_term(rad, (c * R).inverse());
    return r;
}

double RScalar::eval_double(double q0) const {
    double v = 0;
    const double s = std::sqrt(q0);
    for (const auto& [rad, c] : terms_) {
        const double radv =
            rad.d.get_d() * std::pow(s, rad.spow) * rad.poly.eval_double(s);
        v += c.eval_double(q0) * std::sqrt(radv);
    }
    return v;
}

std::string RScalar::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [rad, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (rad.trivial()) {
            os << c.to_string();
        } else {
            os << "(" << c.to_string() << ")*sqrt(" << rad.d.get_str();
            if (rad.spow) os << "*q^(1/2)";
            if (rad.poly.degree() > 0)
                os << "*[" << QScalar(rad.poly, Poly(Rat(1))).to_string() << "]";
            os << ")";
        }
    }
    return os.str();
}

// ---- CScalar -----------------------------------------------------------------

bool CScalar::is_plain(QScalar* out) const {
    if (!im_.is_zero()) return false;
    return re_.is_plain(out);
}

CScalar CScalar::operator+(const CScalar& o) const {
    return CScalar(re_ + o.re_, im_ + o.im_);
}
CScalar CScalar::operator-(const CScalar& o) const {
    return CScalar(re_ - o.re_, im_ - o.im_);
}
CScalar CScalar::operator-() const { return CScalar(-re_, -im_); }

CScalar CScalar::operator*(const CScalar& o) const {
    return CScalar(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
}

CScalar CScalar::operator/(const CScalar& o) const {
    if (o.is_zero()) throw scalar_error("division by zero");
    if (o.im_.is_zero()) {
        const RScalar inv = o.re_.inverse();
        return CScalar(re_ * inv, im_ * inv);
    }
    if (o.re_.is_zero()) {
        const RScalar inv = o.im_.inverse();
        return CScalar(im_ * inv, -(re_ * inv));
    }
    QScalar a, b;
    if (o.re_.is_plain(&a) && o.im_.is_plain(&b)) {
        const QScalar ninv = (a * a + b * b).inverse();
        const CScalar conj(RScalar(a * ninv), RScalar(-(b * ninv)));
        return *this * conj;
    }
    throw scalar_error("division by a mixed radical complex scalar is not supported");
}

std::complex<double> CScalar::eval_double(double q0) const {
    return {re_.eval_double(q0), im_.eval_double(q0)};
}

std::string CScalar::to_string() const {
    if (im_.is_zero()) return re_.to_string();
    if (re_.is_zero()) return "i*(" + im_.to_string() + ")";
    return "(" + re_.to_string() + ") + i*(" + im_.to_string() + ")";
}

CScalar operator*(const QScalar& a, const CScalar& b) { return CScalar(a) * b; }

// ---- q-combinatorics ---------------------------------------------------------

QScalar qnum(long n, QBase base) {
    if (n < 0) throw scalar_error("qnum: negative index");
    QScalar acc;
    for (long j = 0; j < n; ++j) acc += QScalar::s_power(base.s_exponent * j);
    return acc;
}

QScalar qnum_any(long n, QBase base) {
    const QScalar b = QScalar::s_power(base.s_exponent);
    const QScalar one(1);
    if (b.is_one()) throw scalar_error("qnum_any: base must differ from 1");
    return (one - b.pow(n)) / (one - b);
}

QScalar qfact(long n, QBase base) {
    if (n < 0) throw scalar_error("qfact: negative index");
    QScalar r(1);
    for (long i = 1; i <= n; ++i) r = r * qnum(i, base);
    return r;
}

QScalar qdfact_even(long two_k, QBase base) {
    if (two_k < 0 || two_k % 2 != 0)
        throw scalar_error("qdfact_even: index must be even and nonnegative");
    QScalar r(1);
    for (long i = 2; i <= two_k; i += 2) r = r * qnum(i, base);
    return r;
}

}  // namespace qspace
