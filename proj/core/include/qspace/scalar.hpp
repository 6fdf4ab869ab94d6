#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qspace {

using Int = mpz_class;
using Rat = mpq_class;

struct scalar_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense univariate polynomial over Q in the half-power variable s, s^2 = q.
/// Working in s keeps q^{1/2} exact; even-degree polynomials are ordinary
/// polynomials in q.
class Poly {
  public:
    Poly() = default;
    explicit Poly(Rat c0) { if (c0 != 0) coef_ = {std::move(c0)}; }
    static Poly monomial(Rat c, int deg);

    bool is_zero() const { return coef_.empty(); }
    int degree() const { return static_cast<int>(coef_.size()) - 1; }  // -1 for zero
    const Rat& operator[](int i) const;
    Rat& at(int i);
    void trim();

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    bool operator==(const Poly& o) const { return coef_ == o.coef_; }

    /// Quotient/remainder; divisor must be nonzero.
    static void divmod(const Poly& a, const Poly& b, Poly& quo, Poly& rem);
    /// Monic gcd via the Euclidean algorithm over Q[s].
    static Poly gcd(Poly a, Poly b);
    Poly derivative() const;
    Poly monic() const;
    Rat leading() const { return coef_.empty() ? Rat(0) : coef_.back(); }
    Rat constant() const { return coef_.empty() ? Rat(0) : coef_.front(); }
    int low_order() const;  // smallest i with coef_[i] != 0; -1 if zero

    Rat eval_rat(const Rat& x) const;
    double eval_double(double x) const;

    const std::vector<Rat>& coefficients() const { return coef_; }

  private:
    std::vector<Rat> coef_;  // coef_[i] multiplies s^i; invariant: no trailing zeros
};

/// Exact rational function of q (internally of s = q^{1/2}):
///   value = s^shift * num(s)/den(s)
/// with num(0) != 0, den(0) != 0, den monic and gcd(num, den) = 1.
class QScalar {
  public:
    QScalar() : shift_(0), num_(), den_(Rat(1)) {}
    QScalar(int n) : QScalar(Rat(n)) {}
    explicit QScalar(const Rat& r) : shift_(0), num_(r), den_(Rat(1)) {}
    QScalar(const Poly& num, const Poly& den, long shift = 0);

    /// q^k (integer power of q).
    static QScalar q_power(long k) { return s_power(2 * k); }
    /// s^k = q^{k/2}.
    static QScalar s_power(long k);
    static QScalar lambda();        // q - q^{-1}
    static QScalar lambda_plus();   // q + q^{-1}
    static QScalar from_string(const std::string& text);  // see expr.cpp

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_rational(Rat* out = nullptr) const;
    bool operator==(const QScalar& o) const;
    bool operator!=(const QScalar& o) const { return !(*this == o); }
    bool operator<(const QScalar& o) const;  // arbitrary canonical order (map keys)

    QScalar operator+(const QScalar& o) const;
    QScalar operator-(const QScalar& o) const;
    QScalar operator*(const QScalar& o) const;
    QScalar operator/(const QScalar& o) const;
    QScalar operator-() const;
    QScalar& operator+=(const QScalar& o) { *this = *this + o; return *this; }
    QScalar& operator-=(const QScalar& o) { *this = *this - o; return *this; }
    QScalar& operator*=(const QScalar& o) { *this = *this * o; return *this; }
    QScalar inverse() const;
    QScalar pow(long n) const;

    /// Exact substitution q := q0 (rational).  Throws on a pole and on odd
    /// half-powers of q (q^{1/2} at rational q0 is generally irrational).
    Rat eval_at(const Rat& q0) const;
    /// Float substitution; documented non-authoritative.
    double eval_double(double q0) const;

    long shift() const { return shift_; }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    /// True when the value lies in Q(q) proper (only even powers of s).
    bool is_q_rational() const;

    std::string to_string() const;

  private:
    void canonicalize();
    long shift_;
    Poly num_, den_;
};

QScalar operator*(const Rat& r, const QScalar& x);

/// Canonical key for a formal square root: sqrt(d * s^spow * poly(s)) with
/// d a squarefree positive integer, spow in {0,1}, poly monic squarefree
/// with nonzero constant term.  The trivial radicand (1,0,1) marks rational
/// (radical-free) terms.
struct Radicand {
    Int d = 1;
    int spow = 0;
    Poly poly = Poly(Rat(1));
    bool trivial() const { return d == 1 && spow == 0 && poly == Poly(Rat(1)); }
    bool operator==(const Radicand& o) const;
    bool operator<(const Radicand& o) const;
};

/// Finite sum  sum_R c_R * sqrt(R)  with c_R in Q(s).  Distinct canonical
/// radicands are treated as linearly independent, which is sound for the
/// equality checks this kernel performs (identities that hold collapse
/// termwise).
class RScalar {
  public:
    RScalar() = default;
    RScalar(const QScalar& c);  // trivial radicand
    RScalar(int n) : RScalar(QScalar(n)) {}
    /// sqrt of a Q(s)-scalar as a one-term radical expression.
    static RScalar sqrt_of(const QScalar& v);

    bool is_zero() const { return terms_.empty(); }
    bool is_plain(QScalar* out = nullptr) const;  // single trivial-radicand term
    bool operator==(const RScalar& o) const { return terms_ == o.terms_; }

    RScalar operator+(const RScalar& o) const;
    RScalar operator-(const RScalar& o) const;
    RScalar operator*(const RScalar& o) const;
    RScalar operator-() const;
    RScalar inverse() const;  // single-term only; throws otherwise

    double eval_double(double q0) const;
    std::string to_string() const;

    const std::map<Radicand, QScalar>& terms() const { return terms_; }
    void add_term(const Radicand& r, const QScalar& c);

  private:
    std::map<Radicand, QScalar> terms_;  // no zero coefficients
};

/// Complex layer: a + i b with a, b in the radical extension of Q(s).
/// Coefficient field for every symbolic object in the kernel.
class CScalar {
  public:
    CScalar() = default;
    CScalar(int n) : re_(RScalar(n)) {}
    CScalar(const QScalar& q) : re_(RScalar(q)) {}
    CScalar(const RScalar& re) : re_(re) {}
    CScalar(RScalar re, RScalar im) : re_(std::move(re)), im_(std::move(im)) {}
    static CScalar i() { return CScalar(RScalar(0), RScalar(1)); }
    static CScalar q_power(long k) { return CScalar(QScalar::q_power(k)); }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }
    bool is_plain(QScalar* out = nullptr) const;  // real, radical-free
    bool operator==(const CScalar& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const CScalar& o) const { return !(*this == o); }

    CScalar operator+(const CScalar& o) const;
    CScalar operator-(const CScalar& o) const;
    CScalar operator*(const CScalar& o) const;
    CScalar operator-() const;
    CScalar& operator+=(const CScalar& o) { *this = *this + o; return *this; }
    CScalar& operator-=(const CScalar& o) { *this = *this - o; return *this; }
    CScalar& operator*=(const CScalar& o) { *this = *this * o; return *this; }
    /// Division; requires a plain (radical-free) or single-term denominator.
    CScalar operator/(const CScalar& o) const;
    CScalar conj() const { return CScalar(re_, -im_); }

    std::complex<double> eval_double(double q0) const;
    std::string to_string() const;

    const RScalar& re() const { return re_; }
    const RScalar& im() const { return im_; }

  private:
    RScalar re_, im_;
};

CScalar operator*(const QScalar& a, const CScalar& b);

// ---- q-combinatorics -------------------------------------------------------

/// Base of a q-number: a pure power of q (or of s, for generality), base = s^k.
struct QBase {
    long s_exponent;  // base = s^{s_exponent}; q^m has s_exponent = 2m
    static QBase q_pow(long m) { return QBase{2 * m}; }
};

/// Antisymmetric q-number [[n]]_base = (1-base^n)/(1-base), expanded:
/// 1 + base + ... + base^{n-1}.  Requires n >= 0.
QScalar qnum(long n, QBase base);
/// [[n]]_base for any integer n, as a rational function.
QScalar qnum_any(long n, QBase base);
/// [[n]]_base! = [[1]]...[[n]]; [[0]]! = 1.  Requires n >= 0.
QScalar qfact(long n, QBase base);
/// Even double factorial [[2k]]_base!! = [[2]][[4]]...[[2k]]; [[0]]!! = 1.
QScalar qdfact_even(long two_k, QBase base);

}  // namespace qspace
