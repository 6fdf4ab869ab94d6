#pragma once

#include "qspace/rmatrix.hpp"
#include "qspace/scalar.hpp"

#include <map>

namespace qspace {

/// Commutative monomial (x+)^xp (x3)^x3 (x-)^xm t^t.
struct CMono {
    int xp = 0, x3 = 0, xm = 0, t = 0;
    auto operator<=>(const CMono&) const = default;
    int spatial_degree() const { return xp + x3 + xm; }
    int total_degree() const { return xp + x3 + xm + t; }
    int exponent(Idx a) const;
    CMono with_exponent(Idx a, int e) const;
    CMono operator+(const CMono& o) const {
        return {xp + o.xp, x3 + o.x3, xm + o.xm, t + o.t};
    }
};

/// Sparse polynomial in the commutative coordinates (x+, x3, x-, t) over the
/// exact complex scalar field.  The Moyal-Weyl image domain.
class CPoly {
  public:
    CPoly() = default;
    CPoly(int n) { add(CMono{}, CScalar(n)); }
    explicit CPoly(const CScalar& c) { add(CMono{}, c); }
    static CPoly monomial(CMono m, CScalar c = CScalar(1));
    static CPoly variable(Idx a);  // x^A
    static CPoly time_var();

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const CPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const CPoly& o) const { return !(*this == o); }

    CPoly operator+(const CPoly& o) const;
    CPoly operator-(const CPoly& o) const;
    CPoly operator*(const CPoly& o) const;
    CPoly operator-() const;
    CPoly& operator+=(const CPoly& o) { *this = *this + o; return *this; }
    CPoly& operator-=(const CPoly& o) { *this = *this - o; return *this; }
    CPoly operator*(const CScalar& c) const;

    /// Substitution x_A -> c * x_A (coefficientwise c^exp).
    CPoly scale_var(Idx a, const CScalar& c) const;
    /// Substitution t -> c * t.
    CPoly scale_time(const CScalar& c) const;
    /// Keep only terms with total degree <= n.
    CPoly truncate_degree(int n) const;
    int max_total_degree() const;
    int max_exponent(Idx a) const;

    void add(const CMono& m, const CScalar& c);
    const std::map<CMono, CScalar>& terms() const { return terms_; }
    const CScalar& coefficient(const CMono& m) const;

    std::string to_string() const;

  private:
    std::map<CMono, CScalar> terms_;  // no zero coefficients
};

CPoly operator*(const CScalar& c, const CPoly& p);

}  // namespace qspace
