#pragma once

#include "qspace/cpoly.hpp"
#include "qspace/ncspace.hpp"

#include <functional>
#include <memory>

namespace qspace {

struct calculus_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Jackson derivative D_{q^k, x_A}: (f(q^k x) - f(x)) / (q^k x - x); on
/// monomials D x^n = [[n]]_{q^k} x^{n-1}.
CPoly jackson_D(long base_q_pow, Idx var, const CPoly& f);

/// Star product in the standard normal ordering; the k-series terminates on
/// polynomials.  With ord == Reversed this is the product adapted to the
/// alternate ordering (obtained by the q -> q^-1, +/- substitution and
/// validated against the reversed-ordering oracle).
CPoly star(const CPoly& f, const CPoly& g, NormalOrdering ord = NormalOrdering::Standard);

enum class Side { Left, Right };

/// Operator representation of the partial derivatives (lower index).  Right
/// actions are conjugation transports of left actions.
CPoly partial(DFamily fam, Idx a, Side side, const CPoly& f);
/// Upper-index derivative d^A = g^{AB} d_B.
CPoly partial_upper(DFamily fam, Idx a, Side side, const CPoly& f);

/// Conjugation of a power series: coefficient conjugation together with the
/// substitution x+ -> -q x-, x- -> -q^-1 x+, x3 and t fixed.
CPoly conjugate_fn(const CPoly& f);

/// Composable linear operator on polynomials (and, for the supported subset,
/// on lattice packets — see packets.hpp).
class LinOp {
  public:
    enum class Kind {
        Identity,
        Jackson,     // base_q_pow, var
        ScaleVar,    // var, factor
        MulPoly,     // poly
        TimeDeriv,   // d/dt
        Partial,     // family, index, upper?, side
        MonoWeight,  // coefficient weight by monomial (polynomials only)
        Compose,     // parts applied right-to-left
        Sum          // linear combination
    };

    static LinOp identity();
    static LinOp jackson(long base_q_pow, Idx var);
    static LinOp scale_var(Idx var, CScalar factor);
    static LinOp mul(CPoly p);
    static LinOp time_derivative();
    static LinOp partial_op(DFamily fam, Idx a, bool upper = false, Side side = Side::Left);
    static LinOp mono_weight(std::function<CScalar(const CMono&)> w);
    static LinOp compose(std::vector<LinOp> parts);  // parts[0] applied last
    static LinOp sum(std::vector<std::pair<CScalar, LinOp>> parts);

    LinOp then(const LinOp& next) const;  // this after next (composition)
    LinOp scaled(const CScalar& c) const;
    LinOp operator+(const LinOp& o) const;

    CPoly apply(const CPoly& f) const;

    Kind kind() const { return kind_; }
    long base() const { return base_; }
    Idx var() const { return var_; }
    const CScalar& factor() const { return factor_; }
    const CPoly& poly() const { return poly_; }
    DFamily family() const { return family_; }
    bool upper() const { return upper_; }
    Side side() const { return side_; }
    const std::vector<LinOp>& parts() const { return parts_; }
    const std::vector<CScalar>& weights() const { return weights_; }
    const std::function<CScalar(const CMono&)>& mono_fn() const { return mono_fn_; }

  private:
    Kind kind_ = Kind::Identity;
    long base_ = 0;
    Idx var_ = Idx::Plus;
    CScalar factor_;
    CPoly poly_;
    DFamily family_ = DFamily::Plain;
    bool upper_ = false;
    Side side_ = Side::Left;
    std::vector<LinOp> parts_;
    std::vector<CScalar> weights_;
    std::function<CScalar(const CMono&)> mono_fn_;
};

/// Exact evaluation of a polynomial identity at rational q (classical-limit
/// regressions).  Throws if a coefficient involves radicals or q^{1/2}.
bool equal_at_q(const CPoly& a, const CPoly& b, const Rat& q0);

}  // namespace qspace
