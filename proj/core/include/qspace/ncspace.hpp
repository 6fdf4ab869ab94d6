#pragma once

#include "qspace/cpoly.hpp"
#include "qspace/rmatrix.hpp"
#include "qspace/scalar.hpp"

#include <cstdint>
#include <vector>

namespace qspace {

struct ncspace_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Generators of the free algebra.  The enum value is the PBW rank under the
/// standard ordering (T-sector, scaling operators, coordinates, differentials,
/// derivatives, hatted derivatives).
enum class Gen : std::uint8_t {
    Tplus, T3, Tminus, TauHalf, TauHalfInv, Lambda, LambdaInv,
    Xplus, X3, Xminus, X0,
    dXplus, dX3, dXminus, dX0,
    Dplus, D3, Dminus, D0,
    DhPlus, Dh3, DhMinus, Dh0,
    Count
};

std::string gen_name(Gen g);
Gen coordinate_gen(Idx a);
Gen differential_gen(Idx a);
enum class DFamily { Plain, Hatted };
Gen derivative_gen(DFamily fam, Idx a);

using NCWord = std::vector<Gen>;

/// Linear combination of words with exact complex coefficients.
class NCElement {
  public:
    NCElement() = default;
    explicit NCElement(const CScalar& c) { add(NCWord{}, c); }
    static NCElement one() { return NCElement(CScalar(1)); }
    static NCElement generator(Gen g) {
        NCElement e;
        e.add(NCWord{g}, CScalar(1));
        return e;
    }
    static NCElement word(NCWord w, CScalar c = CScalar(1)) {
        NCElement e;
        e.add(std::move(w), std::move(c));
        return e;
    }

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const NCElement& o) const { return terms_ == o.terms_; }
    bool operator!=(const NCElement& o) const { return !(*this == o); }

    NCElement operator+(const NCElement& o) const;
    NCElement operator-(const NCElement& o) const;
    NCElement operator*(const NCElement& o) const;  // concatenation product
    NCElement operator*(const CScalar& c) const;
    NCElement operator-() const;
    NCElement& operator+=(const NCElement& o) { *this = *this + o; return *this; }

    void add(NCWord w, CScalar c);
    const std::map<NCWord, CScalar>& terms() const { return terms_; }
    std::string to_string() const;

  private:
    std::map<NCWord, CScalar> terms_;
};

NCElement operator*(const CScalar& c, const NCElement& e);

/// Normal ordering of the coordinate sector: Standard follows
/// X+ X3 X- X0; Reversed follows X0 X- X3 X+ (the ordering the hatted
/// calculus is tied to).  All other sectors are ordered identically.
enum class NormalOrdering { Standard, Reversed };

enum class RewriteStrategy { LeftmostFirst, RightmostFirst };

/// Straighten an element to its PBW normal form.  Throws ncspace_error on
/// words that mix the plain and hatted derivative families, on pairs with no
/// printed commutation relation, and when the step budget (1e6) is exhausted.
NCElement normalize(const NCElement& e, NormalOrdering ord = NormalOrdering::Standard,
                    RewriteStrategy strategy = RewriteStrategy::LeftmostFirst);

/// Moyal-Weyl map: commutative monomials to normal-ordered words.
NCElement moyal_weyl(const CPoly& f, NormalOrdering ord = NormalOrdering::Standard);
/// Inverse map; requires a normalized element supported on coordinate words.
CPoly moyal_weyl_inv(const NCElement& e, NormalOrdering ord = NormalOrdering::Standard);

/// Quantum space conjugation: antilinear, antimultiplicative, involutive.
/// Defined on coordinates, differentials and partial derivatives; conjugation
/// exchanges the plain and hatted derivative families (the time derivative is
/// common to both).  Throws on T-sector input.
NCElement conjugate_nc(const NCElement& e);

/// Ground-truth star product: W^{-1}(normalize(W(f) * W(g))).
CPoly oracle_star(const CPoly& f, const CPoly& g,
                  NormalOrdering ord = NormalOrdering::Standard);

/// Ground-truth derivative action: move the derivative through W(f) with the
/// Leibniz rules and keep the words free of derivatives.
CPoly derivative_action_oracle(DFamily fam, Idx a, const CPoly& f);

/// The conversion between the derivative families (hatted = q^6 * plain for
/// the spatial entries, identity on the time derivative), exposed as a
/// word-level relabeling.
NCElement hat_conversion(const NCElement& e);

/// Exterior derivative helpers for the d^2 = 0 consistency check: a form of
/// degree one or two with coordinate-polynomial coefficients.
struct OneForm {
    std::array<CPoly, 4> comp;  // indexed by Idx; d f = sum_i dX^i (del_i |> f)
};
OneForm exterior_derivative(const CPoly& f);
/// Components of d(omega) in the straightened two-form basis.
std::map<std::pair<Gen, Gen>, CPoly> exterior_derivative2(const CPoly& f);

}  // namespace qspace
