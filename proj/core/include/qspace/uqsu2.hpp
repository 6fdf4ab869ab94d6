#pragma once

#include "qspace/ncspace.hpp"
#include "qspace/scalar.hpp"

#include <map>

namespace qspace {

struct uqsu2_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Symmetry-algebra generators (tau = 1 - lambda T3 and its half powers are
/// first-class; the Casimir is the composite operator built from them).
enum class UqGen { Tplus, Tminus, T3, Tau, TauPowHalf, TauPowMinusHalf, Casimir };

std::string uqgen_name(UqGen g);

/// Weight state |j, m> keyed by doubled half-integers for exact bookkeeping.
struct JM {
    int twoj = 0;
    int twom = 0;
    auto operator<=>(const JM&) const = default;
};

/// Finitely supported vector in a direct sum of irreducibles, with amplitudes
/// in the exact scalar field (the ladder actions introduce square roots of
/// q-number products).
class RepVector {
  public:
    RepVector() = default;
    static RepVector basis(int twoj, int twom);

    bool is_zero() const { return amp_.empty(); }
    bool operator==(const RepVector& o) const { return amp_ == o.amp_; }

    RepVector operator+(const RepVector& o) const;
    RepVector operator-(const RepVector& o) const;
    RepVector operator*(const CScalar& c) const;

    void add(JM state, const CScalar& c);
    const std::map<JM, CScalar>& amplitudes() const { return amp_; }
    std::string to_string() const;

  private:
    std::map<JM, CScalar> amp_;
};

/// Action of a generator on a representation vector (linear extension of the
/// weight-basis formulas; the Casimir acts through its defining expression in
/// T+, T- and the tau half powers).
RepVector act(UqGen g, const RepVector& v);

/// [[n]]_{q^k} at a (possibly half-integer) index given as twon/2.
QScalar qnum_half(long twon, long base_q_pow);
/// Casimir eigenvalue [[j]]_{q^-2} [[j+1]]_{q^2}.
QScalar casimir_eigenvalue(int twoj);

/// Hopf structure maps on the generators T+, T-, T3.
struct TensorTerm {
    NCElement left, right;
};
std::vector<TensorTerm> coproduct(UqGen g);
NCElement antipode(UqGen g);
CScalar counit(UqGen g);

/// (g_(1) |> v) g_(2) for a coordinate generator v in {X+, X3, X-, X0},
/// expanded in the rewriting algebra.  Reproduces the printed cross-product
/// commutation relations.
NCElement commute_through(UqGen g, Gen coordinate);

/// Action of a symmetry generator on a single coordinate generator, as a
/// linear combination of coordinates (j = 1 triplet plus the scalar X0).
NCElement act_on_coordinate(UqGen g, Gen coordinate);

struct UqCheck {
    std::string identity;
    bool pass;
};

/// Representation-level identity suite: defining relations, Casimir spectrum
/// and commutation, triplet actions, Hopf axioms, relation covariance.
std::vector<UqCheck> uqsu2_identity_check(int max_twoj = 4);

}  // namespace qspace
