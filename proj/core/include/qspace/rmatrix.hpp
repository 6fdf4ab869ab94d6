#pragma once

#include "qspace/scalar.hpp"

#include <array>
#include <string>
#include <vector>

namespace qspace {

/// Space-time index: 0 (time), +, 3, - (spatial).
enum class Idx : int { Zero = 0, Plus = 1, Three = 2, Minus = 3 };

inline bool is_spatial(Idx i) { return i != Idx::Zero; }
std::string idx_name(Idx i);

/// Dense matrix over the exact scalar field; used for the braiding matrix and
/// its projectors.
class QMatrix {
  public:
    QMatrix() : n_(0) {}
    explicit QMatrix(int n) : n_(n), a_(n * n) {}
    static QMatrix identity(int n);

    int size() const { return n_; }
    QScalar& at(int r, int c) { return a_[r * n_ + c]; }
    const QScalar& at(int r, int c) const { return a_[r * n_ + c]; }

    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix scaled(const QScalar& c) const;
    bool operator==(const QMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }
    bool is_zero() const;

    /// Exact inverse by Gauss-Jordan elimination; throws if singular.
    QMatrix inverse() const;

  private:
    int n_;
    std::vector<QScalar> a_;
};

/// Two-index space of the (extended) quantum space.  Pair order follows the
/// printed blocks: ++, --, +3, 3+, 3-, -3, +-, 33, -+, then 00, 0+, 03, 0-,
/// +0, 30, -0.
struct PairBasis {
    static constexpr int spatial_dim = 9;
    static constexpr int extended_dim = 16;
    static int position(Idx a, Idx b);          // 0..15
    static std::pair<Idx, Idx> pair_at(int k);  // inverse
    static int spatial_position(Idx a, Idx b);  // 0..8; requires spatial a,b
};

struct ExtendedParams {
    QScalar a = QScalar(1);
    QScalar d = QScalar::q_power(-2);
    QScalar e = QScalar::q_power(-2);
    /// sqrt(d*e); must be representable as an exact power of q times a rational.
    QScalar sqrt_de() const;
    /// Throws rmatrix_error if sqrt(de) collides with 1, q^-6, -q^-4, a or 0.
    void validate() const;
};

struct rmatrix_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The braiding matrix R-hat of the (extended) quantum space.
QMatrix rhat(bool extended, const ExtendedParams& params = ExtendedParams());
QMatrix rhat_inverse(bool extended, const ExtendedParams& params = ExtendedParams());

enum class ProjectorKind { PS, PT, PA, Pplus, Pminus, Pa };

struct Projector {
    ProjectorKind kind;
    QMatrix matrix;  // 9x9 on the spatial sector, 16x16 on the extended one
};

/// Spectral projectors.  PS, PT, PA are built from the spectral polynomials of
/// the spatial block (eigenvalues 1, q^-6, -q^-4); Pplus/Pminus/Pa exist only
/// in the extended space.
std::vector<Projector> projectors(bool extended,
                                  const ExtendedParams& params = ExtendedParams());

/// The q-deformed Euclidean metric, antidiagonal in the order (+,3,-):
/// g^{+-} = -q, g^{33} = 1, g^{-+} = -q^{-1}; g_{AB} is the same matrix.
QScalar metric_upper(Idx a, Idx b);
QScalar metric_lower(Idx a, Idx b);
/// X_A = g_{AB} X^B: returns the unique (B, g_{AB}) with nonzero entry.
std::pair<Idx, QScalar> lower_index(Idx a);
std::pair<Idx, QScalar> raise_index(Idx a);

struct CheckResult {
    std::string identity;
    bool pass;
    std::string detail;
};

/// Verifies (P_S) dX dX = 0, (P_T) dX dX = 0 and X^A dX^B = q^4 R^{AB}_{CD}
/// dX^C X^D as rewrite identities.  Implemented with the rewriting kernel.
std::vector<CheckResult> differential_relation_check();

/// Matrix-level identity suite (spectral identity, projector algebra,
/// completeness, metric trace form, extended eigenspaces).
std::vector<CheckResult> rmatrix_identity_check(const ExtendedParams& params = ExtendedParams());

}  // namespace qspace
