#pragma once

#include "qspace/rmatrix.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace qspace {

struct lattice_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using cplx = std::complex<double>;

/// Per-coordinate index window [jmin, jmax] on the signed lattice {±q^j}.
struct JWindow {
    int jmin = 0;
    int jmax = -1;  // empty
    int count() const { return jmax >= jmin ? jmax - jmin + 1 : 0; }
    bool empty() const { return count() == 0; }
    JWindow shifted(int a) const { return {jmin - a, jmax - a}; }
    JWindow intersect(const JWindow& o) const {
        return {std::max(jmin, o.jmin), std::min(jmax, o.jmax)};
    }
};

/// Grid point of one coordinate: sign * q^j.
struct GridPt {
    int sign;  // +1 or -1
    int j;
};

/// Finitely supported complex function on the three-dimensional signed
/// q-lattice at fixed numeric q > 1.  Dense values over the per-coordinate
/// windows; boundary operations shrink the windows explicitly.
class LatticeFn {
  public:
    LatticeFn() = default;
    LatticeFn(double q, JWindow wp, JWindow w3, JWindow wm);

    double q() const { return q_; }
    const JWindow& window(Idx a) const;
    bool empty() const;

    cplx& at(GridPt p, GridPt t3, GridPt m);
    cplx value(GridPt p, GridPt t3, GridPt m) const;  // 0 outside the window

    LatticeFn operator+(const LatticeFn& o) const;  // on the window intersection
    LatticeFn operator-(const LatticeFn& o) const;
    LatticeFn scaled(cplx c) const;

    /// Jackson derivative D_{q^k, x_A}; the top of the window shrinks by k.
    LatticeFn jackson_D(long base_q_pow, Idx var) const;
    /// Substitution x_A -> q^a x_A (window shift).
    LatticeFn scale_var(Idx var, long a) const;
    /// Pointwise multiplication by the coordinate x_A.
    LatticeFn mul_coordinate(Idx var) const;
    /// Conjugation: complex conjugate values at the mapped point
    /// (x+, x3, x-) -> (-q x-, x3, -q^-1 x+).
    LatticeFn conjugate() const;

    double max_abs() const;

    /// Map grid sampling of a separable function.
    static LatticeFn sample(double q, JWindow wp, JWindow w3, JWindow wm,
                            const std::function<cplx(double, double, double)>& f);

    std::string to_json() const;
    static LatticeFn from_json(const std::string& text);

  private:
    int offset(int sp, int jp, int s3, int j3, int sm, int jm) const;
    double q_ = 0;
    JWindow wp_, w3_, wm_;
    std::vector<cplx> v_;
};

enum class IntegralLimits { ZeroToX, XToInfinity, FullLine };

/// Single-variable Jackson integral of base q^k.  Definite variants return a
/// lattice function (of the same grid); the full-line variant integrates the
/// variable out and returns a function of the two remaining coordinates,
/// realized as a LatticeFn constant in the integrated variable.
LatticeFn jackson_integral(const LatticeFn& f, Idx var, long base_q_pow,
                           IntegralLimits limits);

/// Full-line weight of the base-q^k integral at the point sign*q^j: the
/// bilateral sum over all subchains, (q^k - 1)/k * q^j per point.
double lattice_weight(double q, long base_q_pow, int j);

/// Volume integral over the entire position space with the canonical
/// operator order: bases q^2, q, q^2 for x-, x3, x+.
cplx volume_integral(const LatticeFn& f);

/// Weight-only scalar product sum_x w(x) conj(f) g on raw value grids (the
/// k = 0 sector of the deformed product; the exact deformed scalar product
/// lives on analytic packets, see packets.hpp).
cplx weighted_overlap(const LatticeFn& f, const LatticeFn& g);

}  // namespace qspace
