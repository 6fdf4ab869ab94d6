#include "qspace/packets.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>

namespace qspace {

namespace {

constexpr double kLogCutoff = 46.0;  // exp(-46) ~ 1e-20 relative

int axis_of(Idx a) {
    switch (a) {
        case Idx::Plus: return 0;
        case Idx::Three: return 1;
        case Idx::Minus: return 2;
        default: throw packet_error("packets are spatial; no time axis");
    }
}

// complex n x n linear algebra helpers (tiny dense systems)
using CMat = std::vector<std::vector<cplx>>;
using CVec = std::vector<cplx>;

CMat cmat_id(int n) {
    CMat m(n, CVec(n, 0.0));
    for (int i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

CMat cmat_mul(const CMat& a, const CMat& b) {
    const int n = a.size();
    CMat r(n, CVec(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k] == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

CVec cmat_vec(const CMat& a, const CVec& v) {
    const int n = a.size();
    CVec r(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i] += a[i][j] * v[j];
    return r;
}

// LU solve with partial pivoting; also returns log(det)
struct LUResult {
    CMat inv;
    cplx logdet;
};

LUResult cmat_inverse_logdet(CMat a) {
    const int n = a.size();
    CMat inv = cmat_id(n);
    cplx logdet = 0.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a[col][col]);
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > best) {
                best = std::abs(a[r][col]);
                piv = r;
            }
        if (best == 0.0) throw packet_error("coupling update is singular");
        if (piv != col) {
            std::swap(a[piv], a[col]);
            std::swap(inv[piv], inv[col]);
            logdet += cplx(0.0, M_PI);  // det sign flip: log(-1)
        }
        logdet += std::log(a[col][col]);
        const cplx d = a[col][col];
        for (int j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const cplx f = a[r][col];
            if (f == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return {std::move(inv), logdet};
}

double max_abs(const CMat& m) {
    double r = 0;
    for (const auto& row : m)
        for (const auto& v : row) r = std::max(r, std::abs(v));
    return r;
}

}  // namespace

GaussParams gauss_coupling_update(const GaussParams& in, const CMat& B) {
    // exp((1/2) d^T B d) exp(-1/2 u^T A u + b^T u) =
    //   det(I + B A)^{-1/2} exp(1/2 b^T (I+BA)^{-1} B b)
    //   * exp(-1/2 u^T A(I+BA)^{-1} u + ((I+AB)^{-1} b)^T u)
    // Applied in steps so each determinant stays near 1 (principal branch).
    const int n = in.lin.size();
    const double scale = max_abs(B) * max_abs(in.quad);
    const int steps = std::max(1, static_cast<int>(std::ceil(scale * 4.0)));
    GaussParams cur = in;
    for (int s = 0; s < steps; ++s) {
        CMat bs(n, CVec(n, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) bs[i][j] = B[i][j] / static_cast<double>(steps);
        // I + Bs A
        CMat iba = cmat_mul(bs, cur.quad);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) iba[i][j] = (i == j ? 1.0 : 0.0) + iba[i][j];
        const LUResult lu = cmat_inverse_logdet(iba);
        // A' = A (I+BsA)^-1, symmetrized
        CMat aprime = cmat_mul(cur.quad, lu.inv);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const cplx v = 0.5 * (aprime[i][j] + aprime[j][i]);
                aprime[i][j] = aprime[j][i] = v;
            }
        // b' = (I + A Bs)^-1 b: (I+AB)^-1 = A (I+BA)^-1 A^-1; avoid A^-1 by
        // solving directly: I + A Bs
        CMat iab = cmat_mul(cur.quad, bs);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) iab[i][j] = (i == j ? 1.0 : 0.0) + iab[i][j];
        const LUResult lu2 = cmat_inverse_logdet(iab);
        const CVec bprime = cmat_vec(lu2.inv, cur.lin);
        // c' += 1/2 b^T (I+BsA)^{-1} Bs b
        const CVec mb = cmat_vec(lu.inv, cmat_vec(bs, cur.lin));
        cplx quad_term = 0.0;
        for (int i = 0; i < n; ++i) quad_term += cur.lin[i] * mb[i];
        cur.log_scale += 0.5 * quad_term - 0.5 * lu.logdet;
        cur.quad = std::move(aprime);
        cur.lin = bprime;
    }
    return cur;
}

// ---- Packet -----------------------------------------------------------------

Packet Packet::gaussian(double q, std::array<int, 3> signs, std::array<double, 3> center,
                        std::array<double, 3> width, cplx amplitude) {
    Packet p(q);
    PacketAtom a;
    a.signs = signs;
    a.gamma = amplitude;
    for (int i = 0; i < 3; ++i) {
        const double alpha = 1.0 / (width[i] * width[i]);  // exp(-alpha (u-c)^2)
        a.quad[i][i] = 2.0 * alpha;
        a.lin[i] = 2.0 * alpha * center[i];
        a.gamma *= std::exp(-alpha * center[i] * center[i]);
    }
    p.add(a);
    return p;
}

Packet Packet::operator+(const Packet& o) const {
    if (q_ != o.q_) throw packet_error("mismatched q");
    Packet r = *this;
    for (const auto& a : o.atoms_) r.add(a);
    return r;
}

Packet Packet::operator-(const Packet& o) const { return *this + o.scaled(-1.0); }

Packet Packet::scaled(cplx c) const {
    Packet r = *this;
    for (auto& a : r.atoms_) a.gamma *= c;
    return r;
}

Packet Packet::scale_var(Idx v, long k) const {
    // f(q^k x): u -> u + k on the chosen axis
    const int ax = axis_of(v);
    Packet r = *this;
    const double kk = static_cast<double>(k);
    for (auto& a : r.atoms_) {
        // exp(-1/2 A (u+k e)(u+k e) + b (u+k e))
        cplx quad_shift = 0.0;
        for (int j = 0; j < 3; ++j) quad_shift += a.quad[ax][j] * a.lin[j] * 0.0;  // unused
        cplx lshift = a.lin[ax] * kk - 0.5 * a.quad[ax][ax] * kk * kk;
        a.gamma *= std::exp(lshift);
        for (int j = 0; j < 3; ++j) {
            if (j == ax) continue;
            a.lin[j] -= a.quad[ax][j] * kk;
        }
        a.lin[ax] -= a.quad[ax][ax] * kk;
    }
    return r;
}

Packet Packet::mul_power(Idx v, int n) const {
    const int ax = axis_of(v);
    const double lnq = std::log(q_);
    Packet r = *this;
    for (auto& a : r.atoms_) {
        a.lin[ax] += n * lnq;
        if (a.signs[ax] < 0 && (n % 2 != 0)) a.gamma = -a.gamma;
    }
    return r;
}

Packet Packet::jackson_D(long base_q_pow, Idx v) const {
    // (f(q^k x) - f(x)) / ((q^k - 1) x)
    const double qk = std::pow(q_, static_cast<double>(base_q_pow));
    Packet shifted = scale_var(v, base_q_pow);
    Packet diff = shifted - *this;
    diff = diff.mul_power(v, -1);
    return diff.scaled(1.0 / (qk - 1.0));
}

Packet Packet::partial(DFamily fam, Idx a) const {
    const double lam = q_ - 1.0 / q_;
    if (fam == DFamily::Plain) {
        switch (a) {
            case Idx::Plus:
                return jackson_D(4, Idx::Plus);
            case Idx::Three:
                return scale_var(Idx::Plus, 2).jackson_D(2, Idx::Three);
            case Idx::Minus: {
                Packet r = scale_var(Idx::Three, 2).jackson_D(4, Idx::Minus);
                Packet corr = jackson_D(2, Idx::Three).jackson_D(2, Idx::Three)
                                  .mul_power(Idx::Plus, 1)
                                  .scaled(lam);
                return r + corr;
            }
            default:
                throw packet_error("packets carry no time dependence");
        }
    }
    switch (a) {
        case Idx::Minus:
            return jackson_D(-4, Idx::Minus);
        case Idx::Three:
            return scale_var(Idx::Minus, -2).jackson_D(-2, Idx::Three);
        case Idx::Plus: {
            Packet r = scale_var(Idx::Three, -2).jackson_D(-4, Idx::Plus);
            Packet corr = jackson_D(-2, Idx::Three).jackson_D(-2, Idx::Three)
                              .mul_power(Idx::Minus, 1)
                              .scaled(-lam);
            return r + corr;
        }
        default:
            throw packet_error("packets carry no time dependence");
    }
}

Packet Packet::partial_upper(DFamily fam, Idx a) const {
    switch (a) {
        case Idx::Plus: return partial(fam, Idx::Minus).scaled(-q_);
        case Idx::Three: return partial(fam, Idx::Three);
        case Idx::Minus: return partial(fam, Idx::Plus).scaled(-1.0 / q_);
        default: throw packet_error("packets carry no time dependence");
    }
}

Packet Packet::partial_right(DFamily fam, Idx a, bool upper) const {
    if (upper) {
        // f <| d^i = -conj(d_i |> conj f), same family
        return conjugate().partial(fam, a).conjugate().scaled(-1.0);
    }
    // f <| d_A = (f <| d^B) g_{BA}
    const Idx b = a == Idx::Plus ? Idx::Minus : (a == Idx::Minus ? Idx::Plus : Idx::Three);
    const double g = b == Idx::Three ? 1.0
                     : (b == Idx::Plus ? -q_ : -1.0 / q_);  // g_{B A}, antidiagonal
    return partial_right(fam, b, true).scaled(g);
}

Packet Packet::conjugate() const { return sigma_pullback(true); }

Packet Packet::sigma_image() const { return sigma_pullback(false); }

Packet Packet::sigma_symmetrized() const { return *this + sigma_image(); }

Packet Packet::sigma_pullback(bool conj_params) const {
    // g(x+, x3, x-) = [conj] f(-q x-, x3, -q^-1 x+)
    Packet r(q_);
    const double lnq = std::log(q_);
    for (const auto& a : atoms_) {
        PacketAtom n;
        n.signs = {-a.signs[2], a.signs[1], -a.signs[0]};
        // u-substitution into the source atom: u+_src = um_new + 1, u3 = u3,
        // um_src = up_new - 1  (|q x-| = q^{um+1}, |q^-1 x+| = q^{up-1})
        // permutation P: src axis 0 <- new axis 2 shifted +1; src 2 <- new 0 - 1
        auto srcA = a.quad;
        auto srcb = a.lin;
        // first apply shifts in source coords: u0 -> u0 (will substitute), do the
        // algebra directly: value = gamma * exp(-1/2 v^T A v + b^T v) with
        // v = (um' + 1, u3', up' - 1) in terms of the new variables w = (up',u3',um').
        // v = P w + s, P: v0 = w2, v1 = w1, v2 = w0; s = (1, 0, -1).
        const int perm[3] = {2, 1, 0};
        const double shift[3] = {1.0, 0.0, -1.0};
        std::array<std::array<cplx, 3>, 3> A2{};
        std::array<cplx, 3> b2{};
        cplx c2 = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A2[perm[i]][perm[j]] = srcA[i][j];
        // linear: b^T v = b^T (Pw + s); quad: -1/2 (Pw+s)^T A (Pw+s)
        for (int i = 0; i < 3; ++i) b2[perm[i]] = srcb[i];
        // cross terms from shifts: -1/2 (w^T PtAP w + 2 s^T A P w + s^T A s) + b^T P w + b^T s
        std::array<cplx, 3> sAP{};
        cplx sAs = 0.0, bs = 0.0;
        for (int i = 0; i < 3; ++i) {
            bs += srcb[i] * shift[i];
            for (int j = 0; j < 3; ++j) {
                sAP[perm[j]] += shift[i] * srcA[i][j];
                sAs += shift[i] * srcA[i][j] * shift[j];
            }
        }
        PacketAtom out;
        out.signs = n.signs;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j)
                out.quad[i][j] = conj_params ? std::conj(A2[i][j]) : A2[i][j];
            const cplx li = b2[i] - sAP[i];
            out.lin[i] = conj_params ? std::conj(li) : li;
        }
        const cplx g0 = a.gamma * std::exp(bs - 0.5 * sAs);
        out.gamma = conj_params ? std::conj(g0) : g0;
        r.add(out);
    }
    (void)lnq;
    return r;
}

cplx Packet::value(double xp, double x3, double xm) const {
    const double lnq = std::log(q_);
    cplx acc = 0.0;
    for (const auto& a : atoms_) {
        if ((xp > 0 ? +1 : -1) != a.signs[0] || (x3 > 0 ? +1 : -1) != a.signs[1] ||
            (xm > 0 ? +1 : -1) != a.signs[2])
            continue;
        const double u[3] = {std::log(std::abs(xp)) / lnq, std::log(std::abs(x3)) / lnq,
                             std::log(std::abs(xm)) / lnq};
        cplx e = 0.0;
        for (int i = 0; i < 3; ++i) {
            e += a.lin[i] * u[i];
            for (int j = 0; j < 3; ++j) e -= 0.5 * a.quad[i][j] * u[i] * u[j];
        }
        acc += a.gamma * std::exp(e);
    }
    return acc;
}

LatticeFn Packet::render(JWindow wp, JWindow w3, JWindow wm) const {
    LatticeFn out(q_, wp, w3, wm);
    for (int sp : {+1, -1})
        for (int jp = wp.jmin; jp <= wp.jmax; ++jp)
            for (int s3 : {+1, -1})
                for (int j3 = w3.jmin; j3 <= w3.jmax; ++j3)
                    for (int sm : {+1, -1})
                        for (int jm = wm.jmin; jm <= wm.jmax; ++jm) {
                            cplx acc = 0.0;
                            for (const auto& a : atoms_) {
                                if (a.signs[0] != sp || a.signs[1] != s3 ||
                                    a.signs[2] != sm)
                                    continue;
                                const double u[3] = {double(jp), double(j3), double(jm)};
                                cplx e = 0.0;
                                for (int i = 0; i < 3; ++i) {
                                    e += a.lin[i] * u[i];
                                    for (int j = 0; j < 3; ++j)
                                        e -= 0.5 * a.quad[i][j] * u[i] * u[j];
                                }
                                acc += a.gamma * std::exp(e);
                            }
                            out.at({sp, jp}, {s3, j3}, {sm, jm}) = acc;
                        }
    return out;
}

namespace {

// peak of |atom| over real u: used for sup-norm estimates and sum centering
double atom_log_peak(const PacketAtom& a, double center_out[3]) {
    // maximize -1/2 u^T Re(A) u + Re(b)^T u: solve Re(A) u = Re(b)
    double A[3][3], b[3];
    for (int i = 0; i < 3; ++i) {
        b[i] = a.lin[i].real();
        for (int j = 0; j < 3; ++j) A[i][j] = a.quad[i][j].real();
    }
    // 3x3 gaussian elimination
    double m[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] = A[i][j];
        m[i][3] = b[i];
    }
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (std::abs(m[piv][c]) < 1e-14)
            throw packet_error("atom is not normalizable (flat direction)");
        std::swap(m[piv], m[c]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (int j = c; j < 4; ++j) m[r][j] -= f * m[c][j];
        }
    }
    double u[3];
    for (int i = 0; i < 3; ++i) u[i] = m[i][3] / m[i][i];
    if (center_out)
        for (int i = 0; i < 3; ++i) center_out[i] = u[i];
    double v = 0;
    for (int i = 0; i < 3; ++i) {
        v += a.lin[i].real() * u[i];
        for (int j = 0; j < 3; ++j) v -= 0.5 * A[i][j] * u[i] * u[j];
    }
    // require positive definiteness of Re(A): check diagonal of the eliminated
    // system was positive after symmetric pivoting; do a light direct check
    if (A[0][0] <= 0 || A[1][1] <= 0 || A[2][2] <= 0)
        throw packet_error("packet too narrow or ill-posed for the coupling at this q");
    return v + std::log(std::abs(a.gamma) + 1e-300);
}

// sum over u in Z, |u| <= ulim, of exp(-1/2 a u^2 + b u), outward from the
// real peak with multiplicative recurrences (no exp calls in the loop).
cplx lattice_sum_1d(cplx a, cplx b, int ulim) {
    const double ar = a.real();
    if (ar <= 1e-12) throw packet_error("1d lattice sum does not converge");
    const double center = std::clamp(b.real() / ar, -double(ulim), double(ulim));
    const int c0 = static_cast<int>(std::llround(center));
    const double uu = static_cast<double>(c0);
    const cplx t0 = std::exp(-0.5 * a * uu * uu + b * uu);
    const double floor_mag = std::abs(t0) * std::exp(-kLogCutoff) + 1e-300;
    const cplx ema = std::exp(-a);
    cplx acc = t0;
    // upward: t(u+1) = t(u) * rho(u), rho(u+1) = rho(u) * e^{-a}
    cplx t = t0;
    cplx rho = std::exp(-a * (uu + 0.5) + b);
    for (int u = c0 + 1; u <= ulim; ++u) {
        t *= rho;
        rho *= ema;
        acc += t;
        if (std::abs(t) < floor_mag) break;
    }
    // downward: t(u-1) = t(u) * rhod(u), rhod(u-1) = rhod(u) * e^{-a}
    t = t0;
    cplx rhod = std::exp(a * (uu - 0.5) - b);
    for (int u = c0 - 1; u >= -ulim; --u) {
        t *= rhod;
        rhod *= ema;
        acc += t;
        if (std::abs(t) < floor_mag) break;
    }
    return acc;
}

// sum over u in Z^3 of the atom exponential, exploiting the chain structure
// (cross terms only on (0,1) and (1,2)); falls back to a direct box sum when a
// (0,2) cross term is present.
cplx lattice_sum_atom(const PacketAtom& a, int ulim) {
    double center[3];
    atom_log_peak(a, center);
    for (int i = 0; i < 3; ++i)
        center[i] = std::clamp(center[i], -double(ulim), double(ulim));
    const bool chain = std::abs(a.quad[0][2]) < 1e-15;
    const double a11r = a.quad[1][1].real();
    // effective marginal width along u3 (Schur complement proxy)
    double schur = a11r;
    if (a.quad[0][0].real() > 0)
        schur -= a.quad[0][1].real() * a.quad[0][1].real() / a.quad[0][0].real();
    if (a.quad[2][2].real() > 0)
        schur -= a.quad[1][2].real() * a.quad[1][2].real() / a.quad[2][2].real();
    if (schur <= 1e-12) throw packet_error("packet too narrow for the coupling at this q");
    const int r3 = static_cast<int>(std::ceil(std::sqrt(2.0 * kLogCutoff / schur))) + 3;
    const int c3 = static_cast<int>(std::llround(center[1]));
    cplx acc = 0.0;
    if (chain) {
        auto slab = [&](int u3) {
            const double uu = static_cast<double>(u3);
            const cplx mid = -0.5 * a.quad[1][1] * uu * uu + a.lin[1] * uu;
            const cplx sp = lattice_sum_1d(a.quad[0][0], a.lin[0] - a.quad[0][1] * uu, ulim);
            const cplx sm = lattice_sum_1d(a.quad[2][2], a.lin[2] - a.quad[1][2] * uu, ulim);
            return std::exp(mid) * sp * sm;
        };
        const cplx s0 = slab(c3);
        acc = s0;
        const double floor_mag = (std::abs(s0) + 1e-300) * std::exp(-kLogCutoff);
        for (int u3 = c3 + 1; u3 <= std::min(c3 + 2 * r3 + 4, ulim); ++u3) {
            const cplx v = slab(u3);
            acc += v;
            if (std::abs(v) < floor_mag) break;
        }
        for (int u3 = c3 - 1; u3 >= std::max(c3 - 2 * r3 - 4, -ulim); --u3) {
            const cplx v = slab(u3);
            acc += v;
            if (std::abs(v) < floor_mag) break;
        }
        return a.gamma * acc;
    }
    // general (rare) path: box sum around the peak
    double radii[3];
    for (int i = 0; i < 3; ++i) {
        const double d = a.quad[i][i].real();
        if (d <= 1e-12) throw packet_error("packet too narrow for the coupling at this q");
        radii[i] = std::ceil(std::sqrt(2.0 * kLogCutoff / d)) + 8;
    }
    for (int u0 = std::max(int(center[0] - radii[0]), -ulim);
         u0 <= std::min(int(center[0] + radii[0]) + 1, ulim); ++u0)
        for (int u1 = std::max(int(center[1] - radii[1]), -ulim);
             u1 <= std::min(int(center[1] + radii[1]) + 1, ulim); ++u1)
            for (int u2 = std::max(int(center[2] - radii[2]), -ulim);
                 u2 <= std::min(int(center[2] + radii[2]) + 1, ulim); ++u2) {
                const double u[3] = {double(u0), double(u1), double(u2)};
                cplx e = 0.0;
                for (int i = 0; i < 3; ++i) {
                    e += a.lin[i] * u[i];
                    for (int j = 0; j < 3; ++j) e -= 0.5 * a.quad[i][j] * u[i] * u[j];
                }
                acc += std::exp(e);
            }
    return a.gamma * acc;
}

// shift-expansion of the k-fold Jackson derivative: terms (m, coeff) meaning
// f -> coeff * x^{-k} f(Q^m x)
struct ShiftTerm {
    long m;
    cplx coeff;
};

std::vector<ShiftTerm> jackson_power_terms(double q, long base_q_pow, int k) {
    const double Q = std::pow(q, static_cast<double>(base_q_pow));
    // operator terms as map shift -> (coeff, xpow); xpow = -#applications
    std::map<long, cplx> cur;
    cur[0] = 1.0;
    int applied = 0;
    for (int step = 0; step < k; ++step) {
        std::map<long, cplx> next;
        const double denom = Q - 1.0;
        for (const auto& [m, c] : cur) {
            // D[c x^p f(Q^m x)] with p = -applied:
            //   c Q^p/(Q-1) x^{p-1} f(Q^{m+1} x) - c/(Q-1) x^{p-1} f(Q^m x)
            const double Qp = std::pow(Q, static_cast<double>(-applied));
            next[m + 1] += c * Qp / denom;
            next[m] -= c / denom;
        }
        cur = std::move(next);
        ++applied;
    }
    std::vector<ShiftTerm> out;
    for (const auto& [m, c] : cur) out.push_back({m * base_q_pow, c});
    return out;
}

PacketAtom apply_shift_term(const Packet& p, const PacketAtom& a, Idx var, int k,
                            const ShiftTerm& t, double q) {
    // coeff * x^{-k} f(q^{t.m} x) on the given axis
    const int ax = axis_of(var);
    PacketAtom r = a;
    // shift u -> u + t.m
    const double mm = static_cast<double>(t.m);
    cplx lshift = r.lin[ax] * mm - 0.5 * r.quad[ax][ax] * mm * mm;
    r.gamma *= std::exp(lshift);
    for (int j = 0; j < 3; ++j) r.lin[j] -= r.quad[ax][j] * mm;
    // multiply x^{-k}
    const double lnq = std::log(q);
    r.lin[ax] += -k * lnq;
    if (r.signs[ax] < 0 && (k % 2 != 0)) r.gamma = -r.gamma;
    r.gamma *= t.coeff;
    (void)p;
    return r;
}

// evaluate the sum of atoms (on the orthant of `signs`) at real u
cplx eval_atoms_real(const std::vector<PacketAtom>& atoms, const std::array<int, 3>& signs,
                     const double u[3]) {
    cplx acc = 0.0;
    for (const auto& a : atoms) {
        if (a.signs != signs) continue;
        cplx e = 0.0;
        for (int i = 0; i < 3; ++i) {
            e += a.lin[i] * u[i];
            for (int j = 0; j < 3; ++j) e -= 0.5 * a.quad[i][j] * u[i] * u[j];
        }
        acc += a.gamma * std::exp(e);
    }
    return acc;
}

// reference sampling centers: peaks of the input packets' atoms (the bulk
// region that dominates every windowed integral)
struct BulkCenters {
    std::vector<std::pair<std::array<int, 3>, std::array<double, 3>>> pts;
};

BulkCenters bulk_centers(const Packet& f, const Packet& g) {
    BulkCenters out;
    auto grab = [&](const Packet& p) {
        for (const auto& a : p.atoms()) {
            double ctr[3];
            try {
                atom_log_peak(a, ctr);
            } catch (const packet_error&) {
                continue;
            }
            out.pts.push_back({a.signs, {ctr[0], ctr[1], ctr[2]}});
            if (out.pts.size() >= 8) return;
        }
    };
    grab(f);
    grab(g);
    return out;
}

// sup of the (cancelling) atom sum sampled over a stencil around the bulk
// centers; the gauge used by the truncation certificate
double packet_sup_bulk(const std::vector<PacketAtom>& atoms, const BulkCenters& bulk,
                       int stencil) {
    if (atoms.empty()) return 0.0;
    double best = 0.0;
    for (const auto& [signs, ctr] : bulk.pts) {
        for (int dx = -stencil; dx <= stencil; dx += 2)
            for (int dy = -stencil; dy <= stencil; dy += 2)
                for (int dz = -stencil; dz <= stencil; dz += 2) {
                    const double u[3] = {ctr[0] + dx, ctr[1] + dy, ctr[2] + dz};
                    best = std::max(best, std::abs(eval_atoms_real(atoms, signs, u)));
                }
    }
    return best;
}

double packet_sup_estimate(const std::vector<PacketAtom>& atoms) {
    double s = 0;
    for (const auto& a : atoms) {
        try {
            s += std::exp(atom_log_peak(a, nullptr));
        } catch (const packet_error&) {
            s += std::abs(a.gamma);
        }
    }
    return s;
}

}  // namespace

double Packet::sup_norm_estimate() const { return packet_sup_estimate(atoms_); }

Packet star(const Packet& f, const Packet& g, const StarOptions& opt) {
    if (f.q() != g.q()) throw packet_error("mismatched q");
    const double q = f.q();
    const double lnq = std::log(q);
    const double beta = 2.0 / lnq;
    const double lam = q - 1.0 / q;
    Packet out(q);
    const BulkCenters bulk = bulk_centers(f, g);
    double sum_est = 0.0;
    double prev_est = -1.0;
    bool done = false;
    for (int k = 0; k < opt.max_terms && !done; ++k) {
        // lambda^k / [[k]]_{q^4}!
        double coeff = 1.0;
        for (int i = 1; i <= k; ++i) {
            const double qn = (std::pow(q, 4.0 * i) - 1.0) / (std::pow(q, 4.0) - 1.0);
            coeff /= qn;
        }
        coeff *= std::pow(lam, k);
        const auto dterms = jackson_power_terms(q, 4, k);
        std::vector<PacketAtom> term_atoms;
        for (const auto& fa : f.atoms()) {
            for (const auto& ga : g.atoms()) {
                if (fa.signs != ga.signs) continue;  // diagonal evaluation
                for (const auto& tf : dterms) {
                    for (const auto& tg : dterms) {
                        // D^k_{q^4, x-} on f-atom; D^k_{q^4, x+} on g-atom
                        PacketAtom A = apply_shift_term(f, fa, Idx::Minus, k, tf, q);
                        PacketAtom B = apply_shift_term(g, ga, Idx::Plus, k, tg, q);
                        // joint 6-var gaussian, coupling, diagonal evaluation
                        GaussParams jp;
                        jp.quad.assign(6, CVec(6, 0.0));
                        jp.lin.assign(6, 0.0);
                        jp.log_scale = 0.0;
                        for (int i = 0; i < 3; ++i) {
                            jp.lin[i] = A.lin[i];
                            jp.lin[i + 3] = B.lin[i];
                            for (int j = 0; j < 3; ++j) {
                                jp.quad[i][j] = A.quad[i][j];
                                jp.quad[i + 3][j + 3] = B.quad[i][j];
                            }
                        }
                        CMat Bc(6, CVec(6, 0.0));
                        Bc[1][3] = Bc[3][1] = beta;  // n3 x n'+
                        Bc[2][4] = Bc[4][2] = beta;  // n- x n'3
                        const GaussParams up = gauss_coupling_update(jp, Bc);
                        PacketAtom outa;
                        outa.signs = fa.signs;
                        for (int i = 0; i < 3; ++i) {
                            outa.lin[i] = up.lin[i] + up.lin[i + 3];
                            for (int j = 0; j < 3; ++j)
                                outa.quad[i][j] = up.quad[i][j] + up.quad[i + 3][j + 3] +
                                                  up.quad[i][j + 3] + up.quad[i + 3][j];
                        }
                        outa.gamma = A.gamma * B.gamma * std::exp(up.log_scale) * coeff;
                        // multiply (x3)^{2k}
                        outa.lin[1] += 2.0 * k * lnq;
                        term_atoms.push_back(std::move(outa));
                    }
                }
            }
        }
        const double est = packet_sup_bulk(term_atoms, bulk, opt.bulk_stencil);
        if (opt.trace)
            std::fprintf(stderr, "star order %d: %zu atoms, bulk estimate %.3e\n", k,
                         term_atoms.size(), est);
        sum_est = std::max(sum_est, est);
        if (k > 0 && est <= opt.tolerance * std::max(sum_est, 1e-300)) {
            done = true;
        } else if (k > 1 && prev_est >= 0.0 && est > prev_est) {
            // the series is asymptotic on packets: once the terms turn, the
            // smallest term bounds the achievable accuracy
            throw packet_error(
                "star: truncation tolerance not met (asymptotic minimum reached); "
                "use wider packets or a larger q-window");
        }
        for (auto& a : term_atoms) out.add(std::move(a));
        prev_est = est;
    }
    if (!done) throw packet_error("star: truncation tolerance not met at max_terms");
    return out;
}

cplx volume_integral(const Packet& f, const IntegrationWindow& win) {
    const double q = f.q();
    const double lnq = std::log(q);
    const double np = (q * q - 1.0) / 2.0;
    const double n3 = q - 1.0;
    const auto& atoms = f.atoms();
    double racc = 0.0, iacc = 0.0;
    bool failed = false;
    std::string failure;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : racc, iacc) schedule(dynamic)
#endif
    for (size_t i = 0; i < atoms.size(); ++i) {
        try {
            PacketAtom w = atoms[i];
            // weights n_A q^{u_A} per coordinate
            w.gamma *= np * n3 * np;
            for (int k = 0; k < 3; ++k) w.lin[k] += lnq;
            const cplx v = lattice_sum_atom(w, win.halfwidth);
            racc += v.real();
            iacc += v.imag();
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed) throw packet_error(failure);
    return {racc, iacc};
}

cplx scalar_product(const Packet& f, const Packet& g, const StarOptions& opt,
                    const IntegrationWindow& win) {
    return volume_integral(star(f.conjugate(), g, opt), win);
}

StokesReport stokes_check(const Packet& f, const Packet& g, Idx a, double tolerance) {
    const cplx lhs = volume_integral(star(f.partial_right(DFamily::Plain, a, true), g));
    const cplx rhs = volume_integral(star(f, g.partial_upper(DFamily::Plain, a)));
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    const double dev = std::abs(lhs - rhs) / scale;
    return {a, std::abs(lhs), dev, dev <= tolerance};
}

}  // namespace qspace
