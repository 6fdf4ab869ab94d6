#pragma once

#include "qspace/lattice.hpp"
#include "qspace/ncspace.hpp"

#include <array>
#include <complex>
#include <vector>

namespace qspace {

struct packet_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One log-Gaussian atom on a fixed sign orthant:
///   value(x) = gamma * exp(-1/2 u^T A u + b^T u),   u_A = ln|x_A| / ln q,
/// with A complex symmetric (positive-definite real part) and complex b.
/// The class is closed under every operator the deformed analysis needs:
/// argument scalings, coordinate multiplications, Jackson derivatives, the
/// bilinear grading factors of the star product, conjugation, integration.
struct PacketAtom {
    std::array<int, 3> signs{+1, +1, +1};          // orthant (x+, x3, x-)
    cplx gamma{1.0, 0.0};
    std::array<std::array<cplx, 3>, 3> quad{};     // A, symmetric
    std::array<cplx, 3> lin{};                     // b
};

class Packet {
  public:
    Packet() = default;
    explicit Packet(double q) : q_(q) {
        if (q <= 1.0) throw packet_error("packets require numeric q > 1");
    }

    double q() const { return q_; }
    const std::vector<PacketAtom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    void add(PacketAtom a) { atoms_.push_back(std::move(a)); }

    /// Separable real-width Gaussian centered at u = c with width w (in lattice
    /// steps) per coordinate, on the given orthant.
    static Packet gaussian(double q, std::array<int, 3> signs, std::array<double, 3> center,
                           std::array<double, 3> width, cplx amplitude = {1.0, 0.0});

    Packet operator+(const Packet& o) const;
    Packet operator-(const Packet& o) const;
    Packet scaled(cplx c) const;

    /// x_A -> q^k x_A.
    Packet scale_var(Idx a, long k) const;
    /// multiply by (x_A)^n.
    Packet mul_power(Idx a, int n) const;
    /// Jackson derivative D_{q^k, x_A}.
    Packet jackson_D(long base_q_pow, Idx a) const;
    /// Left action of the partial derivatives (both families, operator
    /// representations identical to the polynomial ones).
    Packet partial(DFamily fam, Idx a) const;
    /// Upper index d^A = g^{AB} d_B (numeric metric weights).
    Packet partial_upper(DFamily fam, Idx a) const;
    /// Right action via conjugation transport.
    Packet partial_right(DFamily fam, Idx a, bool upper) const;
    /// Quantum space conjugation.
    Packet conjugate() const;
    /// Pullback along the conjugation point map sigma: f -> f o sigma with
    /// sigma(x+, x3, x-) = (-q x-, x3, -x+/q).  sigma-even packets
    /// (f o sigma = f) form the positive-definite physical subspace of the
    /// deformed scalar product.
    Packet sigma_image() const;
    /// f + f o sigma: projects a packet into the sigma-even subspace.
    Packet sigma_symmetrized() const;

    cplx value(double xp, double x3, double xm) const;
    LatticeFn render(JWindow wp, JWindow w3, JWindow wm) const;
    double sup_norm_estimate() const;

  private:
    Packet sigma_pullback(bool conj_params) const;
    double q_ = 0;
    std::vector<PacketAtom> atoms_;
};

/// Integration window for the packet backend: the lattice sums run over
/// |u_A| <= halfwidth (x_A between q^-halfwidth and q^halfwidth).  Packets
/// must decay below working precision well inside the window.
struct IntegrationWindow {
    int halfwidth = 160;
};

struct StarOptions {
    int max_terms = 24;
    double tolerance = 1e-12;
    bool trace = false;        // print per-order tail estimates (debugging aid)
    int bulk_stencil = 4;      // sampling offsets for the truncation certificate
};

/// Deformed star product on packets: the terminating k-series together with
/// the exact Gaussian realization of the grading factor q^{2(n3 n'+ + n- n'3)}
/// (the coupling exp((2/ln q) d_{u3} d_{u'+}) in log coordinates).  Throws a
/// packet_error if the tail estimate stays above tolerance at max_terms or if
/// a packet is too narrow for the coupling.
Packet star(const Packet& f, const Packet& g, const StarOptions& opt = StarOptions());

/// Volume integral with the canonical lattice weights over the window.
cplx volume_integral(const Packet& f, const IntegrationWindow& win = IntegrationWindow());

/// q-deformed scalar product <f|g> = integral of conj(f) star g.
cplx scalar_product(const Packet& f, const Packet& g,
                    const StarOptions& opt = StarOptions(),
                    const IntegrationWindow& win = IntegrationWindow());

struct StokesReport {
    Idx index;
    double lhs_abs;
    double relative_deviation;
    bool pass;
};

/// q-analog of Stokes' theorem: integral (f <| d^A) star g equals
/// integral f star (d^A |> g), checked to the given relative tolerance.
StokesReport stokes_check(const Packet& f, const Packet& g, Idx a,
                          double tolerance = 1e-10);

/// Exact coupled-Gaussian update  exp((1/2) d^T B d) applied to a Gaussian
/// exp(-1/2 u^T A u + b^T u); exposed for the dual-route unit test against the
/// series expansion.
struct GaussParams {
    std::vector<std::vector<cplx>> quad;
    std::vector<cplx> lin;
    cplx log_scale;  // additional log-prefactor accumulated by the update
};
GaussParams gauss_coupling_update(const GaussParams& in,
                                  const std::vector<std::vector<cplx>>& B);

}  // namespace qspace
