#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qspace/packets.hpp>

#include <map>
#include <random>

using namespace qspace;

namespace {

// Series oracle for the coupling update in two variables: applies
// exp(beta d_a d_b) to gamma exp(-1/2 A u u + b u) by differentiating the
// polynomial-times-gaussian representation term by term.
cplx coupling_series_value(double beta, const std::array<std::array<cplx, 2>, 2>& A,
                           const std::array<cplx, 2>& b, double ua, double ub,
                           int orders) {
    // polynomial coefficients in (ua, ub): map (i,j) -> c
    using Poly2 = std::map<std::pair<int, int>, cplx>;
    auto deriv = [&](const Poly2& p, int var) {
        // d/du_var [ P * G ] = (dP + P * dlogG) * G, dlogG = -(A u)_var + b_var
        Poly2 r;
        for (const auto& [k, c] : p) {
            auto [i, j] = k;
            if (var == 0 && i > 0) r[{i - 1, j}] += c * cplx(i, 0);
            if (var == 1 && j > 0) r[{i, j - 1}] += c * cplx(j, 0);
            // -A[var][0] ua - A[var][1] ub + b[var]
            r[{i + (var == 0 ? 1 : 0) + (var == 1 ? 0 : 0), j}] += 0;  // keep shape
        }
        for (const auto& [k, c] : p) {
            auto [i, j] = k;
            r[{i + 1, j}] += -c * A[var][0];
            r[{i, j + 1}] += -c * A[var][1];
            r[{i, j}] += c * b[var];
        }
        return r;
    };
    Poly2 cur;
    cur[{0, 0}] = 1.0;
    cplx total = 0.0;
    double fact = 1.0;
    for (int n = 0; n <= orders; ++n) {
        if (n > 0) {
            cur = deriv(deriv(cur, 0), 1);
            fact *= n;
        }
        cplx val = 0.0;
        for (const auto& [k, c] : cur)
            val += c * std::pow(ua, k.first) * std::pow(ub, k.second);
        total += std::pow(beta, n) / fact * val;
    }
    cplx e = b[0] * ua + b[1] * ub;
    e -= 0.5 * (A[0][0] * ua * ua + (A[0][1] + A[1][0]) * ua * ub + A[1][1] * ub * ub);
    return total * std::exp(e);
}

Packet bump(double q, std::array<double, 3> center, double width = 7.0,
            cplx amp = {1.0, 0.0}, std::array<int, 3> signs = {+1, +1, +1}) {
    return Packet::gaussian(q, signs, center, {width, width, width}, amp);
}

// physical wave packet: sigma-even combination (positive-definite sector)
Packet phys(double q, std::array<double, 3> center, double width, cplx amp) {
    return bump(q, center, width, amp).sigma_symmetrized();
}

}  // namespace

TEST_CASE("gaussian coupling update agrees with the series expansion") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int trial = 0; trial < 12; ++trial) {
        const double beta = 0.11 + 0.05 * trial / 12.0;
        std::array<std::array<cplx, 2>, 2> A{};
        A[0][0] = cplx(0.8 + 0.2 * u(rng), 0.2 * u(rng));
        A[1][1] = cplx(0.7 + 0.2 * u(rng), 0.2 * u(rng));
        A[0][1] = A[1][0] = cplx(0.1 * u(rng), 0.05 * u(rng));
        std::array<cplx, 2> b = {cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};

        GaussParams gp;
        gp.quad = {{A[0][0], A[0][1]}, {A[1][0], A[1][1]}};
        gp.lin = {b[0], b[1]};
        gp.log_scale = 0.0;
        std::vector<std::vector<cplx>> B = {{0.0, beta}, {beta, 0.0}};
        const GaussParams out = gauss_coupling_update(gp, B);

        const double ua = 0.7, ub = -0.4;
        cplx e = out.lin[0] * ua + out.lin[1] * ub + out.log_scale;
        e -= 0.5 * (out.quad[0][0] * ua * ua + (out.quad[0][1] + out.quad[1][0]) * ua * ub +
                    out.quad[1][1] * ub * ub);
        const cplx got = std::exp(e);
        const cplx expect = coupling_series_value(beta, A, b, ua, ub, 40);
        CHECK(std::abs(got - expect) <= 1e-11 * std::abs(expect));
    }
}

TEST_CASE("packet evaluation and rendering agree") {
    const double q = 1.05;
    const Packet p = bump(q, {1.0, -0.5, 0.3});
    const LatticeFn r = p.render({-4, 4}, {-4, 4}, {-4, 4});
    const double x = std::pow(q, 2), y = std::pow(q, -1), z = std::pow(q, 0);
    CHECK(std::abs(p.value(x, y, z) - r.value({+1, 2}, {+1, -1}, {+1, 0})) < 1e-14);
}

TEST_CASE("packet jackson derivative matches the lattice one") {
    const double q = 1.06;
    const Packet p = bump(q, {0.0, 0.0, 0.0}, 5.0);
    const LatticeFn lf = p.render({-30, 30}, {-30, 30}, {-30, 30});
    const LatticeFn lhs = p.jackson_D(4, Idx::Plus).render({-20, 20}, {-20, 20}, {-20, 20});
    const LatticeFn rhs = lf.jackson_D(4, Idx::Plus);
    double worst = 0.0;
    for (int j = -20; j <= 20; ++j)
        worst = std::max(worst, std::abs(lhs.value({+1, j}, {+1, 0}, {+1, 0}) -
                                         rhs.value({+1, j}, {+1, 0}, {+1, 0})));
    CHECK(worst < 1e-12);
}

TEST_CASE("volume integral of a packet matches the rendered lattice sum") {
    const double q = 1.08;
    const Packet p = bump(q, {0.5, 0.0, -1.0}, 5.0, cplx(0.7, 0.4));
    const cplx got = volume_integral(p);
    const LatticeFn r = p.render({-90, 90}, {-90, 90}, {-90, 90});
    const cplx expect = volume_integral(r);
    CHECK(std::abs(got - expect) <= 1e-10 * std::abs(expect));
}

TEST_CASE("star product approaches the pointwise product as q -> 1") {
    const double q = 1.002;
    const Packet f = bump(q, {20.0, 10.0, -10.0}, 150.0);
    const Packet g = bump(q, {-10.0, 0.0, 20.0}, 170.0);
    const Packet s = star(f, g);
    const double xp = std::pow(q, 10), x3 = std::pow(q, -4), xm = std::pow(q, 6);
    const cplx lhs = s.value(xp, x3, xm);
    const cplx rhs = f.value(xp, x3, xm) * g.value(xp, x3, xm);
    CHECK(std::abs(lhs - rhs) <= 1e-2 * std::abs(rhs));
}

TEST_CASE("scalar product: sesquilinearity and conjugate symmetry") {
    const double q = 1.05;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 4; ++trial) {
        const Packet f = phys(q, {u(rng), u(rng), u(rng)}, 16.0, cplx(u(rng), u(rng)));
        const Packet g = phys(q, {u(rng), u(rng), u(rng)}, 17.0, cplx(u(rng), u(rng)));
        const Packet h = phys(q, {u(rng), u(rng), u(rng)}, 16.5, cplx(u(rng), u(rng)));
        const cplx a(0.3, -1.1), b(0.8, 0.25);
        // linear in the second slot
        const cplx lhs = scalar_product(f, g.scaled(a) + h.scaled(b));
        const cplx rhs = a * scalar_product(f, g) + b * scalar_product(f, h);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1e-12));
        // antilinear in the first slot
        const cplx lhs2 = scalar_product(f.scaled(a), g);
        const cplx rhs2 = std::conj(a) * scalar_product(f, g);
        CHECK(std::abs(lhs2 - rhs2) <= 1e-12 * (std::abs(lhs2) + 1e-12));
        // conjugate symmetry
        const cplx s1 = scalar_product(f, g);
        const cplx s2 = scalar_product(g, f);
        CHECK(std::abs(std::conj(s1) - s2) <= 1e-12 * (std::abs(s1) + 1e-12));
    }
}

TEST_CASE("norm positivity on sigma-even packets") {
    const double q = 1.05;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        const Packet f = phys(q, {u(rng), u(rng), u(rng)}, 16.0, cplx(u(rng), u(rng)));
        const cplx n = scalar_product(f, f);
        CHECK(n.real() > 0.0);
        CHECK(std::abs(n.imag()) <= 1e-12 * n.real());
    }
    // a single-orthant packet is isotropic for the pairing: conjugation moves
    // its support to the mirror orthant
    const Packet lone = bump(q, {0, 0, 0}, 16.0);
    const cplx n0 = scalar_product(lone, lone);
    CHECK(std::abs(n0) == 0.0);
}

TEST_CASE("stokes identity on random bumps") {
    const double q = 1.05;
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 2; ++trial) {
        const Packet f = phys(q, {u(rng), u(rng), u(rng)}, 16.0, 1.0);
        const Packet g = phys(q, {u(rng), u(rng), u(rng)}, 17.0, 1.0);
        for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus}) {
            const StokesReport r = stokes_check(f, g, a, 1e-10);
            INFO("index ", idx_name(a), " deviation ", r.relative_deviation);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("conjugation is an involution on packets") {
    const double q = 1.07;
    const Packet f = bump(q, {0.4, -0.2, 1.1}, 6.0, cplx(0.3, 0.9));
    const Packet ff = f.conjugate().conjugate();
    const double xp = std::pow(q, 1), x3 = std::pow(q, -2), xm = std::pow(q, 3);
    CHECK(std::abs(f.value(xp, x3, xm) - ff.value(xp, x3, xm)) < 1e-14);
    // conjugate evaluates to the conjugated value at the mapped point
    const cplx lhs = f.conjugate().value(xp, x3, xm);
    const cplx rhs = std::conj(f.value(-q * xm, x3, -xp / q));
    CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("narrow packets are rejected by the coupling") {
    const double q = 1.05;  // beta = 2/ln q ~ 41 forces widths well above ~9 steps
    const Packet narrow = phys(q, {0, 0, 0}, 3.0, 1.0);
    CHECK_THROWS_AS((void)scalar_product(narrow, narrow), packet_error);
}
