#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qspace/calculus.hpp>

#include <random>
#include <vector>

using namespace qspace;

namespace {

std::vector<CMono> monomials_up_to(int deg, int tmax = 1) {
    std::vector<CMono> out;
    for (int a = 0; a <= deg; ++a)
        for (int b = 0; a + b <= deg; ++b)
            for (int c = 0; a + b + c <= deg; ++c)
                for (int d = 0; d <= tmax && a + b + c + d <= deg; ++d)
                    out.push_back({a, b, c, d});
    return out;
}

CPoly mono(int a, int b, int c, int d = 0) { return CPoly::monomial({a, b, c, d}); }

}  // namespace

TEST_CASE("jackson derivative on monomials") {
    // D_{q^4} (x+)^2 = (1+q^4) x+
    CHECK(jackson_D(4, Idx::Plus, mono(2, 0, 0)) ==
          mono(1, 0, 0) * CScalar(QScalar(1) + QScalar::q_power(4)));
    CHECK(jackson_D(2, Idx::Three, CPoly(1)).is_zero());
    // classical limit: n x^{n-1}
    for (int n = 1; n <= 6; ++n) {
        const CPoly d = jackson_D(2, Idx::Plus, mono(n, 0, 0));
        CHECK(equal_at_q(d, mono(n - 1, 0, 0) * CScalar(QScalar(n)), Rat(1)));
    }
}

TEST_CASE("star product: spec examples") {
    const CPoly xp = mono(1, 0, 0), x3 = mono(0, 1, 0), xm = mono(0, 0, 1);
    const CPoly t = CPoly::time_var();
    CHECK(star(CPoly(1), x3 * xm) == x3 * xm);
    CHECK(star(x3, xp) == xp * x3 * CScalar(QScalar::q_power(2)));
    CHECK(star(xm, xp) == xp * xm + x3 * x3 * CScalar(QScalar::lambda()));
    CHECK(star(t * xp, x3) == t * star(xp, x3));
}

TEST_CASE("homomorphism: star equals the rewriting oracle") {
    const auto monos = monomials_up_to(3);
    for (const auto& m1 : monos) {
        for (const auto& m2 : monos) {
            const CPoly f = CPoly::monomial(m1);
            const CPoly g = CPoly::monomial(m2);
            CHECK(star(f, g) == oracle_star(f, g));
        }
    }
}

TEST_CASE("homomorphism for the reversed ordering") {
    const auto monos = monomials_up_to(3);
    for (const auto& m1 : monos) {
        for (const auto& m2 : monos) {
            const CPoly f = CPoly::monomial(m1);
            const CPoly g = CPoly::monomial(m2);
            CHECK(star(f, g, NormalOrdering::Reversed) ==
                  oracle_star(f, g, NormalOrdering::Reversed));
        }
    }
}

TEST_CASE("star is associative on low-degree monomials") {
    const auto monos = monomials_up_to(2, 0);
    for (const auto& m1 : monos)
        for (const auto& m2 : monos)
            for (const auto& m3 : monos) {
                const CPoly f = CPoly::monomial(m1), g = CPoly::monomial(m2),
                            h = CPoly::monomial(m3);
                CHECK(star(f, star(g, h)) == star(star(f, g), h));
            }
}

TEST_CASE("conjugation property of the star product") {
    const auto monos = monomials_up_to(3, 0);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<size_t> pick(0, monos.size() - 1);
    for (int trial = 0; trial < 60; ++trial) {
        const CPoly f = CPoly::monomial(monos[pick(rng)]) +
                        CScalar::i() * CPoly::monomial(monos[pick(rng)]);
        const CPoly g = CPoly::monomial(monos[pick(rng)]);
        CHECK(conjugate_fn(star(f, g)) == star(conjugate_fn(g), conjugate_fn(f)));
    }
}

TEST_CASE("conjugate_fn agrees with the word-level conjugation") {
    const auto monos = monomials_up_to(4);
    for (const auto& m : monos) {
        const CPoly f = CPoly::monomial(m);
        const CPoly via_words =
            moyal_weyl_inv(normalize(conjugate_nc(moyal_weyl(f))));
        CHECK(conjugate_fn(f) == via_words);
    }
    // involution on a complex combination
    const CPoly f = mono(1, 2, 0) * CScalar::i() + mono(0, 1, 1);
    CHECK(conjugate_fn(conjugate_fn(f)) == f);
    CHECK(conjugate_fn(mono(0, 1, 0)) == mono(0, 1, 0));
    CHECK(conjugate_fn(mono(1, 0, 0)) == mono(0, 0, 1) * CScalar(-QScalar::q_power(1)));
}

TEST_CASE("operator representations: spec examples") {
    CHECK(partial(DFamily::Plain, Idx::Plus, Side::Left, mono(1, 0, 0)) == CPoly(1));
    CHECK(partial(DFamily::Plain, Idx::Three, Side::Left, mono(1, 1, 0)) ==
          mono(1, 0, 0) * CScalar(QScalar::q_power(2)));
    CHECK(partial(DFamily::Plain, Idx::Zero, Side::Left,
                  CPoly::monomial({0, 0, 1, 2})) ==
          CPoly::monomial({0, 0, 1, 1}) * CScalar(2));
    CHECK(partial(DFamily::Plain, Idx::Minus, Side::Left, mono(0, 2, 0)) ==
          mono(1, 0, 0) *
              CScalar(QScalar::lambda() * (QScalar(1) + QScalar::q_power(2))));
}

TEST_CASE("left actions match the rewriting oracle in both families") {
    const auto monos = monomials_up_to(4);
    for (const auto& m : monos) {
        const CPoly f = CPoly::monomial(m);
        for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus, Idx::Zero}) {
            CHECK(partial(DFamily::Plain, a, Side::Left, f) ==
                  derivative_action_oracle(DFamily::Plain, a, f));
            CHECK(partial(DFamily::Hatted, a, Side::Left, f) ==
                  derivative_action_oracle(DFamily::Hatted, a, f));
        }
    }
}

TEST_CASE("right action of the time derivative is minus the left one") {
    const CPoly f = CPoly::monomial({1, 0, 0, 2});
    CHECK(partial(DFamily::Plain, Idx::Zero, Side::Right, f) ==
          -partial(DFamily::Plain, Idx::Zero, Side::Left, f));
    CHECK(partial(DFamily::Hatted, Idx::Zero, Side::Right, f) ==
          -partial(DFamily::Hatted, Idx::Zero, Side::Left, f));
}

TEST_CASE("right actions: transport identity and pairing normalization") {
    // conj(f <| d^i) = -d_i |> conj(f)
    const auto monos = monomials_up_to(3);
    for (const auto& m : monos) {
        const CPoly f = CPoly::monomial(m);
        for (Idx a : {Idx::Plus, Idx::Three, Idx::Minus}) {
            for (DFamily fam : {DFamily::Plain, DFamily::Hatted}) {
                const CPoly lhs = conjugate_fn(partial_upper(fam, a, Side::Right, f));
                const CPoly rhs = -partial(fam, a, Side::Left, conjugate_fn(f));
                CHECK(lhs == rhs);
            }
        }
    }
    // the lower-index right action normalizes the dual basis: x^A <| d_A = -1
    CHECK(partial(DFamily::Plain, Idx::Plus, Side::Right, mono(1, 0, 0)) == -CPoly(1));
    CHECK(partial(DFamily::Plain, Idx::Three, Side::Right, mono(0, 1, 0)) == -CPoly(1));
    CHECK(partial(DFamily::Plain, Idx::Minus, Side::Right, mono(0, 0, 1)) == -CPoly(1));
    // and the falling factorials appear without stray metric powers
    CHECK(partial(DFamily::Plain, Idx::Plus, Side::Right,
                  partial(DFamily::Plain, Idx::Plus, Side::Right, mono(2, 0, 0))) ==
          CPoly(1) * CScalar(qfact(2, QBase::q_pow(4))));
}

TEST_CASE("classical limit of the star product") {
    const auto monos = monomials_up_to(4, 0);
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<size_t> pick(0, monos.size() - 1);
    for (int trial = 0; trial < 80; ++trial) {
        const CPoly f = CPoly::monomial(monos[pick(rng)]);
        const CPoly g = CPoly::monomial(monos[pick(rng)]);
        CHECK(equal_at_q(star(f, g), f * g, Rat(1)));
    }
}

TEST_CASE("LinOp composition") {
    const LinOp d3 = LinOp::partial_op(DFamily::Plain, Idx::Three);
    const LinOp scale = LinOp::scale_var(Idx::Plus, CScalar(QScalar::q_power(2)));
    const CPoly f = mono(1, 1, 0);
    CHECK(LinOp::compose({d3, scale}).apply(f) ==
          partial(DFamily::Plain, Idx::Three, Side::Left,
                  f.scale_var(Idx::Plus, CScalar(QScalar::q_power(2)))));
    const LinOp s = LinOp::sum({{CScalar(2), LinOp::identity()},
                                {CScalar(-1), LinOp::identity()}});
    CHECK(s.apply(f) == f);
}
