#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qspace/uqsu2.hpp>

using namespace qspace;

TEST_CASE("weight-basis actions: printed samples") {
    // T3 |1,0> = 0
    CHECK(act(UqGen::T3, RepVector::basis(2, 0)).is_zero());
    // T+ |1,1> = 0
    CHECK(act(UqGen::Tplus, RepVector::basis(2, 2)).is_zero());
    // T3 |1,1> = q^-2 lam_+ |1,1>
    const RepVector got = act(UqGen::T3, RepVector::basis(2, 2));
    const RepVector expect =
        RepVector::basis(2, 2) * CScalar(QScalar::q_power(-2) * QScalar::lambda_plus());
    CHECK(got == expect);
    // tau acts as q^{-4m}
    CHECK(act(UqGen::Tau, RepVector::basis(3, 1)) ==
          RepVector::basis(3, 1) * CScalar(QScalar::q_power(-2)));
}

TEST_CASE("Casimir eigenvalues for j up to 2") {
    for (int twoj : {0, 1, 2, 3, 4}) {
        const CScalar ev(casimir_eigenvalue(twoj));
        for (int twom = -twoj; twom <= twoj; twom += 2) {
            const RepVector v = RepVector::basis(twoj, twom);
            CHECK(act(UqGen::Casimir, v) == v * ev);
        }
    }
    // classical limit j(j+1) at q=1
    CHECK(casimir_eigenvalue(2).eval_at(1) == Rat(2));
    CHECK(casimir_eigenvalue(4).eval_at(1) == Rat(6));
}

TEST_CASE("Hopf maps on the generators") {
    CHECK(counit(UqGen::Tplus).is_zero());
    CHECK(counit(UqGen::Tminus).is_zero());
    CHECK(counit(UqGen::T3).is_zero());
    CHECK(antipode(UqGen::T3) ==
          -NCElement::word({Gen::TauHalfInv, Gen::TauHalfInv, Gen::T3}));
    const auto cp = coproduct(UqGen::Tminus);
    REQUIRE(cp.size() == 2);
    CHECK(cp[0].left == NCElement::generator(Gen::Tminus));
    CHECK(cp[0].right == NCElement::one());
    CHECK(cp[1].left == NCElement::generator(Gen::TauHalf));
    CHECK(cp[1].right == NCElement::generator(Gen::Tminus));
    CHECK_THROWS_AS(coproduct(UqGen::Casimir), uqsu2_error);
}

TEST_CASE("commute_through: printed relations") {
    // T3 X3 = X3 T3
    CHECK(commute_through(UqGen::T3, Gen::X3) ==
          NCElement::word({Gen::X3, Gen::T3}));
    // T- X+ = q^-2 X+ T- + q^{1/2} lam_+^{1/2} X3
    const NCElement got = commute_through(UqGen::Tminus, Gen::Xplus);
    const NCElement expect =
        CScalar(QScalar::q_power(-2)) * NCElement::word({Gen::Xplus, Gen::Tminus}) +
        CScalar(QScalar::s_power(1)) * CScalar(RScalar::sqrt_of(QScalar::lambda_plus())) *
            NCElement::generator(Gen::X3);
    CHECK(got == expect);
    // T+ X0 = X0 T+
    CHECK(commute_through(UqGen::Tplus, Gen::X0) ==
          NCElement::word({Gen::X0, Gen::Tplus}));
}

TEST_CASE("identity suite passes for j <= 2") {
    for (const auto& c : uqsu2_identity_check(4)) {
        INFO(c.identity);
        CHECK(c.pass);
    }
}
