#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qspace/rmatrix.hpp>

using namespace qspace;

TEST_CASE("printed entries of the braiding matrix") {
    const QMatrix r = rhat(true);
    auto at = [&](const char* row, const char* col) {
        auto one = [](char c) {
            switch (c) {
                case '0': return Idx::Zero;
                case '+': return Idx::Plus;
                case '3': return Idx::Three;
                default: return Idx::Minus;
            }
        };
        return r.at(PairBasis::position(one(row[0]), one(row[1])),
                    PairBasis::position(one(col[0]), one(col[1])));
    };
    CHECK(at("++", "++") == QScalar(1));
    CHECK(at("+3", "3+") == QScalar::q_power(-2));
    CHECK(at("-+", "-+") ==
          QScalar::q_power(-3) * QScalar::lambda() * QScalar::lambda() * QScalar::lambda_plus());
    CHECK(at("00", "00") == QScalar(1));
    CHECK(at("0+", "+0") == QScalar::q_power(-2));
    CHECK(at("+0", "0+") == QScalar::q_power(-2));
    CHECK(at("0+", "0+") == QScalar());
}

TEST_CASE("full identity suite passes") {
    for (const auto& c : rmatrix_identity_check()) {
        INFO(c.identity);
        CHECK(c.pass);
    }
}

TEST_CASE("parameter validation rejects eigenvalue collisions") {
    ExtendedParams p;
    p.d = p.e = QScalar::q_power(-6);
    CHECK_THROWS_AS(p.validate(), rmatrix_error);
    ExtendedParams p2;
    p2.d = p2.e = QScalar(1);
    CHECK_THROWS_AS(p2.validate(), rmatrix_error);
    ExtendedParams p3;
    p3.d = p3.e = QScalar::q_power(-4);  // collides with the q^-4 factor in the P- denominator
    CHECK_THROWS_AS(p3.validate(), rmatrix_error);
    ExtendedParams ok;
    ok.d = ok.e = QScalar::q_power(-8);
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("index raising and lowering") {
    auto [lm, cm] = lower_index(Idx::Plus);
    CHECK(lm == Idx::Minus);
    CHECK(cm == -QScalar::q_power(1));
    CHECK(metric_upper(Idx::Plus, Idx::Minus) == -QScalar::q_power(1));
    CHECK(metric_upper(Idx::Plus, Idx::Plus).is_zero());
}

TEST_CASE("alternate admissible parameters keep the algebra") {
    ExtendedParams p;
    p.a = QScalar::q_power(2);
    p.d = p.e = QScalar::q_power(-8);
    for (const auto& c : rmatrix_identity_check(p)) {
        INFO(c.identity);
        CHECK(c.pass);
    }
}
