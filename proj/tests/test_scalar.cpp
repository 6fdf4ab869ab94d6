#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qspace/scalar.hpp>

#include <random>

using namespace qspace;

namespace {

QScalar q_pow(long k) { return QScalar::q_power(k); }

QScalar random_qscalar(std::mt19937_64& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<int> coef(-4, 4);
    auto rand_poly = [&](bool nonzero) {
        Poly p;
        const int d = deg(rng);
        for (int i = 0; i <= d; ++i) p.at(i) = coef(rng);
        p.trim();
        if (nonzero && p.is_zero()) p = Poly(Rat(1));
        return p;
    };
    // even-degree (q-rational) values
    Poly n = rand_poly(false), d = rand_poly(true);
    Poly n2, d2;
    for (int i = 0; i <= n.degree(); ++i) n2.at(2 * i) = n[i];
    for (int i = 0; i <= d.degree(); ++i) d2.at(2 * i) = d[i];
    n2.trim();
    d2.trim();
    std::uniform_int_distribution<int> sh(-3, 3);
    return QScalar(n2, d2, 2 * sh(rng));
}

}  // namespace

TEST_CASE("q-number expansions") {
    CHECK(qnum(0, QBase::q_pow(1)).is_zero());
    CHECK(qnum(1, QBase::q_pow(1)) == QScalar(1));
    CHECK(qnum(3, QBase::q_pow(1)) == QScalar(1) + q_pow(1) + q_pow(2));
    CHECK(qnum(2, QBase::q_pow(4)) == QScalar(1) + q_pow(4));
    CHECK_THROWS_AS(qnum(-1, QBase::q_pow(1)), scalar_error);
}

TEST_CASE("q-number closed form agrees with expansion") {
    for (long n = 0; n <= 12; ++n) {
        for (long b : {1L, 2L, 4L, -2L, -4L}) {
            const QScalar base = q_pow(b);
            const QScalar lhs = qnum(n, QBase::q_pow(b)) * (QScalar(1) - base);
            const QScalar rhs = QScalar(1) - base.pow(n);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("q-factorials") {
    CHECK(qfact(0, QBase::q_pow(1)) == QScalar(1));
    CHECK(qfact(2, QBase::q_pow(1)) == QScalar(1) + q_pow(1));
    const QScalar expect = (QScalar(1) + q_pow(1)) * (QScalar(1) + q_pow(1) + q_pow(2));
    CHECK(qfact(3, QBase::q_pow(1)) == expect);
    CHECK(qdfact_even(0, QBase::q_pow(-2)) == QScalar(1));
    const QScalar dd = qnum(2, QBase::q_pow(-2)) * qnum(4, QBase::q_pow(-2));
    CHECK(qdfact_even(4, QBase::q_pow(-2)) == dd);
}

TEST_CASE("classical limits at q = 1") {
    CHECK(QScalar::lambda().eval_at(1) == 0);
    CHECK(QScalar::lambda_plus().eval_at(1) == 2);
    CHECK(qnum(4, QBase::q_pow(1)).eval_at(1) == 4);
    for (long n = 0; n <= 10; ++n) {
        Rat fact(1);
        for (long i = 2; i <= n; ++i) fact *= i;
        CHECK(qnum(n, QBase::q_pow(2)).eval_at(1) == n);
        CHECK(qfact(n, QBase::q_pow(1)).eval_at(1) == fact);
    }
}

TEST_CASE("eval is exact away from poles and rejects poles") {
    const QScalar v = (QScalar(1) - q_pow(2)) / (QScalar(1) + q_pow(2));
    CHECK(v.eval_at(Rat(2)) == Rat(1 - 4) / Rat(1 + 4));
    const QScalar pole = QScalar(1) / (QScalar(1) - q_pow(1));
    CHECK_THROWS_AS(pole.eval_at(1), scalar_error);
}

TEST_CASE("field axioms on random values") {
    std::mt19937_64 rng(0x5eed51caULL);
    for (int trial = 0; trial < 200; ++trial) {
        const QScalar a = random_qscalar(rng, 3);
        const QScalar b = random_qscalar(rng, 3);
        const QScalar c = random_qscalar(rng, 3);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) CHECK(a * a.inverse() == QScalar(1));
        CHECK(a - a == QScalar());
    }
}

TEST_CASE("canonical form distinguishes values and identifies equals") {
    // (1-q^2)/(1-q) == 1+q after canonicalization
    const QScalar lhs = (QScalar(1) - q_pow(2)) / (QScalar(1) - q_pow(1));
    CHECK(lhs == QScalar(1) + q_pow(1));
    // lambda * lambda_plus == q^2 - q^-2
    CHECK(QScalar::lambda() * QScalar::lambda_plus() == q_pow(2) - q_pow(-2));
}

TEST_CASE("radical layer: products of square roots collapse") {
    const QScalar lp = QScalar::lambda_plus();
    const RScalar r = RScalar::sqrt_of(lp);
    QScalar plain;
    CHECK((r * r).is_plain(&plain));
    CHECK(plain == lp);
    // sqrt(q) * sqrt(q) = q
    const RScalar sq = RScalar::sqrt_of(q_pow(1));
    CHECK((sq * sq).is_plain(&plain));
    CHECK(plain == q_pow(1));
    // sqrt(q^3 lambda_plus) = q * sqrt(q^-1 lambda_plus) style normalizations agree
    const RScalar a = RScalar::sqrt_of(q_pow(3) * lp);
    const RScalar b = RScalar(q_pow(1)) * RScalar::sqrt_of(q_pow(1) * lp);
    CHECK(a == b);
}

TEST_CASE("complex layer") {
    const CScalar i = CScalar::i();
    CHECK(i * i == CScalar(-1));
    CHECK(i.conj() == -i);
    const CScalar z = CScalar(QScalar::lambda()) + i;
    CHECK(z * z.conj() == CScalar(QScalar::lambda() * QScalar::lambda() + QScalar(1)));
    const CScalar w = z / z;
    CHECK(w == CScalar(1));
}

TEST_CASE("double evaluation tracks exact values") {
    const QScalar v = QScalar::lambda() * q_pow(-3) + QScalar(Rat(5, 7));
    const double got = v.eval_double(1.3);
    const double expect = (1.3 - 1.0 / 1.3) * std::pow(1.3, -3) + 5.0 / 7.0;
    CHECK(got == doctest::Approx(expect).epsilon(1e-14));
}
