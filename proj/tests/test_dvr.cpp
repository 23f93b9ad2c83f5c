#include <doctest.h>

#include "qfact/dvr.hpp"
#include "qfact/error.hpp"
#include "qfact/rational.hpp"
#include "qfact/sampling.hpp"

using namespace qfact;

namespace {

Rational q(long n, long d = 1) { return Rational(mpz_class(n), mpz_class(d)); }

// Exponent of p in a nonzero integer, by repeated division.
int naive_valuation(mpz_class x, long p) {
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

} // namespace

TEST_CASE("rational arithmetic stays in lowest terms") {
    CHECK(q(1, 2) + q(1, 2) == q(1));
    CHECK((q(12) * q(5, 7)).str() == "60/7");
    CHECK((q(1) / q(3)).str() == "1/3");
    CHECK(q(6, -4).str() == "-3/2");
    CHECK(Rational::parse("-10/4") == q(-5, 2));
    CHECK(Rational::parse(" 7 ") == q(7));
    CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
    CHECK_THROWS_AS(Rational::parse("x"), ParseError);
    CHECK_THROWS_AS(q(1) / q(0), DomainError);
}

TEST_CASE("membership in Z_(3)") {
    Dvr D(3);
    CHECK(D.contains(q(60, 7)));
    CHECK_FALSE(D.contains(q(1, 3)));
    CHECK(D.contains(q(0)));
}

TEST_CASE("valuation examples") {
    Dvr D(3);
    CHECK(D.valuation(q(12)) == Valuation(1));
    CHECK(D.valuation(q(5, 7)) == Valuation(0));
    CHECK(D.valuation(q(0)).is_infinite());
    CHECK(D.valuation(q(2, 27)) == Valuation(-3));
}

TEST_CASE("unit examples") {
    Dvr D(3);
    CHECK(D.is_unit(q(5, 7)));
    CHECK_FALSE(D.is_unit(q(3)));
    CHECK_FALSE(D.is_unit(q(0)));
    CHECK_THROWS_AS(D.is_unit(q(1, 3)), DomainError);
    CHECK(D.unit_inverse(q(5, 7)) == q(7, 5));
}

TEST_CASE("residue examples") {
    Dvr D(3);
    CHECK(D.residue(q(7), 1).representative == 1);
    // 1/2 mod 9: the r in [0, 9) with 2r = 1 mod 9, found by search.
    std::int64_t expected = -1;
    for (std::int64_t r = 0; r < 9; ++r)
        if ((2 * r - 1) % 9 == 0) expected = r;
    CHECK(expected == 5);
    CHECK(D.residue(q(1, 2), 2).representative == expected);
    CHECK(D.residue(q(-41, 5), 0).representative == 0);
    CHECK(D.residue(q(-1), 3).representative == 26);
    CHECK_THROWS_AS(D.residue(q(1), -1), DomainError);
    CHECK_THROWS_AS(D.residue(q(1, 3), 1), DomainError);
}

TEST_CASE("prime validation") {
    CHECK_THROWS_WITH_AS(Dvr(4), doctest::Contains("not prime"), DomainError);
    CHECK_THROWS_AS(Dvr(1), DomainError);
    CHECK_NOTHROW(Dvr(2));
    CHECK(is_prime(101));
    CHECK_FALSE(is_prime(91));
}

TEST_CASE("valuation is additive and ultrametric on random samples") {
    for (long p : {2L, 3L, 5L, 7L}) {
        Dvr D(p);
        Rng rng(derive_seed(11, {static_cast<std::uint64_t>(p)}));
        for (int i = 0; i < 500; ++i) {
            Rational x = q(rng.uniform(-5000, 5000), rng.uniform(1, 300));
            Rational y = q(rng.uniform(-5000, 5000), rng.uniform(1, 300));
            if (x.is_zero() || y.is_zero()) continue;
            const int vx = D.valuation(x).value(), vy = D.valuation(y).value();
            CHECK(vx == naive_valuation(x.num(), p) - naive_valuation(x.den(), p));
            CHECK(D.valuation(x * y) == Valuation(vx + vy));
            const Valuation vs = D.valuation(x + y);
            CHECK(vs >= min(Valuation(vx), Valuation(vy)));
            if (vx != vy) CHECK(vs == Valuation(std::min(vx, vy)));
        }
    }
}

TEST_CASE("residue map is a ring homomorphism") {
    for (long p : {2L, 3L, 5L}) {
        Dvr D(p);
        Rng rng(derive_seed(12, {static_cast<std::uint64_t>(p)}));
        for (int m = 0; m <= 4; ++m) {
            const std::int64_t mod = D.modulus(m);
            for (int i = 0; i < 200; ++i) {
                Rational x = random_dvr_element(rng, D, 4);
                Rational y = random_dvr_element(rng, D, 4);
                const auto rx = D.residue(x, m).representative, ry = D.residue(y, m).representative;
                CHECK(rx >= 0);
                CHECK(rx < mod);
                CHECK(D.residue(x + y, m).representative == (rx + ry) % mod);
                CHECK(D.residue(x * y, m).representative == (rx * ry) % mod);
                // x - r is divisible by p^m
                CHECK(D.valuation(x - q(rx)) >= Valuation(m));
            }
        }
    }
}

TEST_CASE("units are exactly the invertible elements") {
    Dvr D(5);
    Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        Rational x = random_dvr_element(rng, D, 2, 10);
        if (x.is_zero()) {
            CHECK_FALSE(D.is_unit(x));
            continue;
        }
        const bool inverse_in_d = D.contains(q(1) / x);
        CHECK(D.is_unit(x) == inverse_in_d);
        if (inverse_in_d) CHECK(x * D.unit_inverse(x) == q(1));
    }
}

TEST_CASE("pi powers and moduli") {
    Dvr D(3);
    CHECK(D.pi_power(2) == q(9));
    CHECK(D.pi_power(-2) == q(1, 9));
    CHECK(D.modulus(4) == 81);
    CHECK_THROWS_AS(D.modulus(60), OverflowError);
}
