#include <doctest.h>

#include <map>
#include <set>

#include "qfact/eichler.hpp"
#include "qfact/error.hpp"
#include "qfact/sampling.hpp"

using namespace qfact;

namespace {

Rational q(long n, long d = 1) { return Rational(mpz_class(n), mpz_class(d)); }
Mat2 M(long a, long b, long c, long d) { return {q(a), q(b), q(c), q(d)}; }

const EichlerOrder R32(Dvr(3), 2);

int count_class(const std::vector<AtomEntry>& atoms, AtomClass cls) {
    int n = 0;
    for (const auto& e : atoms) n += e.tag.cls == cls;
    return n;
}

} // namespace

TEST_CASE("membership in the level-2 order at p = 3") {
    CHECK(R32.contains(M(1, 9, 1, 1)));
    CHECK_FALSE(R32.contains(M(1, 3, 1, 1)));
    CHECK_FALSE(R32.contains({q(1, 3), 0, 0, 1}));
    CHECK(R32.b(M(1, 9, 1, 1)) == q(1));
    CHECK(R32.corner_valuation(M(1, 9, 1, 1), 1, 2) == Valuation(2));
}

TEST_CASE("norm, trace and adjugate") {
    auto r = EichlerOrder::nr_tr_adj(M(3, 9, 1, 6));
    CHECK(r.nr == q(9));
    CHECK(r.tr == q(9));
    CHECK(r.adj == M(6, -9, -1, 3));
    auto id = EichlerOrder::nr_tr_adj(Mat2::identity());
    CHECK(id.nr == q(1));
    CHECK(id.tr == q(2));
    CHECK(id.adj == Mat2::identity());
    CHECK(EichlerOrder::nr_tr_adj(M(3, 9, 3, 18)).nr == q(27));
    const Mat2 A{q(2, 5), q(-9), q(7), q(4, 11)};
    const auto t = EichlerOrder::nr_tr_adj(A);
    CHECK(A * t.adj == Mat2::diag(t.nr, t.nr));
}

TEST_CASE("units, cancellative elements and the radical") {
    CHECK(R32.is_unit(Mat2::identity()));
    CHECK(R32.is_unit(M(2, 9, 1, 1)));
    CHECK_FALSE(R32.is_unit(M(3, 0, 0, 1)));
    CHECK_THROWS_AS(R32.is_unit(M(1, 3, 1, 1)), DomainError);
    CHECK_FALSE(R32.is_cancellative(M(3, 9, 1, 3)));
    CHECK(R32.is_cancellative(M(3, 9, 1, 6)));
    CHECK_FALSE(R32.is_cancellative(M(0, 0, 0, 0)));
    CHECK(R32.in_jacobson(M(3, 9, 1, 6)));
    CHECK_FALSE(R32.in_jacobson(M(1, 9, 1, 18)));
    CHECK(R32.in_jacobson(M(3, 0, 0, 3)));
}

TEST_CASE("unit test agrees with the norm criterion") {
    Rng rng(21);
    for (int i = 0; i < 300; ++i) {
        const Mat2 A = random_eichler_element(rng, R32, 3, SampleKind::AnyNonUnit);
        const Mat2 E = random_eichler_unit(rng, R32);
        CHECK(R32.is_unit(E));
        CHECK(R32.norm_valuation(E) == Valuation(0));
        CHECK_FALSE(R32.is_unit(A));
        CHECK(R32.norm_valuation(A) > Valuation(0));
    }
}

TEST_CASE("atom criterion examples") {
    CHECK(R32.is_atom(M(3, 0, 0, 1)));
    CHECK(R32.is_atom(M(3, 9, 1, 6)));
    CHECK_FALSE(R32.is_atom(M(3, 0, 0, 3)));
    CHECK_THROWS_AS(R32.is_atom(Mat2::identity()), DomainError);
    CHECK_THROWS_AS(R32.is_atom(M(3, 9, 1, 3)), DomainError);
    CHECK_THROWS_AS(R32.is_atom(M(1, 3, 1, 1)), DomainError);
}

TEST_CASE("canonical right associates of the documented examples") {
    auto c1 = R32.canonical_right_associate(M(3, 0, 0, 1));
    CHECK(c1.tag.cls == AtomClass::I_upper);
    CHECK(c1.tag.lambda == 0);
    CHECK(c1.unit == Mat2::identity());

    auto c2 = R32.canonical_right_associate(M(6, 0, 0, 1));
    CHECK(c2.tag.cls == AtomClass::I_upper);
    CHECK(c2.tag.lambda == 0);
    CHECK(c2.unit == Mat2::diag(q(2), q(1)));
    CHECK(c2.representative * c2.unit == M(6, 0, 0, 1));

    // v(a') + v(d') = 1 + 1 = n, so this atom lies in the family with
    // m + m' = n; k = v(nr) - n = 0 and delta = (2 - 1/1) mod 3 = 1.
    auto c3 = R32.canonical_right_associate(M(3, 9, 1, 6));
    CHECK(c3.tag.cls == AtomClass::II_8);
    CHECK(c3.tag.m == 1);
    CHECK(c3.tag.m_prime == 1);
    CHECK(c3.tag.epsilon == 1);
    CHECK(c3.tag.delta == 1);
    CHECK(c3.tag.k == 0);
    CHECK(c3.representative == M(3, 9, 1, 6));
    CHECK(c3.representative * c3.unit == M(3, 9, 1, 6));
}

TEST_CASE("atom enumeration counts") {
    auto a31 = R32.enumerate_atoms(1);
    CHECK(a31.size() == 6);
    CHECK(count_class(a31, AtomClass::I_upper) == 3);
    CHECK(count_class(a31, AtomClass::I_lower) == 3);
    CHECK(EichlerOrder(Dvr(2), 2).enumerate_atoms(1).size() == 4);

    // Level 2, p = 3, v(nr) <= 2. Counted by hand from the parameter ranges:
    // class 3 needs m + m' < 2 (impossible); class 4 needs m, m' < 2 with
    // m + m' > 2 (impossible); classes 5 and 6 have 2 unit residues mod 3;
    // class 7 is one matrix; class 8 has (m, m', k) = (1, 1, 0) with
    // eps, delta in {1, 2} and eps^-1 + delta a unit, i.e. eps = delta.
    auto a32 = R32.enumerate_atoms(2);
    CHECK(count_class(a32, AtomClass::II_3) == 0);
    CHECK(count_class(a32, AtomClass::II_4) == 0);
    CHECK(count_class(a32, AtomClass::II_5) == 2);
    CHECK(count_class(a32, AtomClass::II_6) == 2);
    CHECK(count_class(a32, AtomClass::II_7) == 1);
    CHECK(count_class(a32, AtomClass::II_8) == 2);
    CHECK(a32.size() == 13);
    CHECK(std::is_sorted(a32.begin(), a32.end(),
                         [](const AtomEntry& x, const AtomEntry& y) { return x.tag < y.tag; }));
}

TEST_CASE("enumerated atoms are canonical, atoms, and have the recorded norm") {
    for (auto [p, n] : std::vector<std::pair<long, int>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}, {5, 4}}) {
        EichlerOrder R(Dvr(p), n);
        for (const auto& e : R.enumerate_atoms(n + 1)) {
            CHECK(R.contains(e.matrix));
            CHECK(R.is_atom(e.matrix));
            CHECK(R.norm_valuation(e.matrix) == Valuation(e.norm_valuation));
            CHECK(R.atom_from_tag(e.tag) == e.matrix);
            const auto c = R.canonical_right_associate(e.matrix);
            CHECK(c.tag == e.tag);
            CHECK(c.unit == Mat2::identity());
        }
    }
}

// Completeness oracle: every atom found by sweeping a box of integer
// matrices is right associated to exactly one table entry, and every table
// entry is reached.
TEST_CASE("atom table is complete on a brute-force box") {
    struct Case {
        long p;
        int n, max_v;
        long box;
    };
    for (auto [p, n, max_v, box] : {Case{2, 2, 3, 8}, Case{3, 2, 2, 9}, Case{2, 3, 3, 8}}) {
        EichlerOrder R(Dvr(p), n);
        const auto table = R.enumerate_atoms(max_v);
        std::set<AtomClassTag> reached;
        const long pn = R.dvr().modulus(n);
        for (long a = 0; a < box; ++a)
            for (long b = 0; b < box / p; ++b)
                for (long c = 0; c < box; ++c)
                    for (long d = 0; d < box; ++d) {
                        const Mat2 A = M(a, b * pn, c, d);
                        if (A.det().is_zero() || R.is_unit(A)) continue;
                        if (R.norm_valuation(A) > Valuation(max_v) || !R.is_atom(A)) continue;
                        int hits = 0;
                        for (const auto& e : table)
                            if (R.right_associated(e.matrix, A)) {
                                ++hits;
                                reached.insert(e.tag);
                            }
                        CHECK(hits == 1);
                        if (hits != 1) FAIL_CHECK(A.str());
                    }
        CHECK(reached.size() == table.size());
    }
}

TEST_CASE("canonical associate is constant on right associate classes") {
    for (auto [p, n] : std::vector<std::pair<long, int>>{{2, 2}, {3, 3}, {5, 2}}) {
        EichlerOrder R(Dvr(p), n);
        const auto table = R.enumerate_atoms(4);
        Rng rng(derive_seed(22, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(n)}));
        for (int i = 0; i < 300; ++i) {
            const Mat2 V = rng.pick(table).matrix;
            const Mat2 U = V * random_eichler_unit(rng, R);
            const auto c = R.canonical_right_associate(U);
            CHECK(c.representative == V);
            CHECK(V * c.unit == U);
            CHECK(R.is_unit(c.unit));
            CHECK(R.canonical_right_associate(c.representative).representative == V);
            // left associates through the involution
            const Mat2 W = random_eichler_unit(rng, R) * V.adj();
            const auto l = R.canonical_left_associate(W);
            CHECK(l.unit * l.representative == W);
            CHECK(R.is_unit(l.unit));
        }
    }
}

TEST_CASE("left divisors of the documented examples") {
    const auto divs = R32.left_divisor_atoms(M(3, 0, 0, 3));
    bool upper = false, lower = false;
    for (const auto& d : divs) {
        if (d.tag.cls == AtomClass::I_upper && d.tag.lambda == 0) {
            upper = true;
            CHECK(d.cofactor == M(1, 0, 0, 3));
        }
        if (d.tag.cls == AtomClass::I_lower && d.tag.lambda == 0) {
            lower = true;
            CHECK(d.cofactor == M(3, 0, 0, 1));
        }
        CHECK(d.atom * d.cofactor == M(3, 0, 0, 3));
    }
    CHECK(upper);
    CHECK(lower);

    // Off the radical each step has exactly one canonical atom divisor.
    Mat2 A = M(1, 9, 1, 18);
    int steps = 0;
    while (!R32.is_unit(A)) {
        const auto step = R32.left_divisor_atoms(A);
        REQUIRE(step.size() == 1);
        A = step[0].cofactor;
        ++steps;
    }
    CHECK(steps == 2);

    // An atom: every cofactor is a unit.
    for (const auto& d : R32.left_divisor_atoms(M(3, 9, 1, 6))) CHECK(R32.is_unit(d.cofactor));
}

TEST_CASE("table divisibility agrees with exact division") {
    for (auto [p, n] : std::vector<std::pair<long, int>>{{2, 3}, {3, 2}, {7, 3}}) {
        EichlerOrder R(Dvr(p), n);
        AtomTable table(R, 4);
        Rng rng(derive_seed(23, {static_cast<std::uint64_t>(p)}));
        for (int i = 0; i < 150; ++i) {
            const Mat2 A = random_eichler_element(rng, R, 4, SampleKind::AnyNonUnit);
            std::vector<std::size_t> exact;
            for (std::size_t k = 0; k < table.atoms().size(); ++k) {
                const auto& e = table.atoms()[k];
                if (Valuation(e.norm_valuation) <= R.norm_valuation(A) &&
                    R.contains(left_divide(e.matrix, A)))
                    exact.push_back(k);
            }
            CHECK(table.dividing_indices(A) == exact);
        }
    }
}

TEST_CASE("unit decomposition") {
    auto id = R32.unit_decompose(Mat2::identity());
    CHECK(id.lower == Mat2::identity());
    CHECK(id.diagonal == Mat2::identity());
    CHECK(id.upper == Mat2::identity());

    auto e = R32.unit_decompose(M(2, 9, 1, 1));
    CHECK(e.lower == Mat2{1, 0, q(1, 2), 1});
    CHECK(e.diagonal == Mat2::diag(q(2), q(-7, 2)));
    CHECK(e.upper == Mat2{1, q(9, 2), 0, 1});

    auto l = R32.unit_decompose(M(1, 0, 5, 1));
    CHECK(l.lower == M(1, 0, 5, 1));
    CHECK(l.diagonal == Mat2::identity());
    CHECK(l.upper == Mat2::identity());

    CHECK_THROWS_AS(R32.unit_decompose(M(3, 0, 0, 1)), DomainError);

    Rng rng(24);
    for (int i = 0; i < 200; ++i) {
        const Mat2 E = random_eichler_unit(rng, R32) * random_eichler_unit(rng, R32);
        const auto d = R32.unit_decompose(E);
        CHECK(d.lower * d.diagonal * d.upper == E);
        CHECK(d.lower.a == q(1));
        CHECK(d.lower.d == q(1));
        CHECK(d.lower.b_raw.is_zero());
        CHECK(d.upper.c.is_zero());
        CHECK(R32.contains(d.upper));
        CHECK(R32.is_unit(d.diagonal));
    }
}

TEST_CASE("special associates satisfy the valuation chain") {
    const Mat2 chain = M(1, 9, 1, 18);
    REQUIRE(R32.satisfies_special_chain(chain));
    CHECK(R32.special_associate(chain).matrix == chain);

    const auto s = R32.special_associate(M(27, 0, 0, 1));
    CHECK(R32.satisfies_special_chain(s.matrix));
    CHECK(R32.norm_valuation(s.matrix) == Valuation(3));

    for (auto [p, n] : std::vector<std::pair<long, int>>{{2, 2}, {3, 3}, {5, 4}}) {
        EichlerOrder R(Dvr(p), n);
        Rng rng(derive_seed(25, {static_cast<std::uint64_t>(p)}));
        for (int i = 0; i < 200; ++i) {
            const Mat2 A = random_eichler_element(rng, R, 8, SampleKind::AnyNonUnit);
            const auto sa = R.special_associate(A);
            CHECK(R.satisfies_special_chain(sa.matrix));
            CHECK(R.is_unit(sa.left_unit));
            CHECK(R.is_unit(sa.right_unit));
            CHECK(sa.left_unit * A * sa.right_unit == sa.matrix);
            CHECK(R.norm_valuation(sa.matrix) == R.norm_valuation(A));
        }
    }
}

TEST_CASE("corner valuations add up below the level") {
    for (auto [p, n] : std::vector<std::pair<long, int>>{{2, 3}, {3, 4}}) {
        EichlerOrder R(Dvr(p), n);
        Rng rng(derive_seed(26, {static_cast<std::uint64_t>(p)}));
        int tested = 0;
        for (int i = 0; i < 400; ++i) {
            const int parts = static_cast<int>(rng.uniform(2, 3));
            std::vector<Mat2> f;
            for (int k = 0; k < parts; ++k) f.push_back(random_eichler_element(rng, R, 3, SampleKind::AnyNonUnit));
            Mat2 A = Mat2::identity();
            for (const auto& x : f) A = A * x;
            for (int corner : {1, 2}) {
                const Valuation v = R.corner_valuation(A, corner, corner);
                if (!(v < Valuation(n))) continue;
                int sum = 0;
                for (const auto& x : f) sum += R.corner_valuation(x, corner, corner).value();
                CHECK(v == Valuation(sum));
                ++tested;
                // stable under associates
                const Mat2 B = random_eichler_unit(rng, R) * A * random_eichler_unit(rng, R);
                CHECK(R.corner_valuation(B, corner, corner) == v);
            }
        }
        CHECK(tested > 50);
    }
}

TEST_CASE("long atoms have the prescribed determinant") {
    for (auto [p, n] : std::vector<std::pair<long, int>>{{2, 2}, {3, 2}, {3, 3}, {5, 3}}) {
        EichlerOrder R(Dvr(p), n);
        Rng rng(derive_seed(27, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(n)}));
        for (int s = 1; s <= 8; ++s)
            for (int i = 0; i < 5; ++i) {
                const Rational a = random_with_valuation(rng, R.dvr(), s);
                const Mat2 U = R.long_atom(a);
                CHECK(R.contains(U));
                CHECK(U.det() == a);
                CHECK(R.is_atom(U));
            }
        CHECK_THROWS_AS(R.long_atom(q(1)), DomainError);
    }
}

TEST_CASE("hereditary levels are refused by factorization routines") {
    for (int n : {0, 1}) {
        EichlerOrder R(Dvr(3), n);
        CHECK(R.is_hereditary());
        CHECK(R.contains(M(1, 0, 0, 1)));
        CHECK_THROWS_WITH_AS(R.require_non_hereditary(), doctest::Contains("hereditary"), HereditaryLevelError);
        CHECK_THROWS_AS(R.enumerate_atoms(2), HereditaryLevelError);
    }
}
