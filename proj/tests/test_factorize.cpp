#include <doctest.h>

#include <set>

#include "qfact/eichler_monoid.hpp"
#include "qfact/error.hpp"
#include "qfact/factorize.hpp"
#include "qfact/sampling.hpp"

using namespace qfact;

namespace {

Rational q(long n, long d = 1) { return Rational(mpz_class(n), mpz_class(d)); }
Mat2 M(long a, long b, long c, long d) { return {q(a), q(b), q(c), q(d)}; }

// [[p, p^n], [p, p^2 + p^n]]
Mat2 witness(long p, int n) {
    long pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    return M(p, pn, p, p * p + pn);
}

using Seq = std::vector<Mat2>;

// Every way of peeling canonical atoms off the left of x until the rest is
// an atom, by trial division against the whole table.
void naive_factorizations(const EichlerMonoid& mon, const Mat2& x, Seq& prefix, std::set<Seq>& out) {
    const auto& R = mon.order();
    if (R.is_atom(x)) {
        Seq s = prefix;
        s.push_back(x);
        out.insert(s);
    }
    for (std::size_t i = 0; i < mon.atom_count(); ++i) {
        const Mat2& u = mon.atom(i);
        const Mat2 rest = left_divide(u, x);
        if (!R.contains(rest) || R.is_unit(rest)) continue;
        prefix.push_back(u);
        naive_factorizations(mon, rest, prefix, out);
        prefix.pop_back();
    }
}

// Rigid distance from partial products: a common prefix of i atoms means
// the products of the first t atoms agree up to a right unit for all t <= i,
// and dually for suffixes.
int distance_by_definition(const EichlerMonoid& mon, const RigidFactorization<Mat2>& z1,
                           const RigidFactorization<Mat2>& z2) {
    const auto& R = mon.order();
    auto prefix = [&](const RigidFactorization<Mat2>& z, std::size_t i) {
        Mat2 x = z.leading_unit;
        for (std::size_t t = 0; t < i; ++t) x = x * z.atoms[t];
        return x;
    };
    auto suffix = [&](const RigidFactorization<Mat2>& z, std::size_t j) {
        Mat2 x = Mat2::identity();
        for (std::size_t t = z.length() - j; t < z.length(); ++t) x = x * z.atoms[t];
        return x;
    };
    const std::size_t k1 = z1.length(), k2 = z2.length();
    const std::size_t lo = std::min(k1, k2), hi = std::max(k1, k2);
    bool all_equal = k1 == k2;
    for (std::size_t i = 0; all_equal && i <= k1; ++i) {
        const Mat2 e = left_divide(prefix(z1, i), prefix(z2, i));
        all_equal = R.contains(e) && R.is_unit(e);
    }
    if (all_equal) return 0;
    // Longest i such that every partial product of length <= i matches.
    std::size_t i = 0;
    while (i + 1 < lo) {
        const Mat2 e = left_divide(prefix(z1, i + 1), prefix(z2, i + 1));
        if (!R.contains(e) || !R.is_unit(e)) break;
        ++i;
    }
    std::size_t j = 0;
    while (j + 1 < lo) {
        const Mat2 f = right_divide(suffix(z1, j + 1), suffix(z2, j + 1));
        if (!R.contains(f) || !R.is_unit(f)) break;
        ++j;
    }
    // Prefix and suffix may not both claim the whole shorter factorization.
    return static_cast<int>(std::max<std::size_t>(hi - std::min(i + j, lo - 1), 1));
}

struct Level {
    long p;
    int n;
};

} // namespace

TEST_CASE("factorizations of the minimal delta witness") {
    for (auto [p, n] : {Level{2, 2}, Level{3, 2}, Level{2, 3}}) {
        const EichlerOrder R(Dvr(p), n);
        const Mat2 W = witness(p, n);
        const int v = R.norm_valuation(W).value();
        EichlerMonoid mon(R, v);
        CHECK(length_set(mon, W) == std::vector<int>{2, 3});
        const auto prof = length_profile(mon, W);
        CHECK(prof.lengths == std::vector<int>{2, 3});
        CHECK(prof.delta == std::vector<int>{1});
        CHECK(prof.catenary >= 3);
        CHECK(prof.catenary <= n + 6);
        CHECK(prof.elasticity == Extended{q(3, 2)});
    }
}

TEST_CASE("unique factorization off the radical and trivial cases") {
    const EichlerOrder R(Dvr(3), 2);
    EichlerMonoid mon(R, 4);
    const Mat2 A = M(1, 9, 1, 18);
    const auto s = enumerate_factorizations(mon, A);
    REQUIRE(s.size() == 1);
    CHECK(s.length(0) == 2);
    CHECK(product(mon, materialize(mon, s, 0)) == A);
    CHECK(catenary_degree(mon, s) == 0);

    const Mat2 U = M(2, 9, 1, 1);
    const auto su = enumerate_factorizations(mon, U);
    REQUIRE(su.size() == 1);
    CHECK(su.sequences[0].empty());
    CHECK(su.leading_unit == U);
    CHECK(length_set(mon, U) == std::vector<int>{0});
    const auto pu = profile_of(mon, su);
    CHECK(pu.catenary == 0);
    CHECK(pu.lengths == std::vector<int>{0});

    CHECK_THROWS_AS(enumerate_factorizations(mon, M(3, 9, 1, 3)), DomainError);
    CHECK_THROWS_AS(length_mask(mon, M(0, 0, 0, 0)), DomainError);
}

TEST_CASE("powers of the uniformizer") {
    for (auto [p, n] : {Level{2, 2}, Level{3, 2}}) {
        const EichlerOrder R(Dvr(p), n);
        EichlerMonoid mon(R, 8);
        const Mat2 pi = M(p, 0, 0, p);
        const auto prof = length_profile(mon, pi);
        CHECK(prof.lengths == std::vector<int>{2});
        CHECK(prof.delta.empty());
        CHECK(prof.elasticity == Extended{q(1)});
        for (int m = 2; m <= 4; ++m) {
            Mat2 x = Mat2::identity();
            for (int t = 0; t < m; ++t) x = x * pi;
            const auto L = length_set(mon, x);
            CHECK(std::find(L.begin(), L.end(), 2) != L.end());
            CHECK(std::find(L.begin(), L.end(), 2 * m) != L.end());
            CHECK(L.back() == 2 * m);
        }
    }
}

TEST_CASE("elasticity formulas") {
    auto e = elasticity_formulas(1, 3, 2);
    CHECK(e.rho_even == Extended{q(12)});
    CHECK(e.rho_odd_low == Extended{q(13)});
    CHECK(e.rho_odd_high == Extended{q(15)});
    CHECK(e.rho == Extended{q(3)});

    auto inf = elasticity_formulas(2, std::nullopt, 3);
    CHECK(inf.rho.is_infinite());
    CHECK(inf.rho_even.is_infinite());
    CHECK(inf.rho_odd_low.is_infinite());
    CHECK(inf.rho.str() == "inf");

    auto flat = elasticity_formulas(2, 2, 4);
    CHECK(flat.rho_even == Extended{q(8)});
    CHECK(flat.rho == Extended{q(1)});
    CHECK(flat.rho_odd_low == Extended{q(9)});
    CHECK(flat.rho_odd_high == Extended{q(9)});

    CHECK_THROWS_AS(elasticity_formulas(3, 5, 1), DomainError);
    CHECK_THROWS_AS(elasticity_formulas(2, 1, 1), DomainError);
    CHECK_THROWS_AS(elasticity_formulas(1, 3, 0), DomainError);
}

TEST_CASE("atom norm valuation scan") {
    const EichlerOrder R(Dvr(3), 2);
    CHECK(scan_atom_norm_valuations(EichlerMonoid(R, 5)) == std::pair<int, int>{1, 5});
    CHECK(scan_atom_norm_valuations(EichlerMonoid(R, 1)) == std::pair<int, int>{1, 1});
    CHECK_THROWS_AS(EichlerMonoid(EichlerOrder(Dvr(3), 1), 3), DomainError);
}

TEST_CASE("enumeration equals naive trial division") {
    Rng rng(51);
    for (auto [p, n] : {Level{2, 2}, Level{3, 2}, Level{2, 3}}) {
        const EichlerOrder R(Dvr(p), n);
        EichlerMonoid mon(R, 5);
        for (int i = 0; i < 25; ++i) {
            const auto kind = i % 2 ? SampleKind::InRadical : SampleKind::AnyNonUnit;
            const Mat2 A = random_eichler_element(rng, R, 5, kind);
            CAPTURE(A.str());
            const auto s = enumerate_factorizations(mon, A);
            std::set<Seq> fast;
            for (std::size_t t = 0; t < s.size(); ++t) {
                const auto z = materialize(mon, s, t);
                CHECK(product(mon, z) == A);
                for (const auto& u : z.atoms) CHECK(R.is_atom(u));
                fast.insert(z.atoms);
            }
            CHECK(fast.size() == s.size());
            std::set<Seq> naive;
            Seq prefix;
            naive_factorizations(mon, A, prefix, naive);
            CHECK(fast == naive);

            CHECK(count_factorizations(mon, A) == s.size());
            std::uint64_t mask = 0;
            for (std::size_t t = 0; t < s.size(); ++t) mask |= std::uint64_t{1} << s.length(t);
            CHECK(length_mask(mon, A) == mask);
        }
    }
}

TEST_CASE("inserting units does not change the canonical form") {
    Rng rng(52);
    const EichlerOrder R(Dvr(2), 3);
    EichlerMonoid mon(R, 6);
    for (int i = 0; i < 30; ++i) {
        const Mat2 A = random_eichler_element(rng, R, 6, SampleKind::InRadical);
        const auto s = enumerate_factorizations(mon, A);
        const auto z = materialize(mon, s, rng.uniform(0, static_cast<std::int64_t>(s.size()) - 1));
        RigidFactorization<Mat2> shaken{z.leading_unit, {}};
        Mat2 carry = Mat2::identity();
        for (std::size_t t = 0; t < z.length(); ++t) {
            const Mat2 e = random_eichler_unit(rng, R);
            const Mat2 e_inv = left_divide(e, Mat2::identity());
            if (t + 1 < z.length())
                shaken.atoms.push_back(carry * z.atoms[t] * e);
            else
                shaken.atoms.push_back(carry * z.atoms[t]);
            carry = e_inv;
        }
        CHECK(product(mon, shaken) == A);
        CHECK(canonicalize(mon, shaken) == canonicalize(mon, z));
        CHECK(rigid_distance(mon, shaken, z) == 0);
        CHECK(distance_by_definition(mon, shaken, z) == 0);
    }
}

TEST_CASE("distance table agrees with the definition") {
    Rng rng(53);
    for (auto [p, n] : {Level{2, 2}, Level{3, 2}, Level{2, 3}}) {
        const EichlerOrder R(Dvr(p), n);
        EichlerMonoid mon(R, 6);
        for (int i = 0; i < 8; ++i) {
            const Mat2 A = random_eichler_element(rng, R, 5, SampleKind::InRadical);
            const auto s = enumerate_factorizations(mon, A);
            const auto table = build_distance_table(mon, s);
            const std::size_t cap = std::min<std::size_t>(s.size(), 25);
            for (std::size_t x = 0; x < cap; ++x)
                for (std::size_t y = 0; y < cap; ++y) {
                    const auto zx = materialize(mon, s, x), zy = materialize(mon, s, y);
                    const int d = table.distance(x, y);
                    CHECK(d == rigid_distance(mon, zx, zy));
                    CHECK(d == distance_by_definition(mon, zx, zy));
                    CHECK(d == table.distance(y, x));
                    CHECK((d == 0) == (x == y));
                }
        }
    }
}

TEST_CASE("catenary degree: threshold sweep equals minimum spanning tree") {
    Rng rng(54);
    const EichlerOrder R(Dvr(2), 2);
    EichlerMonoid mon(R, 7);
    for (int i = 0; i < 20; ++i) {
        const Mat2 A = random_eichler_element(rng, R, 7, SampleKind::InRadical);
        const auto table = build_distance_table(mon, enumerate_factorizations(mon, A));
        CHECK(catenary_degree(table) == catenary_degree(table, 0));
    }
}

TEST_CASE("enumeration limits and distance preconditions") {
    const EichlerOrder R(Dvr(2), 2);
    EichlerMonoid mon(R, 8);
    const Mat2 x = M(16, 0, 0, 16);
    CHECK(count_factorizations(mon, x) > 2);
    CHECK_THROWS_AS(enumerate_factorizations(mon, x, 2), OverflowError);

    const auto a = materialize(mon, enumerate_factorizations(mon, M(2, 0, 0, 2)), 0);
    const auto b = materialize(mon, enumerate_factorizations(mon, witness(2, 2)), 0);
    CHECK_THROWS_AS(rigid_distance(mon, a, b), DomainError);
}
