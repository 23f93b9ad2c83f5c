#include <doctest.h>

#include <set>

#include "qfact/error.hpp"
#include "qfact/sampling.hpp"
#include "qfact/zpk.hpp"

using namespace qfact;

namespace {

// All elements of the submodule generated by `gens`, by closing {0} under
// adding generators.
std::set<ZVec> brute_span(const ChainRing& ring, int n, const std::vector<ZVec>& gens) {
    std::set<ZVec> seen{ZVec(n, 0)};
    std::vector<ZVec> frontier{ZVec(n, 0)};
    while (!frontier.empty()) {
        std::vector<ZVec> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                ZVec y(n);
                for (int i = 0; i < n; ++i) y[i] = ring.reduce(x[i] + g[i]);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return seen;
}

std::vector<ZVec> all_vectors(const ChainRing& ring, int n) {
    std::vector<ZVec> out{ZVec{}};
    for (int i = 0; i < n; ++i) {
        std::vector<ZVec> grown;
        for (const auto& v : out)
            for (std::int64_t x = 0; x < ring.modulus(); ++x) {
                ZVec w = v;
                w.push_back(x);
                grown.push_back(w);
            }
        out = std::move(grown);
    }
    return out;
}

std::vector<ZVec> random_generators(Rng& rng, const ChainRing& ring, int n, int count) {
    std::vector<ZVec> gens;
    for (int g = 0; g < count; ++g) {
        ZVec v(n);
        // bias towards non-units so that torsion shows up
        const int e = static_cast<int>(rng.uniform(0, ring.exponent()));
        for (auto& x : v) x = ring.reduce(rng.uniform(0, ring.modulus() - 1) * ring.pow_p(e));
        gens.push_back(v);
    }
    return gens;
}

int log_p(std::size_t size, long p) {
    int k = 0;
    while (size > 1) {
        size /= static_cast<std::size_t>(p);
        ++k;
    }
    return k;
}

} // namespace

TEST_CASE("chain ring arithmetic") {
    ChainRing r(3, 2);
    CHECK(r.modulus() == 9);
    CHECK(r.reduce(-1) == 8);
    CHECK(r.valuation(0) == 2);
    CHECK(r.valuation(3) == 1);
    CHECK(r.valuation(6) == 1);
    CHECK(r.valuation(4) == 0);
    CHECK(r.mul(r.inverse(2), 2) == 1);
    CHECK(r.inverse(2) == 5);
    CHECK_THROWS_AS(r.inverse(3), DomainError);
    CHECK(ModInt(7, 5) * ModInt(4, 5) == ModInt(3, 5));
    CHECK(-ModInt(2, 5) == ModInt(3, 5));
}

TEST_CASE("span agrees with brute force closure") {
    struct Case {
        long p;
        int k, n;
    };
    for (auto [p, k, n] : {Case{2, 2, 3}, Case{3, 2, 2}, Case{2, 3, 2}, Case{5, 1, 3}, Case{2, 1, 4}}) {
        ChainRing ring(p, k);
        const auto universe = all_vectors(ring, n);
        Rng rng(derive_seed(31, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k),
                                  static_cast<std::uint64_t>(n)}));
        for (int trial = 0; trial < 40; ++trial) {
            const auto gens = random_generators(rng, ring, n, static_cast<int>(rng.uniform(0, 4)));
            const auto S = Submodule::span(ring, n, gens);
            const auto brute = brute_span(ring, n, gens);
            CHECK(S.length() == log_p(brute.size(), p));
            for (const auto& x : universe) CHECK(S.contains(x) == (brute.count(x) == 1));

            // Canonical: a shuffled generating set with extra combinations
            // gives identical rows.
            auto other = gens;
            std::reverse(other.begin(), other.end());
            if (!gens.empty()) {
                ZVec combo(n, 0);
                for (const auto& g : gens) {
                    const auto c = rng.uniform(0, ring.modulus() - 1);
                    for (int i = 0; i < n; ++i) combo[i] = ring.reduce(combo[i] + c * g[i]);
                }
                other.push_back(combo);
            }
            const auto T = Submodule::span(ring, n, other);
            CHECK(T == S);
            CHECK(T.contains(S));
            CHECK(S.contains(T));
        }
    }
}

TEST_CASE("submodule inclusion") {
    ChainRing ring(2, 2);
    const auto full = Submodule::span(ring, 2, {{1, 0}, {0, 1}});
    const auto half = Submodule::span(ring, 2, {{2, 0}, {0, 1}});
    const auto zero = Submodule::span(ring, 2, {});
    CHECK(full.contains(half));
    CHECK_FALSE(half.contains(full));
    CHECK(half.contains(zero));
    CHECK(zero.is_zero());
    CHECK(full.length() == 4);
    CHECK(half.length() == 3);
    // (2, 2) generates a module of order 2
    CHECK(Submodule::span(ring, 2, {{2, 2}}).length() == 1);
}

TEST_CASE("kernel agrees with brute force") {
    struct Case {
        long p;
        int k, rows, cols;
    };
    for (auto [p, k, rows, cols] : {Case{2, 2, 2, 3}, Case{3, 2, 2, 2}, Case{2, 3, 3, 3}, Case{3, 1, 1, 3}}) {
        ChainRing ring(p, k);
        Rng rng(derive_seed(32, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k)}));
        const auto universe = all_vectors(ring, cols);
        for (int trial = 0; trial < 25; ++trial) {
            const auto M = random_generators(rng, ring, cols, rows);
            const auto K = Submodule::span(ring, cols, kernel(ring, M, cols));
            for (const auto& x : universe) {
                bool zero = true;
                for (const auto& row : M) {
                    std::int64_t s = 0;
                    for (int i = 0; i < cols; ++i) s = ring.reduce(s + ring.mul(row[i], x[i]));
                    zero = zero && s == 0;
                }
                CHECK(K.contains(x) == zero);
            }
        }
    }
}
