#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "qfact/clifford.hpp"
#include "qfact/eichler.hpp"

namespace qfact {

/// Seeded generator. Draws use plain modular reduction of mt19937_64
/// output, so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    std::uint64_t next() { return g_(); }
    /// Uniform in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }
    bool chance(int num, int den) { return uniform(0, den - 1) < num; }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(v.size()) - 1))];
    }

private:
    std::mt19937_64 g_;
};

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

/// Unit of D: +-n/d with n, d coprime to p (d = 1 most of the time).
Rational random_dvr_unit(Rng& rng, const Dvr& dvr, int max_num = 40);
/// p^v times a random unit.
Rational random_with_valuation(Rng& rng, const Dvr& dvr, int v);
/// Element of D with valuation in [0, max_v], or 0 with probability 1/zero_den.
Rational random_dvr_element(Rng& rng, const Dvr& dvr, int max_v, int zero_den = 8);

/// Random unit of the Eichler order, as L * Delta * U.
Mat2 random_eichler_unit(Rng& rng, const EichlerOrder& R);

enum class SampleKind { OffRadical, InRadical, AnyNonUnit };

/// Random cancellative non-unit of R with v(nr) <= max_norm_val of the
/// requested kind, mixed by random units on both sides.
Mat2 random_eichler_element(Rng& rng, const EichlerOrder& R, int max_norm_val, SampleKind kind);

Rational random_small_rational(Rng& rng, int max_num = 9, int max_den = 4);
C0Element<Rational> random_c0_rational(Rng& rng);
C0Element<ModInt> random_c0_mod(Rng& rng, std::int64_t mod);

} // namespace qfact
