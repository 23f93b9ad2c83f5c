#include "qfact/sampling.hpp"

#include "qfact/error.hpp"

namespace qfact {

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    for (auto p : parts) h = mix(h ^ mix(p));
    return h;
}

Rational random_dvr_unit(Rng& rng, const Dvr& dvr, int max_num) {
    const long p = dvr.prime();
    long n = 0, d = 1;
    do n = rng.uniform(1, max_num); while (n % p == 0);
    if (rng.chance(1, 4))
        do d = rng.uniform(2, 9); while (d % p == 0);
    if (rng.chance(1, 2)) n = -n;
    return Rational(mpz_class(n), mpz_class(d));
}

Rational random_with_valuation(Rng& rng, const Dvr& dvr, int v) {
    return dvr.pi_power(v) * random_dvr_unit(rng, dvr);
}

Rational random_dvr_element(Rng& rng, const Dvr& dvr, int max_v, int zero_den) {
    if (rng.chance(1, zero_den)) return Rational(0);
    return random_with_valuation(rng, dvr, static_cast<int>(rng.uniform(0, max_v)));
}

Mat2 random_eichler_unit(Rng& rng, const EichlerOrder& R) {
    const Dvr& dvr = R.dvr();
    Mat2 L{1, 0, random_dvr_element(rng, dvr, 2, 3), 1};
    Mat2 Delta = Mat2::diag(random_dvr_unit(rng, dvr, 12), random_dvr_unit(rng, dvr, 12));
    Mat2 U{1, random_dvr_element(rng, dvr, 2, 3) * dvr.pi_power(R.level()), 0, 1};
    return L * Delta * U;
}

Mat2 random_eichler_element(Rng& rng, const EichlerOrder& R, int max_norm_val, SampleKind kind) {
    const Dvr& dvr = R.dvr();
    const Rational pn = dvr.pi_power(R.level());
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Mat2 A;
        const int top = max_norm_val;
        switch (kind) {
        case SampleKind::OffRadical:
            A.a = random_with_valuation(rng, dvr, 0);
            A.d = random_dvr_element(rng, dvr, top, 6);
            if (rng.chance(1, 2)) std::swap(A.a, A.d);
            break;
        case SampleKind::InRadical:
            A.a = random_dvr_element(rng, dvr, top, 6);
            A.d = random_dvr_element(rng, dvr, top, 6);
            if (!A.a.is_zero() && dvr.valuation(A.a) == Valuation(0)) A.a *= Rational(dvr.prime());
            if (!A.d.is_zero() && dvr.valuation(A.d) == Valuation(0)) A.d *= Rational(dvr.prime());
            break;
        case SampleKind::AnyNonUnit:
            A.a = random_dvr_element(rng, dvr, top, 6);
            A.d = random_dvr_element(rng, dvr, top, 6);
            break;
        }
        A.b_raw = random_dvr_element(rng, dvr, 2, 5) * pn;
        A.c = random_dvr_element(rng, dvr, top, 5);
        if (rng.chance(2, 3)) A = random_eichler_unit(rng, R) * A;
        if (rng.chance(2, 3)) A = A * random_eichler_unit(rng, R);
        if (A.det().is_zero() || R.is_unit(A)) continue;
        if (R.norm_valuation(A) > Valuation(max_norm_val)) continue;
        const bool in_j = R.in_jacobson(A);
        if (kind == SampleKind::OffRadical && in_j) continue;
        if (kind == SampleKind::InRadical && !in_j) continue;
        return A;
    }
    throw std::logic_error("element sampler failed to produce a sample");
}

Rational random_small_rational(Rng& rng, int max_num, int max_den) {
    return Rational(mpz_class(rng.uniform(-max_num, max_num)), mpz_class(rng.uniform(1, max_den)));
}

C0Element<Rational> random_c0_rational(Rng& rng) {
    C0Element<Rational> x;
    for (auto& c : x.x) c = random_small_rational(rng);
    return x;
}

C0Element<ModInt> random_c0_mod(Rng& rng, std::int64_t mod) {
    C0Element<ModInt> x;
    for (auto& c : x.x) c = ModInt(rng.uniform(0, mod - 1), mod);
    return x;
}

} // namespace qfact
