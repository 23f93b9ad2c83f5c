#include "qfact/factorize.hpp"

namespace qfact {

ElasticityPrediction elasticity_formulas(int m, std::optional<long> M, long k) {
    if (m != 1 && m != 2) throw DomainError("minimal atom norm valuation must be 1 or 2");
    if (k < 1) throw DomainError("k must be positive");
    if (!M) return {Extended::infinity(), Extended::infinity(), Extended::infinity(), Extended::infinity()};
    if (*M < m) throw DomainError("M must be at least m");
    const Rational D(mpz_class(2 * *M), mpz_class(m));
    const Rational kD = Rational(k) * D;
    mpz_class half_floor;
    mpz_fdiv_q(half_floor.get_mpz_t(), D.num().get_mpz_t(), mpz_class(2 * D.den()).get_mpz_t());
    return {{kD}, {Rational(1) + kD}, {kD + Rational(half_floor)}, {D / Rational(2)}};
}

} // namespace qfact
