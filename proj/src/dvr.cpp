#include "qfact/dvr.hpp"

#include "qfact/error.hpp"

namespace qfact {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Dvr::Dvr(long p) : p_(p) {
    if (!is_prime(p)) throw DomainError("not prime: " + std::to_string(p));
}

Valuation Dvr::valuation(const mpz_class& x) const {
    if (x == 0) return Valuation::infinity();
    mpz_class rest;
    mpz_class pz(p_);
    auto v = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), pz.get_mpz_t());
    return Valuation(static_cast<int>(v));
}

Valuation Dvr::valuation(const Rational& x) const {
    if (x.is_zero()) return Valuation::infinity();
    return Valuation(valuation(x.num()).value() - valuation(x.den()).value());
}

bool Dvr::contains(const Rational& x) const {
    return mpz_divisible_ui_p(x.raw().get_den_mpz_t(), static_cast<unsigned long>(p_)) == 0;
}

bool Dvr::is_unit(const Rational& x) const {
    if (!contains(x)) throw DomainError("not an element of D: " + x.str());
    return !x.is_zero() && valuation(x) == Valuation(0);
}

Rational Dvr::unit_inverse(const Rational& x) const {
    if (!is_unit(x)) throw DomainError("not a unit of D: " + x.str());
    return Rational(1) / x;
}

std::int64_t Dvr::modulus(int m) const {
    if (m < 0) throw DomainError("negative modulus exponent");
    std::int64_t r = 1;
    for (int i = 0; i < m; ++i) {
        if (r > (std::int64_t{1} << 62) / p_) throw OverflowError("p^m exceeds 62 bits");
        r *= p_;
    }
    return r;
}

std::int64_t Dvr::residue_mod(const Rational& x, std::int64_t modulus) const {
    if (!contains(x)) throw DomainError("not an element of D: " + x.str());
    if (modulus == 1) return 0;
    mpz_class mod(static_cast<long>(modulus));
    mpz_class inv;
    mpz_class den = x.den();
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw DomainError("denominator not invertible modulo p^m");
    mpz_class r = x.num() * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
    return r.get_si();
}

ResidueClass Dvr::residue(const Rational& x, int m) const {
    if (m < 0) throw DomainError("negative modulus exponent");
    return ResidueClass{m, residue_mod(x, modulus(m))};
}

Rational Dvr::pi_power(int e) const {
    if (e >= 0) return Rational(ipow(p_, e));
    return Rational(mpz_class(1), ipow(p_, -e));
}

} // namespace qfact
