#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

#include "qfact/rational.hpp"

// The discrete valuation ring D = Z localized at a prime p, with quotient
// field K = Q and uniformizer p.
//
// Working over Z_(p) rather than the p-adic completion loses nothing for the
// invariants computed here: the inclusion into the completion is a transfer
// homomorphism that preserves factorizations, sets of lengths and catenary
// degrees.

namespace qfact {

/// Value of a valuation: an integer or +infinity (the valuation of 0).
class Valuation {
public:
    constexpr Valuation() : v_(kInf) {}
    constexpr Valuation(int v) : v_(v) {} // NOLINT(implicit)
    static constexpr Valuation infinity() { return Valuation(); }

    constexpr bool is_infinite() const { return v_ == kInf; }
    /// Finite value; callers check is_infinite() first.
    constexpr int value() const { return v_; }

    friend constexpr Valuation operator+(Valuation a, Valuation b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return Valuation(a.v_ + b.v_);
    }
    friend constexpr bool operator==(Valuation, Valuation) = default;
    friend constexpr auto operator<=>(Valuation a, Valuation b) { return a.v_ <=> b.v_; }

    std::string str() const { return is_infinite() ? "inf" : std::to_string(v_); }

private:
    static constexpr int kInf = std::numeric_limits<int>::max();
    int v_;
};

inline Valuation min(Valuation a, Valuation b) { return a < b ? a : b; }

/// Representative of x mod p^m in the fixed system R(m) = {0, ..., p^m - 1}.
struct ResidueClass {
    int modulus_exponent = 0;
    std::int64_t representative = 0;

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

bool is_prime(long n);

/// D = Z_(p). Membership, valuations and residues of rationals.
class Dvr {
public:
    /// Throws DomainError("not prime") unless p is a prime >= 2.
    explicit Dvr(long p);

    long prime() const { return p_; }

    Valuation valuation(const Rational& x) const;
    Valuation valuation(const mpz_class& x) const;

    /// x lies in D, i.e. p does not divide the reduced denominator.
    bool contains(const Rational& x) const;

    /// x in D^x. Throws DomainError for x outside D.
    bool is_unit(const Rational& x) const;

    /// Inverse in D of a unit of D.
    Rational unit_inverse(const Rational& x) const;

    /// The residue of x in R(m). Requires x in D and p^m < 2^62.
    ResidueClass residue(const Rational& x, int m) const;

    /// Residue as a plain integer in [0, modulus).
    std::int64_t residue_mod(const Rational& x, std::int64_t modulus) const;

    /// p^e for e >= 0, p^e as a rational for negative e.
    Rational pi_power(int e) const;

    /// p^m as int64; throws OverflowError when it does not fit in 62 bits.
    std::int64_t modulus(int m) const;

    friend bool operator==(const Dvr&, const Dvr&) = default;

private:
    long p_;
};

} // namespace qfact
