#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qfact {

/// Element of Z/m for m < 2^62.
struct ModInt {
    std::int64_t v = 0;
    std::int64_t mod = 1;

    ModInt() = default;
    ModInt(std::int64_t value, std::int64_t modulus);

    bool is_zero() const { return v == 0; }

    friend ModInt operator+(ModInt x, ModInt y);
    friend ModInt operator-(ModInt x, ModInt y);
    friend ModInt operator*(ModInt x, ModInt y);
    friend ModInt operator-(ModInt x) { return ModInt(x.mod - x.v, x.mod); }
    ModInt& operator+=(ModInt o) { return *this = *this + o; }
    ModInt& operator-=(ModInt o) { return *this = *this - o; }
    ModInt& operator*=(ModInt o) { return *this = *this * o; }

    friend bool operator==(const ModInt&, const ModInt&) = default;
};

std::ostream& operator<<(std::ostream& os, const ModInt& x);

/// The chain ring Z/p^k.
class ChainRing {
public:
    ChainRing(long p, int k);

    long prime() const { return p_; }
    int exponent() const { return k_; }
    std::int64_t modulus() const { return mod_; }

    std::int64_t reduce(std::int64_t x) const;
    /// Largest e <= k with p^e | x (k for x = 0).
    int valuation(std::int64_t x) const;
    std::int64_t pow_p(int e) const;
    /// Inverse of a unit of Z/p^k.
    std::int64_t inverse(std::int64_t u) const;
    std::int64_t mul(std::int64_t x, std::int64_t y) const;

    friend bool operator==(const ChainRing&, const ChainRing&) = default;

private:
    long p_;
    int k_;
    std::int64_t mod_;
};

using ZVec = std::vector<std::int64_t>;

/// A submodule of (Z/p^k)^n stored as its Howell form: rows in echelon
/// shape with pivots p^e, entries above a pivot reduced into [0, p^e), and
/// the Howell property (every element vanishing in the first j columns is a
/// combination of the rows whose pivot lies beyond column j). The form is
/// canonical, so equality of modules is equality of row lists.
class Submodule {
public:
    Submodule(ChainRing ring, int n) : ring_(ring), n_(n) {}

    static Submodule span(ChainRing ring, int n, const std::vector<ZVec>& generators);

    const ChainRing& ring() const { return ring_; }
    int dimension() const { return n_; }
    const std::vector<ZVec>& rows() const { return rows_; }
    bool is_zero() const { return rows_.empty(); }

    bool contains(const ZVec& x) const;
    bool contains(const Submodule& other) const;
    /// log_p of the number of elements.
    int length() const;

    friend bool operator==(const Submodule& x, const Submodule& y) {
        return x.ring_ == y.ring_ && x.n_ == y.n_ && x.rows_ == y.rows_;
    }

private:
    ChainRing ring_;
    int n_;
    std::vector<ZVec> rows_;
};

/// Generators of {x in (Z/p^k)^cols : M x = 0}, M given by its rows.
std::vector<ZVec> kernel(const ChainRing& ring, const std::vector<ZVec>& matrix, int cols);

} // namespace qfact
