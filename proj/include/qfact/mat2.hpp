#pragma once

#include <compare>
#include <iosfwd>
#include <string>

#include "qfact/rational.hpp"

namespace qfact {

/// 2x2 matrix over K. The (1,2) entry is stored raw: for an element of an
/// Eichler order of level n it equals b * p^n.
struct Mat2 {
    Rational a, b_raw, c, d;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    static Mat2 diag(const Rational& x, const Rational& y) { return {x, 0, 0, y}; }

    Rational det() const { return a * d - b_raw * c; }
    Rational trace() const { return a + d; }
    /// Adjugate; the standard involution of M_2(K).
    Mat2 adj() const { return {d, -b_raw, -c, a}; }

    Mat2& operator*=(const Mat2& o);
    Mat2& operator*=(const Rational& s);
    friend Mat2 operator*(const Mat2& x, const Mat2& y);
    friend Mat2 operator*(Mat2 x, const Rational& s) { return x *= s; }
    friend Mat2 operator*(const Rational& s, Mat2 x) { return x *= s; }
    friend Mat2 operator+(const Mat2& x, const Mat2& y) {
        return {x.a + y.a, x.b_raw + y.b_raw, x.c + y.c, x.d + y.d};
    }
    friend Mat2 operator-(const Mat2& x, const Mat2& y) {
        return {x.a - y.a, x.b_raw - y.b_raw, x.c - y.c, x.d - y.d};
    }

    friend bool operator==(const Mat2&, const Mat2&) = default;
    friend std::strong_ordering operator<=>(const Mat2&, const Mat2&) = default;

    /// "[[a,b],[c,d]]" with rational entries.
    std::string str() const;
};

/// x^{-1} * y; throws DomainError when x is singular.
Mat2 left_divide(const Mat2& x, const Mat2& y);
/// y * x^{-1}; throws DomainError when x is singular.
Mat2 right_divide(const Mat2& y, const Mat2& x);

std::ostream& operator<<(std::ostream& os, const Mat2& m);

} // namespace qfact
