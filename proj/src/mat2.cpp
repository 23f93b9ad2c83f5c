#include "qfact/mat2.hpp"

#include <ostream>

#include "qfact/error.hpp"

namespace qfact {

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b_raw * y.c, x.a * y.b_raw + x.b_raw * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b_raw + x.d * y.d};
}

Mat2& Mat2::operator*=(const Mat2& o) { return *this = *this * o; }

Mat2& Mat2::operator*=(const Rational& s) {
    a *= s;
    b_raw *= s;
    c *= s;
    d *= s;
    return *this;
}

Mat2 left_divide(const Mat2& x, const Mat2& y) {
    Rational n = x.det();
    if (n.is_zero()) throw DomainError("division by a singular matrix");
    return (x.adj() * y) * (Rational(1) / n);
}

Mat2 right_divide(const Mat2& y, const Mat2& x) {
    Rational n = x.det();
    if (n.is_zero()) throw DomainError("division by a singular matrix");
    return (y * x.adj()) * (Rational(1) / n);
}

std::string Mat2::str() const {
    return "[[" + a.str() + "," + b_raw.str() + "],[" + c.str() + "," + d.str() + "]]";
}

std::ostream& operator<<(std::ostream& os, const Mat2& m) { return os << m.str(); }

} // namespace qfact
