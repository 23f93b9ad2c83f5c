#include "qfact/rational.hpp"

#include <cctype>
#include <ostream>

#include "qfact/error.hpp"

namespace qfact {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

mpz_class parse_integer(std::string_view s) {
    if (s[0] == '+') s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DomainError("division by zero");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    text = trim(text);
    auto slash = text.find('/');
    std::string_view n = trim(text.substr(0, slash));
    if (!is_integer_literal(n)) throw ParseError("not a rational: '" + std::string(text) + "'");
    if (slash == std::string_view::npos) return Rational(parse_integer(n));
    std::string_view d = trim(text.substr(slash + 1));
    if (!is_integer_literal(d) || d[0] == '-') throw ParseError("not a rational: '" + std::string(text) + "'");
    mpz_class den = parse_integer(d);
    if (den == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    return Rational(parse_integer(n), den);
}

std::string Rational::str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    q_ /= o.q_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

mpz_class ipow(long p, int e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

} // namespace qfact
