#pragma once

// Even Clifford algebras C0(M, q) of ternary quadratic forms
//   q(x, y, z) = a x^2 + b y^2 + c z^2 + u yz + v xz + w xy
// on the basis 1, i = e2 e3, j = e3 e1, k = e1 e2, their residue algebras
// over F_p, and the order-theoretic data used to locate nilpotent elements
// and long atoms.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qfact/dvr.hpp"
#include "qfact/rational.hpp"
#include "qfact/zpk.hpp"

namespace qfact {

template <class S>
struct TernaryForm {
    S a, b, c, u, v, w;
    friend bool operator==(const TernaryForm&, const TernaryForm&) = default;
};

using Form = TernaryForm<Rational>;

/// A scalar equal to the integer n, in the same ring as `like`.
inline Rational scalar_like(const Rational&, long n) { return Rational(n); }
inline ModInt scalar_like(const ModInt& like, long n) { return ModInt(n, like.mod); }

/// d'(q) = 4abc + uvw - au^2 - bv^2 - cw^2.
template <class S>
S half_discriminant(const TernaryForm<S>& q) {
    const S four = scalar_like(q.a, 4);
    return four * q.a * q.b * q.c + q.u * q.v * q.w - q.a * q.u * q.u - q.b * q.v * q.v -
           q.c * q.w * q.w;
}

template <class S>
struct C0Element {
    std::array<S, 4> x;
    friend bool operator==(const C0Element&, const C0Element&) = default;
};

template <class S>
class C0Algebra {
public:
    using Element = C0Element<S>;

    explicit C0Algebra(TernaryForm<S> q) : q_(std::move(q)) {
        const S& a = q_.a; const S& b = q_.b; const S& c = q_.c;
        const S& u = q_.u; const S& v = q_.v; const S& w = q_.w;
        const S z = scalar(0), o = scalar(1);
        auto E = [](S x0, S x1, S x2, S x3) { return Element{{x0, x1, x2, x3}}; };
        for (int t = 0; t < 4; ++t) {
            Element e = E(z, z, z, z);
            e.x[t] = o;
            table_[0][t] = e;
            table_[t][0] = e;
        }
        table_[1][1] = E(-(b * c), u, z, z);
        table_[1][2] = E(c * w, z, z, -c);
        table_[1][3] = E(-(u * w), w, b, u);
        table_[2][1] = E(-(u * v), v, u, c);
        table_[2][2] = E(-(a * c), z, v, z);
        table_[2][3] = E(a * u, -a, z, z);
        table_[3][1] = E(b * v, z, -b, z);
        table_[3][2] = E(-(v * w), a, w, v);
        table_[3][3] = E(-(a * b), z, z, w);
    }

    const TernaryForm<S>& form() const { return q_; }
    S scalar(long n) const { return scalar_like(q_.a, n); }

    Element element(long x0, long x1, long x2, long x3) const {
        return Element{{scalar(x0), scalar(x1), scalar(x2), scalar(x3)}};
    }
    Element zero() const { return element(0, 0, 0, 0); }
    Element one() const { return element(1, 0, 0, 0); }
    Element basis(int t) const {
        Element e = zero();
        e.x[t] = scalar(1);
        return e;
    }

    Element add(const Element& x, const Element& y) const {
        Element r = x;
        for (int t = 0; t < 4; ++t) r.x[t] += y.x[t];
        return r;
    }
    Element sub(const Element& x, const Element& y) const {
        Element r = x;
        for (int t = 0; t < 4; ++t) r.x[t] -= y.x[t];
        return r;
    }
    Element scale(const S& s, const Element& x) const {
        Element r = x;
        for (int t = 0; t < 4; ++t) r.x[t] *= s;
        return r;
    }

    Element multiply(const Element& x, const Element& y) const {
        Element r = zero();
        for (int s = 0; s < 4; ++s) {
            if (x.x[s] == scalar(0)) continue;
            for (int t = 0; t < 4; ++t) {
                if (y.x[t] == scalar(0)) continue;
                const S coef = x.x[s] * y.x[t];
                for (int o = 0; o < 4; ++o) r.x[o] += coef * table_[s][t].x[o];
            }
        }
        return r;
    }

    Element conj(const Element& x) const {
        return Element{{x.x[0] + q_.u * x.x[1] + q_.v * x.x[2] + q_.w * x.x[3], -x.x[1], -x.x[2], -x.x[3]}};
    }

    S nr(const Element& e) const {
        const auto& [x0, x1, x2, x3] = e.x;
        const S& a = q_.a; const S& b = q_.b; const S& c = q_.c;
        const S& u = q_.u; const S& v = q_.v; const S& w = q_.w;
        return x0 * x0 + b * c * x1 * x1 + a * c * x2 * x2 + a * b * x3 * x3 + u * x0 * x1 +
               v * x0 * x2 + w * x0 * x3 + (u * v - c * w) * x1 * x2 + (u * w - b * v) * x1 * x3 +
               (v * w - a * u) * x2 * x3;
    }

    S tr(const Element& e) const {
        return scalar(2) * e.x[0] + q_.u * e.x[1] + q_.v * e.x[2] + q_.w * e.x[3];
    }

    /// B(x, y) = tr(x conj(y)).
    S bilinear(const Element& x, const Element& y) const { return tr(multiply(x, conj(y))); }

    /// nr(x) = tr(x) = 0, equivalently x^2 = 0 over a domain.
    bool is_nilpotent(const Element& x) const {
        return nr(x) == scalar(0) && tr(x) == scalar(0);
    }

private:
    TernaryForm<S> q_;
    std::array<std::array<Element, 4>, 4> table_;
};

/// Reduction of a form over D modulo p.
TernaryForm<ModInt> reduce_form(const Form& q, const Dvr& dvr, int exponent = 1);

enum class QuotientType { ResidueField, QuadraticField, SplitQuadratic, QuaternionAlgebra };
std::string to_string(QuotientType t);
/// Dimension over F_p of a quotient of the given type.
int quotient_dimension(QuotientType t);

using FpVec = std::array<std::int64_t, 4>;

/// C0 of a form over F_p with its Jacobson radical and radical powers.
struct ResidueAlgebra {
    long p = 0;
    TernaryForm<ModInt> form;
    /// powers[0] = J, powers[1] = J^2, ...; the last entry is the zero module.
    std::vector<Submodule> powers;
    int nilpotency_index = 1;
    QuotientType quotient = QuotientType::QuaternionAlgebra;

    const Submodule& radical() const { return powers.front(); }
    int radical_dimension() const { return powers.front().length(); }
    int quotient_dimension() const { return 4 - radical_dimension(); }
    /// J^e for e >= 1 (zero beyond the nilpotency index).
    Submodule power(int e) const;
};

/// J = {x in A^perp : nr(x) = 0} by enumerating F_p^4; checked to be a
/// nilpotent two-sided ideal. Requires p <= 7.
ResidueAlgebra residue_radical(const TernaryForm<ModInt>& q);

struct ResidueClassification {
    std::string case_label;
    std::vector<FpVec> radical;        ///< predicted spanning set of J
    std::vector<FpVec> radical_square; ///< J^2
    std::vector<FpVec> radical_cube;   ///< J^3
    QuotientType quotient = QuotientType::QuaternionAlgebra;
};

/// Predicted radical data for the normalized residue shapes:
/// diagonal forms (all three, only a and b, or only a nonzero) and, in
/// characteristic 2, by^2 + cz^2 + uyz with or without ax^2.
/// Throws NormalizationRequiredError for any other shape.
ResidueClassification classify_residue(const TernaryForm<ModInt>& q);

int nilpotency_index(const TernaryForm<ModInt>& q);

struct OrderPredicates {
    int residue_dimension = 4;
    bool is_local = false;
    bool is_maximal_hint = false;
    bool is_eichler_hint = false;
    QuotientType quotient = QuotientType::QuaternionAlgebra;
};

/// Throws DegenerateFormError when d'(q) = 0.
OrderPredicates order_predicates(const Form& q, const Dvr& dvr);

/// Solution of z0^2 + a (b z3^2 + c z2^2 + u z2 z3) = 0 normalized to
/// min valuation 0 with min(v(z2), v(z3)) = 0.
struct IsotropicVector {
    Rational z0, z2, z3;
    friend bool operator==(const IsotropicVector&, const IsotropicVector&) = default;
};

/// All solutions with |z2|, |z3| <= bound (integers), normalized and sorted by
/// (height, |z0|, |z2|, |z3|), nonnegative signs first; height is the largest
/// absolute value among numerators and denominators. Requires v = w = 0.
std::vector<IsotropicVector> isotropic_vectors(const Form& q, const Dvr& dvr, int bound);
/// First entry of isotropic_vectors, if any. Not finding one proves nothing.
std::optional<IsotropicVector> find_isotropic(const Form& q, const Dvr& dvr, int bound = 200);

/// Image of an ideal of R = C0(M, q) in R / p^2 R as a Z/p^2-module.
struct IdealModPi2 {
    Submodule module;
    bool contains(const C0Element<Rational>& x, const Dvr& dvr) const;
};

enum class AtomStatus { Atom, NotAtom, Undetermined };
std::string to_string(AtomStatus s);

/// The order C0(M, q) over D = Z_(p) for a nondegenerate form.
class CliffordOrder {
public:
    using Element = C0Element<Rational>;

    CliffordOrder(const Form& q, const Dvr& dvr);

    const Form& form() const { return q_; }
    const Dvr& dvr() const { return dvr_; }
    const C0Algebra<Rational>& algebra() const { return alg_; }
    const ResidueAlgebra& residue() const { return residue_; }
    const OrderPredicates& predicates() const { return predicates_; }
    bool is_local() const { return predicates_.is_local; }

    const IdealModPi2& radical_mod_pi2() const { return j_; }
    const IdealModPi2& radical_square_mod_pi2() const { return j2_; }
    /// Integral lifts of an F_p-basis of J(R / pR).
    const std::vector<Element>& radical_lifts() const { return lifts_; }

    bool contains(const Element& x) const;
    bool in_radical(const Element& x) const;
    bool in_radical_square(const Element& x) const;

    /// Atom if x in J \ J^2; NotAtom if x is exhibited as a product of two
    /// radical elements; Undetermined otherwise. Requires a local order;
    /// rejects non-members, zero divisors and units.
    AtomStatus is_atom_local(const Element& x) const;

    /// z = z0 + z2 j - z3 k from the first isotropic vector with z in J \ J^2.
    /// Requires a local order. Throws NotFoundError when the search fails.
    Element find_nilpotent_in_radical(int bound = 200) const;

    /// p^k + z, checked to lie in J \ J^2. Requires k >= 2.
    Element long_atom_family(const Element& z, int k) const;

    Element from_isotropic(const IsotropicVector& iv) const;

private:
    Form q_;
    Dvr dvr_;
    C0Algebra<Rational> alg_;
    ResidueAlgebra residue_;
    OrderPredicates predicates_;
    IdealModPi2 j_;
    IdealModPi2 j2_;
    std::vector<Element> lifts_;
};

} // namespace qfact
