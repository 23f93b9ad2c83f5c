#include "qfact/clifford.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

#include "qfact/error.hpp"

namespace qfact {

std::string to_string(QuotientType t) {
    switch (t) {
    case QuotientType::ResidueField: return "residue_field";
    case QuotientType::QuadraticField: return "quadratic_field";
    case QuotientType::SplitQuadratic: return "split_quadratic";
    case QuotientType::QuaternionAlgebra: return "quaternion_algebra";
    }
    return "?";
}

int quotient_dimension(QuotientType t) {
    switch (t) {
    case QuotientType::ResidueField: return 1;
    case QuotientType::QuadraticField:
    case QuotientType::SplitQuadratic: return 2;
    case QuotientType::QuaternionAlgebra: return 4;
    }
    return 0;
}

std::string to_string(AtomStatus s) {
    switch (s) {
    case AtomStatus::Atom: return "atom";
    case AtomStatus::NotAtom: return "not_atom";
    case AtomStatus::Undetermined: return "undetermined";
    }
    return "?";
}

TernaryForm<ModInt> reduce_form(const Form& q, const Dvr& dvr, int exponent) {
    const std::int64_t m = dvr.modulus(exponent);
    auto r = [&](const Rational& x) { return ModInt(dvr.residue_mod(x, m), m); };
    return {r(q.a), r(q.b), r(q.c), r(q.u), r(q.v), r(q.w)};
}

namespace {

using FpAlgebra = C0Algebra<ModInt>;

long residue_prime(const TernaryForm<ModInt>& q) {
    const long p = static_cast<long>(q.a.mod);
    if (!is_prime(p)) throw DomainError("residue form must live over a prime field");
    return p;
}

C0Element<ModInt> to_element(const FpAlgebra& A, const ZVec& v) {
    return A.element(static_cast<long>(v[0]), static_cast<long>(v[1]), static_cast<long>(v[2]),
                     static_cast<long>(v[3]));
}

ZVec to_vec(const C0Element<ModInt>& e) { return {e.x[0].v, e.x[1].v, e.x[2].v, e.x[3].v}; }

Submodule product_span(const FpAlgebra& A, const ChainRing& R, const Submodule& X, const Submodule& Y) {
    std::vector<ZVec> gens;
    for (const auto& x : X.rows())
        for (const auto& y : Y.rows()) gens.push_back(to_vec(A.multiply(to_element(A, x), to_element(A, y))));
    return Submodule::span(R, 4, gens);
}

bool is_square_mod(std::int64_t x, long p) {
    for (long y = 0; y < p; ++y)
        if ((y * y - x) % p == 0) return true;
    return false;
}

std::int64_t sqrt_mod(std::int64_t x, long p) {
    for (long y = 0; y < p; ++y)
        if ((y * y - x) % p == 0) return y;
    throw std::logic_error("not a square");
}

} // namespace

Submodule ResidueAlgebra::power(int e) const {
    if (e < 1) throw DomainError("radical power exponent must be positive");
    if (e <= static_cast<int>(powers.size())) return powers[e - 1];
    return powers.back();
}

ResidueAlgebra residue_radical(const TernaryForm<ModInt>& q) {
    const long p = residue_prime(q);
    if (p > 7) throw DomainError("exhaustive radical search needs p <= 7");
    const FpAlgebra A(q);
    const ChainRing F(p, 1);

    std::array<std::array<std::int64_t, 4>, 4> gram{};
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) gram[s][t] = A.bilinear(A.basis(s), A.basis(t)).v;

    std::vector<ZVec> members;
    ZVec x(4, 0);
    const long total = p * p * p * p;
    for (long idx = 0; idx < total; ++idx) {
        long r = idx;
        for (int t = 0; t < 4; ++t) {
            x[t] = r % p;
            r /= p;
        }
        bool perp = true;
        for (int t = 0; t < 4 && perp; ++t) {
            std::int64_t s = 0;
            for (int u = 0; u < 4; ++u) s += x[u] * gram[u][t];
            perp = s % p == 0;
        }
        if (perp && A.nr(to_element(A, x)).is_zero()) members.push_back(x);
    }
    Submodule J = Submodule::span(F, 4, members);
    long expected = 1;
    for (int i = 0; i < J.length(); ++i) expected *= p;
    if (expected != static_cast<long>(members.size()))
        throw std::logic_error("radical candidates do not form a subspace");
    for (const auto& row : J.rows())
        for (int t = 0; t < 4; ++t) {
            if (!J.contains(to_vec(A.multiply(to_element(A, row), A.basis(t)))) ||
                !J.contains(to_vec(A.multiply(A.basis(t), to_element(A, row)))))
                throw std::logic_error("radical is not a two-sided ideal");
        }

    ResidueAlgebra out;
    out.p = p;
    out.form = q;
    out.powers.push_back(J);
    while (!out.powers.back().is_zero()) {
        if (out.powers.size() > 4) throw std::logic_error("radical is not nilpotent");
        out.powers.push_back(product_span(A, F, out.powers.back(), J));
    }
    out.nilpotency_index = static_cast<int>(out.powers.size());

    switch (out.quotient_dimension()) {
    case 4: {
        bool commutative = true;
        for (int s = 1; s < 4; ++s)
            for (int t = 1; t < 4; ++t)
                if (A.multiply(A.basis(s), A.basis(t)) != A.multiply(A.basis(t), A.basis(s))) commutative = false;
        if (commutative) throw std::logic_error("semisimple commutative quotient of dimension 4");
        out.quotient = QuotientType::QuaternionAlgebra;
        break;
    }
    case 2: {
        bool split = false;
        ZVec y(4, 0);
        for (long idx = 0; idx < total && !split; ++idx) {
            long r = idx;
            for (int t = 0; t < 4; ++t) {
                y[t] = r % p;
                r /= p;
            }
            auto e = to_element(A, y);
            auto sq_minus = A.sub(A.multiply(e, e), e);
            if (J.contains(to_vec(sq_minus)) && !J.contains(y) && !J.contains(to_vec(A.sub(A.one(), e))))
                split = true;
        }
        out.quotient = split ? QuotientType::SplitQuadratic : QuotientType::QuadraticField;
        break;
    }
    case 1:
        out.quotient = QuotientType::ResidueField;
        break;
    default:
        throw std::logic_error("residue quotient of dimension 3");
    }
    return out;
}

ResidueClassification classify_residue(const TernaryForm<ModInt>& q) {
    const long p = residue_prime(q);
    const std::int64_t a = q.a.v, b = q.b.v, c = q.c.v, u = q.u.v, v = q.v.v, w = q.w.v;
    ResidueClassification r;
    const FpVec I{0, 1, 0, 0}, Jv{0, 0, 1, 0}, K{0, 0, 0, 1};
    if (v != 0 || w != 0) throw NormalizationRequiredError();
    if (u != 0) {
        if (p != 2) throw NormalizationRequiredError();
        if (a != 0) {
            r.case_label = "4";
            r.quotient = QuotientType::QuaternionAlgebra;
        } else {
            r.case_label = "5";
            r.radical = {Jv, K};
            bool split = false;
            for (long y = 0; y < p; ++y)
                if ((y * y + u * y - b * c) % p == 0) split = true;
            r.quotient = split ? QuotientType::SplitQuadratic : QuotientType::QuadraticField;
        }
        return r;
    }
    if (a != 0 && b != 0 && c != 0) {
        if (p != 2) {
            r.case_label = "1a";
            r.quotient = QuotientType::QuaternionAlgebra;
            return r;
        }
        const std::int64_t y0 = sqrt_mod(b * c % p, p), z0 = sqrt_mod(a * c % p, p);
        r.case_label = "1b-i";
        r.radical = {{y0, 1, 0, 0}, {z0, 0, 1, 0}, {y0 * z0 % p, 0, 0, c}};
        r.radical_square = {{y0 * z0 % p, z0, y0, c}};
        r.quotient = QuotientType::ResidueField;
        return r;
    }
    if (a != 0 && b != 0 && c == 0) {
        if (p != 2) {
            r.case_label = "2a";
            r.radical = {I, Jv};
            const std::int64_t minus_ab = ((p - a * b % p) % p);
            r.quotient = is_square_mod(minus_ab, p) ? QuotientType::SplitQuadratic : QuotientType::QuadraticField;
            return r;
        }
        const std::int64_t y0 = sqrt_mod(a * b % p, p);
        r.case_label = "2b-i";
        r.radical = {I, Jv, {y0, 0, 0, 1}};
        r.radical_square = {{0, y0, b, 0}};
        r.quotient = QuotientType::ResidueField;
        return r;
    }
    if (b == 0 && c == 0) {
        r.case_label = "3";
        r.radical = {I, Jv, K};
        if (a != 0) r.radical_square = {I};
        r.quotient = QuotientType::ResidueField;
        return r;
    }
    throw NormalizationRequiredError();
}

int nilpotency_index(const TernaryForm<ModInt>& q) { return residue_radical(q).nilpotency_index; }

OrderPredicates order_predicates(const Form& q, const Dvr& dvr) {
    if (half_discriminant(q).is_zero()) throw DegenerateFormError();
    for (const Rational* x : {&q.a, &q.b, &q.c, &q.u, &q.v, &q.w})
        if (!dvr.contains(*x)) throw DomainError("form coefficient outside D: " + x->str());
    ResidueAlgebra res = residue_radical(reduce_form(q, dvr));
    OrderPredicates out;
    out.quotient = res.quotient;
    out.residue_dimension = res.quotient_dimension();
    out.is_local = res.quotient == QuotientType::ResidueField || res.quotient == QuotientType::QuadraticField;
    out.is_maximal_hint = out.residue_dimension == 4;
    out.is_eichler_hint = res.quotient == QuotientType::SplitQuadratic;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

mpz_class height_of(const Rational& x) {
    mpz_class n = abs(x.num());
    mpz_class d = x.den();
    return n > d ? n : d;
}

Rational magnitude(const Rational& x) { return x.sign() < 0 ? -x : x; }

struct Candidate {
    IsotropicVector vec;
    mpz_class height;
    std::tuple<Rational, Rational, Rational> abs_key;
    std::tuple<bool, bool, bool> sign_key;

    bool operator<(const Candidate& o) const {
        if (height != o.height) return height < o.height;
        if (abs_key != o.abs_key) return abs_key < o.abs_key;
        return sign_key < o.sign_key;
    }
};

std::optional<Rational> rational_sqrt(const Rational& t) {
    if (t.sign() < 0) return std::nullopt;
    mpz_class n = t.num(), d = t.den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Rational(rn, rd);
}

std::vector<IsotropicVector> search_isotropic(const Form& q, const Dvr& dvr, int bound, bool first_only) {
    if (half_discriminant(q).is_zero()) throw DegenerateFormError();
    if (!q.v.is_zero() || !q.w.is_zero()) throw NormalizationRequiredError();
    if (bound < 1) throw DomainError("search bound must be positive");
    std::vector<Candidate> found;
    std::set<std::tuple<Rational, Rational, Rational>> seen;
    std::optional<mpz_class> best;
    for (int h = 1; h <= bound; ++h) {
        if (first_only && best && mpz_class(h) > *best) break;
        for (int z2 = -h; z2 <= h; ++z2)
            for (int z3 = -h; z3 <= h; ++z3) {
                if (std::max(std::abs(z2), std::abs(z3)) != h) continue;
                const Rational r2(z2), r3(z3);
                Rational t = -(q.a * (q.b * r3 * r3 + q.c * r2 * r2 + q.u * r2 * r3));
                auto root = rational_sqrt(t);
                if (!root) continue;
                for (int sign : {1, -1}) {
                    if (sign < 0 && root->is_zero()) continue;
                    Rational z0 = sign > 0 ? *root : -*root;
                    Valuation g = min(min(dvr.valuation(z0), dvr.valuation(r2)), dvr.valuation(r3));
                    Rational scale = dvr.pi_power(-g.value());
                    IsotropicVector v{z0 * scale, r2 * scale, r3 * scale};
                    if (min(dvr.valuation(v.z2), dvr.valuation(v.z3)) != Valuation(0)) continue;
                    if (!seen.insert({v.z0, v.z2, v.z3}).second) continue;
                    Candidate c;
                    c.vec = v;
                    c.height = std::max({height_of(v.z0), height_of(v.z2), height_of(v.z3)});
                    c.abs_key = {magnitude(v.z0), magnitude(v.z2), magnitude(v.z3)};
                    c.sign_key = {v.z0.sign() < 0, v.z2.sign() < 0, v.z3.sign() < 0};
                    if (!best || c.height < *best) best = c.height;
                    found.push_back(std::move(c));
                }
            }
    }
    std::sort(found.begin(), found.end());
    std::vector<IsotropicVector> out;
    for (auto& c : found) out.push_back(std::move(c.vec));
    if (first_only && out.size() > 1) out.resize(1);
    return out;
}

} // namespace

std::vector<IsotropicVector> isotropic_vectors(const Form& q, const Dvr& dvr, int bound) {
    return search_isotropic(q, dvr, bound, false);
}

std::optional<IsotropicVector> find_isotropic(const Form& q, const Dvr& dvr, int bound) {
    auto v = search_isotropic(q, dvr, bound, true);
    if (v.empty()) return std::nullopt;
    return v.front();
}

// ---------------------------------------------------------------------------

bool IdealModPi2::contains(const C0Element<Rational>& x, const Dvr& dvr) const {
    const std::int64_t m = module.ring().modulus();
    ZVec r(4);
    for (int t = 0; t < 4; ++t) r[t] = dvr.residue_mod(x.x[t], m);
    return module.contains(r);
}

CliffordOrder::CliffordOrder(const Form& q, const Dvr& dvr)
    : q_(q), dvr_(dvr), alg_(q), j_{Submodule(ChainRing(dvr.prime(), 2), 4)},
      j2_{Submodule(ChainRing(dvr.prime(), 2), 4)} {
    predicates_ = order_predicates(q, dvr);
    residue_ = residue_radical(reduce_form(q, dvr));

    const long p = dvr.prime();
    const ChainRing R2(p, 2);
    const FpAlgebra A2(reduce_form(q, dvr, 2));

    std::vector<ZVec> jgens;
    for (const auto& row : residue_.radical().rows()) {
        jgens.push_back(row);
        lifts_.push_back(Element{{Rational(row[0]), Rational(row[1]), Rational(row[2]), Rational(row[3])}});
    }
    for (int t = 0; t < 4; ++t) {
        ZVec e(4, 0);
        e[t] = p;
        jgens.push_back(e);
    }
    // pR is contained in J(R), so J(R) is the preimage of its image mod p,
    // and p^2 R lies in J(R)^2, so membership in either ideal is decided mod p^2.
    j_.module = Submodule::span(R2, 4, jgens);
    std::vector<ZVec> j2gens;
    for (const auto& x : jgens)
        for (const auto& y : jgens) j2gens.push_back(to_vec(A2.multiply(to_element(A2, x), to_element(A2, y))));
    j2_.module = Submodule::span(R2, 4, j2gens);

    if (!j_.module.contains(j2_.module)) throw std::logic_error("J^2 not contained in J");
    for (const Submodule* I : {&j_.module, &j2_.module})
        for (const auto& row : I->rows())
            for (int t = 0; t < 4; ++t)
                if (!I->contains(to_vec(A2.multiply(to_element(A2, row), A2.basis(t)))) ||
                    !I->contains(to_vec(A2.multiply(A2.basis(t), to_element(A2, row)))))
                    throw std::logic_error("ideal image mod p^2 is not two-sided");
    // the image of J^2 in R/pR must be the square of the residue radical
    std::vector<ZVec> reduced;
    for (const auto& row : j2_.module.rows()) {
        ZVec r(4);
        for (int t = 0; t < 4; ++t) r[t] = row[t] % p;
        reduced.push_back(r);
    }
    if (!(Submodule::span(ChainRing(p, 1), 4, reduced) == residue_.power(2)))
        throw std::logic_error("image of J^2 modulo p differs from the residue radical square");
}

bool CliffordOrder::contains(const Element& x) const {
    return std::all_of(x.x.begin(), x.x.end(), [&](const Rational& c) { return dvr_.contains(c); });
}

bool CliffordOrder::in_radical(const Element& x) const { return contains(x) && j_.contains(x, dvr_); }

bool CliffordOrder::in_radical_square(const Element& x) const { return contains(x) && j2_.contains(x, dvr_); }

AtomStatus CliffordOrder::is_atom_local(const Element& x) const {
    if (!is_local()) throw DomainError("atom test needs a local order");
    if (!contains(x)) throw DomainError("not an element of the order");
    if (alg_.nr(x).is_zero()) throw DomainError("zero divisor");
    if (!in_radical(x)) throw DomainError("unit");
    if (!in_radical_square(x)) return AtomStatus::Atom;
    const Rational p(dvr_.prime());
    Element y = alg_.scale(Rational(1) / p, x);
    if (in_radical(y)) return AtomStatus::NotAtom;
    for (const auto& g : lifts_) {
        const Rational n = alg_.nr(g);
        if (n.is_zero()) continue;
        const Element ginv = alg_.scale(Rational(1) / n, alg_.conj(g));
        if (in_radical(alg_.multiply(ginv, x)) || in_radical(alg_.multiply(x, ginv))) return AtomStatus::NotAtom;
    }
    return AtomStatus::Undetermined;
}

CliffordOrder::Element CliffordOrder::from_isotropic(const IsotropicVector& iv) const {
    return Element{{iv.z0, Rational(0), iv.z2, -iv.z3}};
}

CliffordOrder::Element CliffordOrder::find_nilpotent_in_radical(int bound) const {
    if (!is_local()) throw DomainError("nilpotent search needs a local order");
    for (const auto& iv : isotropic_vectors(q_, dvr_, bound)) {
        Element z = from_isotropic(iv);
        if (!alg_.nr(z).is_zero()) throw std::logic_error("isotropic vector gives nonzero norm");
        if (in_radical(z) && !in_radical_square(z)) return z;
    }
    throw NotFoundError("isotropic vector not found within bound " + std::to_string(bound));
}

CliffordOrder::Element CliffordOrder::long_atom_family(const Element& z, int k) const {
    if (k < 2) throw DomainError("k must be at least 2");
    Element x = z;
    x.x[0] += dvr_.pi_power(k);
    if (!in_radical(x) || in_radical_square(x)) throw DomainError("p^k + z is not in J \\ J^2");
    return x;
}

} // namespace qfact
