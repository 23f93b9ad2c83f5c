#include "qfact/eichler.hpp"

#include <algorithm>
#include <stdexcept>

#include "qfact/error.hpp"

namespace qfact {

std::string to_string(AtomClass c) {
    switch (c) {
    case AtomClass::I_upper: return "I-upper";
    case AtomClass::I_lower: return "I-lower";
    case AtomClass::II_3: return "II-3";
    case AtomClass::II_4: return "II-4";
    case AtomClass::II_5: return "II-5";
    case AtomClass::II_6: return "II-6";
    case AtomClass::II_7: return "II-7";
    case AtomClass::II_8: return "II-8";
    }
    return "?";
}

std::string AtomClassTag::str() const {
    std::string s = to_string(cls);
    switch (cls) {
    case AtomClass::I_upper:
    case AtomClass::I_lower:
        return s + "(lambda=" + std::to_string(lambda) + ")";
    case AtomClass::II_3:
    case AtomClass::II_4:
        return s + "(m=" + std::to_string(m) + ",m'=" + std::to_string(m_prime) +
               ",eps=" + std::to_string(epsilon) + ",delta=" + std::to_string(delta) + ")";
    case AtomClass::II_5:
        return s + "(m=" + std::to_string(m) + ",eps=" + std::to_string(epsilon) + ")";
    case AtomClass::II_6:
        return s + "(m'=" + std::to_string(m_prime) + ",delta=" + std::to_string(delta) + ")";
    case AtomClass::II_7:
        return s;
    case AtomClass::II_8:
        return s + "(m=" + std::to_string(m) + ",m'=" + std::to_string(m_prime) +
               ",eps=" + std::to_string(epsilon) + ",delta=" + std::to_string(delta) +
               ",k=" + std::to_string(k) + ")";
    }
    return s;
}

EichlerOrder::EichlerOrder(Dvr dvr, int level) : dvr_(dvr), level_(level) {
    if (level < 0) throw DomainError("level must be nonnegative");
}

void EichlerOrder::require_non_hereditary() const {
    if (is_hereditary()) throw HereditaryLevelError(level_);
}

bool EichlerOrder::contains(const Mat2& A) const {
    return dvr_.contains(A.a) && dvr_.contains(A.c) && dvr_.contains(A.d) &&
           dvr_.valuation(A.b_raw) >= Valuation(level_);
}

void EichlerOrder::require_member(const Mat2& A) const {
    if (!contains(A)) throw DomainError("not an element of the order: " + A.str());
}

NormTraceAdj EichlerOrder::nr_tr_adj(const Mat2& A) {
    return {A.det(), A.trace(), A.adj()};
}

Rational EichlerOrder::b(const Mat2& A) const { return A.b_raw / dvr_.pi_power(level_); }

Valuation EichlerOrder::corner_valuation(const Mat2& A, int i, int j) const {
    if (i == 1 && j == 1) return dvr_.valuation(A.a);
    if (i == 1 && j == 2) return dvr_.valuation(A.b_raw);
    if (i == 2 && j == 1) return dvr_.valuation(A.c);
    if (i == 2 && j == 2) return dvr_.valuation(A.d);
    throw std::out_of_range("corner index");
}

bool EichlerOrder::is_unit(const Mat2& A) const {
    require_member(A);
    return dvr_.valuation(A.a) == Valuation(0) && dvr_.valuation(A.d) == Valuation(0);
}

bool EichlerOrder::is_cancellative(const Mat2& A) const {
    require_member(A);
    return !A.det().is_zero();
}

bool EichlerOrder::is_atom(const Mat2& A) const {
    require_non_hereditary();
    if (!is_cancellative(A)) throw DomainError("zero divisor: " + A.str());
    if (is_unit(A)) throw DomainError("unit: " + A.str());
    if (norm_valuation(A) == Valuation(1)) return true;
    const Valuation zero(0);
    return dvr_.valuation(b(A)) == zero && dvr_.valuation(A.c) == zero &&
           dvr_.valuation(A.a) > zero && dvr_.valuation(A.d) > zero;
}

bool EichlerOrder::in_jacobson(const Mat2& A) const {
    require_member(A);
    return dvr_.valuation(A.a) >= Valuation(1) && dvr_.valuation(A.d) >= Valuation(1);
}

bool EichlerOrder::right_associated(const Mat2& V, const Mat2& A) const {
    if (V.det().is_zero()) return false;
    Mat2 E = left_divide(V, A);
    return contains(E) && is_unit(E);
}

Mat2 EichlerOrder::atom_from_tag(const AtomClassTag& t) const {
    const Rational pn = dvr_.pi_power(level_);
    const Rational pi = dvr_.pi_power(1);
    switch (t.cls) {
    case AtomClass::I_upper:
        return {pi, Rational(t.lambda) * pn, 0, 1};
    case AtomClass::I_lower:
        return {1, 0, Rational(t.lambda), pi};
    case AtomClass::II_3:
    case AtomClass::II_4:
        return {Rational(t.epsilon) * dvr_.pi_power(t.m), pn, 1,
                Rational(t.delta) * dvr_.pi_power(t.m_prime)};
    case AtomClass::II_5:
        return {Rational(t.epsilon) * dvr_.pi_power(t.m), pn, 1, 0};
    case AtomClass::II_6:
        return {0, pn, 1, Rational(t.delta) * dvr_.pi_power(t.m_prime)};
    case AtomClass::II_7:
        return {0, pn, 1, 0};
    case AtomClass::II_8: {
        Rational eps(t.epsilon);
        Rational second = Rational(1) / eps + dvr_.pi_power(t.k) * Rational(t.delta);
        return {eps * dvr_.pi_power(t.m), pn, 1, second * dvr_.pi_power(t.m_prime)};
    }
    }
    throw std::logic_error("unknown atom class");
}

CanonicalAssociate EichlerOrder::canonical_right_associate(const Mat2& U) const {
    if (!is_atom(U)) throw DomainError("not an atom: " + U.str());
    AtomClassTag tag;
    const int n = level_;
    if (norm_valuation(U) == Valuation(1)) {
        if (dvr_.valuation(U.a) == Valuation(1)) {
            tag.cls = AtomClass::I_upper;
            tag.lambda = dvr_.residue(b(U) / U.d, 1).representative;
        } else {
            tag.cls = AtomClass::I_lower;
            tag.lambda = dvr_.residue(U.c / U.a, 1).representative;
        }
    } else {
        const Rational a1 = U.a / U.c;
        const Rational d1 = U.d / b(U);
        const Valuation va = dvr_.valuation(a1);
        const Valuation vd = dvr_.valuation(d1);
        const Valuation vn(n);
        auto unit_part = [&](const Rational& x, Valuation v) { return x / dvr_.pi_power(v.value()); };
        if (va < vn && vd < vn && va.value() + vd.value() < n) {
            tag.cls = AtomClass::II_3;
            tag.m = va.value();
            tag.m_prime = vd.value();
            tag.epsilon = dvr_.residue(unit_part(a1, va), tag.m_prime).representative;
            tag.delta = dvr_.residue(unit_part(d1, vd), tag.m).representative;
        } else if (va < vn && vd < vn && va.value() + vd.value() == n) {
            tag.cls = AtomClass::II_8;
            tag.m = va.value();
            tag.m_prime = vd.value();
            Rational det1 = a1 * d1 - dvr_.pi_power(n);
            tag.k = dvr_.valuation(det1).value() - n;
            tag.epsilon = dvr_.residue(unit_part(a1, va), tag.m_prime + tag.k).representative;
            Rational eps_inv = Rational(1) / Rational(tag.epsilon);
            Rational rest = (unit_part(d1, vd) - eps_inv) / dvr_.pi_power(tag.k);
            tag.delta = dvr_.residue(rest, tag.m).representative;
        } else if (va < vn && vd < vn) {
            tag.cls = AtomClass::II_4;
            tag.m = va.value();
            tag.m_prime = vd.value();
            tag.epsilon = dvr_.residue(unit_part(a1, va), n - tag.m).representative;
            tag.delta = dvr_.residue(unit_part(d1, vd), n - tag.m_prime).representative;
        } else if (va < vn) {
            tag.cls = AtomClass::II_5;
            tag.m = va.value();
            tag.epsilon = dvr_.residue(unit_part(a1, va), n - tag.m).representative;
        } else if (vd < vn) {
            tag.cls = AtomClass::II_6;
            tag.m_prime = vd.value();
            tag.delta = dvr_.residue(unit_part(d1, vd), n - tag.m_prime).representative;
        } else {
            tag.cls = AtomClass::II_7;
        }
    }
    Mat2 V = atom_from_tag(tag);
    Mat2 E = left_divide(V, U);
    if (!contains(E) || !is_unit(E))
        throw std::logic_error("canonical associate check failed for " + U.str());
    return {tag, V, E};
}

CanonicalAssociate EichlerOrder::canonical_left_associate(const Mat2& U) const {
    CanonicalAssociate r = canonical_right_associate(U.adj());
    return {r.tag, r.representative.adj(), r.unit.adj()};
}

namespace {

std::vector<std::int64_t> unit_residues(const Dvr& dvr, int m) {
    std::vector<std::int64_t> out;
    const std::int64_t mod = dvr.modulus(m);
    for (std::int64_t r = 0; r < mod; ++r)
        if (r % dvr.prime() != 0) out.push_back(r);
    return out;
}

} // namespace

std::vector<AtomEntry> EichlerOrder::enumerate_atoms(int max_norm_val) const {
    require_non_hereditary();
    if (max_norm_val < 1) throw DomainError("max_norm_val must be positive");
    const int n = level_;
    const long p = dvr_.prime();
    std::vector<AtomClassTag> tags;
    for (AtomClass c : {AtomClass::I_upper, AtomClass::I_lower})
        for (long l = 0; l < p; ++l) tags.push_back({c, l});
    for (int m = 1; m < n; ++m)
        for (int mp = 1; mp < n; ++mp) {
            if (m + mp < n && m + mp <= max_norm_val) {
                for (auto e : unit_residues(dvr_, mp))
                    for (auto d : unit_residues(dvr_, m))
                        tags.push_back({AtomClass::II_3, 0, m, mp, e, d, 0});
            } else if (m + mp > n && n <= max_norm_val) {
                for (auto e : unit_residues(dvr_, n - m))
                    for (auto d : unit_residues(dvr_, n - mp))
                        tags.push_back({AtomClass::II_4, 0, m, mp, e, d, 0});
            } else if (m + mp == n) {
                for (int k = 0; n + k <= max_norm_val; ++k)
                    for (auto e : unit_residues(dvr_, mp + k))
                        for (auto d : unit_residues(dvr_, m)) {
                            // e^-1 + d must stay a unit; otherwise v(d entry) > m'.
                            if (k == 0 && (1 + e * d) % dvr_.prime() == 0) continue;
                            tags.push_back({AtomClass::II_8, 0, m, mp, e, d, k});
                        }
            }
        }
    if (n <= max_norm_val) {
        for (int m = 1; m < n; ++m)
            for (auto e : unit_residues(dvr_, n - m))
                tags.push_back({AtomClass::II_5, 0, m, 0, e, 0, 0});
        for (int mp = 1; mp < n; ++mp)
            for (auto d : unit_residues(dvr_, n - mp))
                tags.push_back({AtomClass::II_6, 0, 0, mp, 0, d, 0});
        tags.push_back({AtomClass::II_7});
    }
    std::sort(tags.begin(), tags.end());
    std::vector<AtomEntry> out;
    out.reserve(tags.size());
    for (const auto& t : tags) {
        Mat2 V = atom_from_tag(t);
        out.push_back({t, V, norm_valuation(V).value()});
    }
    return out;
}

std::vector<LeftDivisor> EichlerOrder::left_divisor_atoms(const Mat2& A) const {
    require_non_hereditary();
    if (!is_cancellative(A)) throw DomainError("zero divisor: " + A.str());
    if (is_unit(A)) throw DomainError("unit: " + A.str());
    AtomTable table(*this, norm_valuation(A).value());
    return table.left_divisors(A);
}

UnitDecomposition EichlerOrder::unit_decompose(const Mat2& E) const {
    if (!is_unit(E)) throw DomainError("not a unit: " + E.str());
    const Rational ca = E.c / E.a;
    Mat2 lower{1, 0, ca, 1};
    Mat2 diagonal = Mat2::diag(E.a, E.d - ca * E.b_raw);
    Mat2 upper{1, E.b_raw / E.a, 0, 1};
    return {lower, diagonal, upper};
}

bool EichlerOrder::satisfies_special_chain(const Mat2& A) const {
    const Valuation va = dvr_.valuation(A.a), vb = dvr_.valuation(A.b_raw),
                    vc = dvr_.valuation(A.c), vd = dvr_.valuation(A.d);
    const Valuation lo = min(va, vd);
    const Valuation n(level_);
    return vc <= lo && lo <= vb && vb <= lo + n && lo + n <= vc + n + n;
}

SpecialAssociate EichlerOrder::special_associate(const Mat2& A0) const {
    if (!is_cancellative(A0)) throw DomainError("zero divisor: " + A0.str());
    const Rational pn = dvr_.pi_power(level_);
    const Mat2 add_col2_to_col1{1, 0, 1, 1};   // right factor
    const Mat2 add_row1_to_row2{1, 0, 1, 1};   // left factor
    const Mat2 add_pn_row2_to_row1{1, pn, 0, 1}; // left factor
    const Mat2 add_pn_col1_to_col2{1, pn, 0, 1}; // right factor

    Mat2 A = A0;
    Mat2 E = Mat2::identity();
    Mat2 F = Mat2::identity();
    auto v = [&](const Rational& x) { return dvr_.valuation(x); };
    auto left = [&](const Mat2& X) { A = X * A; E = X * E; };
    auto right = [&](const Mat2& X) { A = A * X; F = F * X; };

    if (v(A.a) > v(A.b_raw)) right(add_col2_to_col1);
    if (v(A.d) > v(A.b_raw)) left(add_row1_to_row2);

    if (v(A.c) > min(v(A.a), v(A.d))) {
        if (v(A.a) <= v(A.d)) left(add_row1_to_row2);
        else right(add_col2_to_col1);
    }

    const Valuation n(level_);
    const Valuation vc_n = v(A.c) + n;
    const bool fix_a = v(A.a) > vc_n;
    const bool fix_d = v(A.d) > vc_n;
    if (fix_a) left(add_pn_row2_to_row1);
    if (fix_d) right(add_pn_col1_to_col2);

    const Valuation lo = min(v(A.a), v(A.d));
    if (v(A.b_raw) > lo + n) {
        if (v(A.a) <= v(A.d)) right(add_pn_col1_to_col2);
        else left(add_pn_row2_to_row1);
    }

    if (!satisfies_special_chain(A) || E * A0 * F != A)
        throw std::logic_error("special associate reduction failed for " + A0.str());
    return {A, E, F};
}

Mat2 EichlerOrder::long_atom(const Rational& a) const {
    require_non_hereditary();
    if (!dvr_.contains(a) || a.is_zero()) throw DomainError("need a nonzero element of D");
    const Valuation s = dvr_.valuation(a);
    if (s < Valuation(1)) throw DomainError("need a non-unit: " + a.str());
    if (s == Valuation(1)) return Mat2::diag(a, 1);
    const Rational pi = dvr_.pi_power(1);
    return {a / pi + dvr_.pi_power(level_ - 1), dvr_.pi_power(level_), 1, pi};
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t mulmod(std::int64_t x, std::int64_t y, std::int64_t mod) {
    return static_cast<std::int64_t>((static_cast<__int128>(x) * y) % mod);
}

std::int64_t addmod(std::int64_t x, std::int64_t y, std::int64_t mod) {
    std::int64_t s = x + y;
    return s >= mod ? s - mod : s;
}

} // namespace

AtomTable::AtomTable(const EichlerOrder& order, int max_norm_val)
    : order_(order), max_norm_val_(max_norm_val), modulus_(0) {
    atoms_ = order_.enumerate_atoms(max_norm_val);
    prepare_residues();
}

AtomTable::AtomTable(const EichlerOrder& order, int max_norm_val, std::vector<AtomEntry> atoms)
    : order_(order), max_norm_val_(max_norm_val), modulus_(0), atoms_(std::move(atoms)) {
    order_.require_non_hereditary();
    prepare_residues();
}

void AtomTable::prepare_residues() {
    try {
        modulus_ = order_.dvr().modulus(max_norm_val_ + order_.level());
    } catch (const OverflowError&) {
        modulus_ = 0;
    }
    if (modulus_ == 0) return;
    const Dvr& dvr = order_.dvr();
    residues_.reserve(atoms_.size());
    for (const auto& e : atoms_) {
        Mat2 adj = e.matrix.adj();
        residues_.push_back({dvr.residue_mod(adj.a, modulus_), dvr.residue_mod(adj.b_raw, modulus_),
                             dvr.residue_mod(adj.c, modulus_), dvr.residue_mod(adj.d, modulus_),
                             dvr.modulus(e.norm_valuation),
                             dvr.modulus(e.norm_valuation + order_.level()), e.norm_valuation});
    }
}

std::vector<std::size_t> AtomTable::dividing_indices(const Mat2& A) const {
    const Valuation vA = order_.norm_valuation(A);
    if (vA.is_infinite()) throw DomainError("zero divisor: " + A.str());
    if (vA > Valuation(max_norm_val_))
        throw DomainError("norm valuation exceeds the atom table bound");
    std::vector<std::size_t> out;
    if (modulus_ == 0) {
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (atoms_[i].norm_valuation > vA.value()) continue;
            if (order_.contains(left_divide(atoms_[i].matrix, A))) out.push_back(i);
        }
        return out;
    }
    const Dvr& dvr = order_.dvr();
    const std::int64_t M = modulus_;
    const std::int64_t xa = dvr.residue_mod(A.a, M), xb = dvr.residue_mod(A.b_raw, M),
                       xc = dvr.residue_mod(A.c, M), xd = dvr.residue_mod(A.d, M);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Residues& r = residues_[i];
        if (r.norm_valuation > vA.value()) continue;
        // adj(V) * A, entrywise
        std::int64_t p11 = addmod(mulmod(r.a, xa, M), mulmod(r.b, xc, M), M);
        if (p11 % r.mod_low) continue;
        std::int64_t p21 = addmod(mulmod(r.c, xa, M), mulmod(r.d, xc, M), M);
        if (p21 % r.mod_low) continue;
        std::int64_t p22 = addmod(mulmod(r.c, xb, M), mulmod(r.d, xd, M), M);
        if (p22 % r.mod_low) continue;
        std::int64_t p12 = addmod(mulmod(r.a, xb, M), mulmod(r.b, xd, M), M);
        if (p12 % r.mod_high) continue;
        out.push_back(i);
    }
    return out;
}

std::vector<LeftDivisor> AtomTable::left_divisors(const Mat2& A) const {
    std::vector<LeftDivisor> out;
    for (std::size_t i : dividing_indices(A)) {
        Mat2 C = left_divide(atoms_[i].matrix, A);
        if (!order_.contains(C)) throw std::logic_error("modular divisibility test disagrees");
        out.push_back({i, atoms_[i].tag, atoms_[i].matrix, std::move(C)});
    }
    return out;
}

} // namespace qfact
