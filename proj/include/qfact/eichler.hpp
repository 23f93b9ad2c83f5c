#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qfact/dvr.hpp"
#include "qfact/mat2.hpp"

namespace qfact {

/// The eight families of canonical right-associate representatives of atoms.
enum class AtomClass : int {
    I_upper = 1, ///< [[p, l p^n], [0, 1]]
    I_lower = 2, ///< [[1, 0], [l, p]]
    II_3 = 3,    ///< [[e p^m, p^n], [1, d p^m']], m + m' < n
    II_4 = 4,    ///< same shape, m + m' > n
    II_5 = 5,    ///< [[e p^m, p^n], [1, 0]]
    II_6 = 6,    ///< [[0, p^n], [1, d p^m']]
    II_7 = 7,    ///< [[0, p^n], [1, 0]]
    II_8 = 8,    ///< [[e p^m, p^n], [1, (e^-1 + p^k d) p^m']], m + m' = n
};

std::string to_string(AtomClass c);

/// Class and parameters of a canonical atom. Unused parameters stay zero.
/// Ordering is by class, then parameters lexicographically in declaration order.
struct AtomClassTag {
    AtomClass cls = AtomClass::I_upper;
    std::int64_t lambda = 0;
    int m = 0;
    int m_prime = 0;
    std::int64_t epsilon = 0;
    std::int64_t delta = 0;
    int k = 0;

    friend bool operator==(const AtomClassTag&, const AtomClassTag&) = default;
    friend auto operator<=>(const AtomClassTag&, const AtomClassTag&) = default;

    std::string str() const;
};

struct AtomEntry {
    AtomClassTag tag;
    Mat2 matrix;
    int norm_valuation = 0;
};

/// U = representative * unit with unit in R^x.
struct CanonicalAssociate {
    AtomClassTag tag;
    Mat2 representative;
    Mat2 unit;
};

struct LeftDivisor {
    std::size_t atom_index; ///< index into the atom table used for the search
    AtomClassTag tag;
    Mat2 atom;
    Mat2 cofactor;
};

/// E = lower * diagonal * upper (lower/upper unitriangular).
struct UnitDecomposition {
    Mat2 lower, diagonal, upper;
};

/// matrix = left_unit * source * right_unit.
struct SpecialAssociate {
    Mat2 matrix, left_unit, right_unit;
};

struct NormTraceAdj {
    Rational nr, tr;
    Mat2 adj;
};

class AtomTable;

/// The Eichler order R = [[D, p^n D], [D, D]] of level n in M_2(Q).
class EichlerOrder {
public:
    EichlerOrder(Dvr dvr, int level);

    const Dvr& dvr() const { return dvr_; }
    long prime() const { return dvr_.prime(); }
    int level() const { return level_; }
    bool is_hereditary() const { return level_ <= 1; }
    /// Throws HereditaryLevelError for levels 0 and 1.
    void require_non_hereditary() const;

    bool contains(const Mat2& A) const;
    static NormTraceAdj nr_tr_adj(const Mat2& A);

    /// The scaled entry b = b_raw / p^n.
    Rational b(const Mat2& A) const;
    /// Valuation of entry (i,j), 1-based; v_{1,2} is taken on b_raw.
    Valuation corner_valuation(const Mat2& A, int i, int j) const;
    Valuation norm_valuation(const Mat2& A) const { return dvr_.valuation(A.det()); }

    bool is_unit(const Mat2& A) const;
    bool is_cancellative(const Mat2& A) const;
    /// Atom test by the valuation criterion: v(nr) = 1, or v(b) = v(c) = 0
    /// with v(a), v(d) > 0. Rejects non-members, non-cancellative elements and units.
    bool is_atom(const Mat2& A) const;
    bool in_jacobson(const Mat2& A) const;

    /// The unique canonical atom V with U = V E, E a unit.
    CanonicalAssociate canonical_right_associate(const Mat2& U) const;
    /// U = E V with V canonical for left association (conjugate of the right form).
    CanonicalAssociate canonical_left_associate(const Mat2& U) const;

    Mat2 atom_from_tag(const AtomClassTag& tag) const;
    /// All canonical atoms with v(nr) <= max_norm_val, sorted by tag.
    std::vector<AtomEntry> enumerate_atoms(int max_norm_val) const;
    /// All canonical atoms V (v(nr V) <= v(nr A)) with V^{-1} A in R.
    std::vector<LeftDivisor> left_divisor_atoms(const Mat2& A) const;

    UnitDecomposition unit_decompose(const Mat2& E) const;
    SpecialAssociate special_associate(const Mat2& A) const;
    /// v(c) <= min(v(a),v(d)) <= v(b)+n <= min(v(a),v(d))+n <= v(c)+2n.
    bool satisfies_special_chain(const Mat2& A) const;

    /// An atom with determinant a, for any a in D with v(a) >= 1.
    Mat2 long_atom(const Rational& a) const;

    /// Exact test for V^{-1} A in R^x, both in R^*.
    bool right_associated(const Mat2& V, const Mat2& A) const;

private:
    void require_member(const Mat2& A) const;

    Dvr dvr_;
    int level_;
};

/// Canonical atoms up to a norm-valuation bound with residues precomputed,
/// so that left divisibility can be decided in Z/p^M before any rational
/// arithmetic. Immutable after construction.
class AtomTable {
public:
    AtomTable(const EichlerOrder& order, int max_norm_val);
    /// Uses the given atoms (sorted by tag) instead of the enumerated list.
    AtomTable(const EichlerOrder& order, int max_norm_val, std::vector<AtomEntry> atoms);

    const EichlerOrder& order() const { return order_; }
    int max_norm_val() const { return max_norm_val_; }
    const std::vector<AtomEntry>& atoms() const { return atoms_; }

    /// Indices of the atoms V with V^{-1} A in R. Requires v(nr A) <= max_norm_val.
    std::vector<std::size_t> dividing_indices(const Mat2& A) const;
    std::vector<LeftDivisor> left_divisors(const Mat2& A) const;

private:
    void prepare_residues();

    struct Residues {
        std::int64_t a, b, c, d; ///< adjugate entries mod p^M
        std::int64_t mod_low;    ///< p^{v(nr V)}
        std::int64_t mod_high;   ///< p^{v(nr V)+n}
        int norm_valuation;
    };

    EichlerOrder order_;
    int max_norm_val_;
    std::int64_t modulus_;
    std::vector<AtomEntry> atoms_;
    std::vector<Residues> residues_;
};

} // namespace qfact
