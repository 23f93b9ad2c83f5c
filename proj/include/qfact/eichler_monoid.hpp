#pragma once

#include <memory>
#include <vector>

#include "qfact/eichler.hpp"
#include "qfact/factorize.hpp"

namespace qfact {

/// The monoid R^* of an Eichler order of level n >= 2, restricted to elements
/// with v(nr) <= bound. Atom indices refer to the canonical atom table.
class EichlerMonoid {
public:
    using element_type = Mat2;

    EichlerMonoid(const EichlerOrder& order, int bound);
    /// Shares an existing table; used to substitute a modified atom list.
    explicit EichlerMonoid(std::shared_ptr<const AtomTable> table);

    const EichlerOrder& order() const { return table_->order(); }
    const AtomTable& table() const { return *table_; }
    int bound() const { return table_->max_norm_val(); }

    Mat2 identity() const { return Mat2::identity(); }
    bool is_unit(const Mat2& x) const { return order().is_unit(x); }
    bool is_cancellative(const Mat2& x) const { return order().is_cancellative(x); }
    Mat2 multiply(const Mat2& x, const Mat2& y) const { return x * y; }
    /// x^{-1} y; throws DomainError unless the quotient lies in the order.
    Mat2 exact_left_divide(const Mat2& x, const Mat2& y) const;
    /// y x^{-1}; throws DomainError unless the quotient lies in the order.
    Mat2 exact_right_divide(const Mat2& y, const Mat2& x) const;
    int norm_valuation(const Mat2& x) const;

    std::vector<LeftDivisor> left_divisor_atoms(const Mat2& x) const;
    const Mat2& atom(std::size_t index) const { return table_->atoms()[index].matrix; }
    std::size_t atom_count() const { return table_->atoms().size(); }

    /// x = atom(index) * unit.
    Associate<Mat2> canonical_right_associate(const Mat2& x) const;
    /// x = unit * left_atom(index).
    Associate<Mat2> canonical_left_associate(const Mat2& x) const;
    Mat2 left_atom(std::size_t index) const { return atom(index).adj(); }

    /// Norm valuations of all canonical atoms up to bound().
    std::vector<int> atom_norm_valuations() const;

private:
    std::size_t index_of(const AtomClassTag& tag) const;

    std::shared_ptr<const AtomTable> table_;
};

} // namespace qfact
