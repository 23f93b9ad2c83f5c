#include "qfact/eichler_monoid.hpp"

#include <algorithm>

#include "qfact/error.hpp"

namespace qfact {

EichlerMonoid::EichlerMonoid(const EichlerOrder& order, int bound)
    : table_(std::make_shared<const AtomTable>(order, bound)) {}

EichlerMonoid::EichlerMonoid(std::shared_ptr<const AtomTable> table) : table_(std::move(table)) {}

Mat2 EichlerMonoid::exact_left_divide(const Mat2& x, const Mat2& y) const {
    Mat2 q = left_divide(x, y);
    if (!order().contains(q)) throw DomainError("not a left divisor: " + x.str());
    return q;
}

Mat2 EichlerMonoid::exact_right_divide(const Mat2& y, const Mat2& x) const {
    Mat2 q = right_divide(y, x);
    if (!order().contains(q)) throw DomainError("not a right divisor: " + x.str());
    return q;
}

int EichlerMonoid::norm_valuation(const Mat2& x) const {
    Valuation v = order().norm_valuation(x);
    if (v.is_infinite()) throw DomainError("zero divisor: " + x.str());
    return v.value();
}

std::vector<LeftDivisor> EichlerMonoid::left_divisor_atoms(const Mat2& x) const {
    if (norm_valuation(x) > bound())
        throw DomainError("norm valuation " + std::to_string(norm_valuation(x)) +
                          " exceeds the configured bound " + std::to_string(bound()));
    return table_->left_divisors(x);
}

std::size_t EichlerMonoid::index_of(const AtomClassTag& tag) const {
    const auto& atoms = table_->atoms();
    auto it = std::lower_bound(atoms.begin(), atoms.end(), tag,
                               [](const AtomEntry& e, const AtomClassTag& t) { return e.tag < t; });
    if (it == atoms.end() || it->tag != tag)
        throw DomainError("atom outside the table bound: " + tag.str());
    return static_cast<std::size_t>(it - atoms.begin());
}

Associate<Mat2> EichlerMonoid::canonical_right_associate(const Mat2& x) const {
    CanonicalAssociate c = order().canonical_right_associate(x);
    return {index_of(c.tag), std::move(c.representative), std::move(c.unit)};
}

Associate<Mat2> EichlerMonoid::canonical_left_associate(const Mat2& x) const {
    CanonicalAssociate c = order().canonical_left_associate(x);
    return {index_of(c.tag), std::move(c.representative), std::move(c.unit)};
}

std::vector<int> EichlerMonoid::atom_norm_valuations() const {
    std::vector<int> out;
    out.reserve(atom_count());
    for (const auto& e : table_->atoms()) out.push_back(e.norm_valuation);
    return out;
}

} // namespace qfact
