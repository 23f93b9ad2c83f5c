#pragma once

// Rigid factorizations over an abstract atomic monoid.
//
// A factorization is kept in canonical form: the atoms in positions
// 1..k-1 are canonical right-associate representatives and the last atom
// absorbs every unit pushed through from the left. Two rigid factorizations
// are equivalent under unit shifting iff their canonical forms coincide, so
// enumerating canonical forms produces every class exactly once.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfact/error.hpp"
#include "qfact/rational.hpp"
#include "qfact/union_find.hpp"

namespace qfact {

/// x = representative * unit (right associate) or x = unit * representative (left).
template <class E>
struct Associate {
    std::size_t index;
    E representative;
    E unit;
};

template <class P>
concept MonoidProvider =
    std::totally_ordered<typename P::element_type> &&
    requires(const P& p, const typename P::element_type& x, std::size_t i) {
        { p.identity() } -> std::convertible_to<typename P::element_type>;
        { p.is_unit(x) } -> std::convertible_to<bool>;
        { p.is_cancellative(x) } -> std::convertible_to<bool>;
        { p.multiply(x, x) } -> std::convertible_to<typename P::element_type>;
        { p.exact_left_divide(x, x) } -> std::convertible_to<typename P::element_type>;
        { p.exact_right_divide(x, x) } -> std::convertible_to<typename P::element_type>;
        { p.norm_valuation(x) } -> std::convertible_to<int>;
        { p.atom(i) } -> std::convertible_to<typename P::element_type>;
        { p.left_atom(i) } -> std::convertible_to<typename P::element_type>;
        { p.atom_count() } -> std::convertible_to<std::size_t>;
        { p.canonical_right_associate(x) } -> std::same_as<Associate<typename P::element_type>>;
        { p.canonical_left_associate(x) } -> std::same_as<Associate<typename P::element_type>>;
        { p.left_divisor_atoms(x).front().atom_index } -> std::convertible_to<std::size_t>;
        { p.left_divisor_atoms(x).front().cofactor } -> std::convertible_to<typename P::element_type>;
    };

template <class E>
struct RigidFactorization {
    E leading_unit;
    std::vector<E> atoms;

    std::size_t length() const { return atoms.size(); }
    friend bool operator==(const RigidFactorization&, const RigidFactorization&) = default;
};

inline constexpr std::size_t kDefaultMaxCount = 1'000'000;

template <MonoidProvider P>
typename P::element_type product(const P& p, const RigidFactorization<typename P::element_type>& z) {
    auto x = z.leading_unit;
    for (const auto& u : z.atoms) x = p.multiply(x, u);
    return x;
}

/// Pushes units rightwards until positions 1..k-1 hold canonical atoms.
template <MonoidProvider P>
RigidFactorization<typename P::element_type> canonicalize(
    const P& p, const RigidFactorization<typename P::element_type>& z) {
    using E = typename P::element_type;
    if (z.atoms.empty()) return z;
    RigidFactorization<E> out{p.identity(), {}};
    E carry = z.leading_unit;
    for (std::size_t i = 0; i + 1 < z.atoms.size(); ++i) {
        auto c = p.canonical_right_associate(p.multiply(carry, z.atoms[i]));
        out.atoms.push_back(std::move(c.representative));
        carry = std::move(c.unit);
    }
    out.atoms.push_back(p.multiply(carry, z.atoms.back()));
    return out;
}

/// Form with positions 2..k canonical left associates and the first atom
/// absorbing units; used for suffix comparison.
template <MonoidProvider P>
std::vector<typename P::element_type> left_canonical_atoms(
    const P& p, const RigidFactorization<typename P::element_type>& z) {
    using E = typename P::element_type;
    std::vector<E> out(z.atoms.size());
    if (z.atoms.empty()) return out;
    E carry = p.identity();
    for (std::size_t i = z.atoms.size() - 1; i >= 1; --i) {
        auto c = p.canonical_left_associate(p.multiply(z.atoms[i], carry));
        out[i] = std::move(c.representative);
        carry = std::move(c.unit);
    }
    out[0] = p.multiply(p.multiply(z.leading_unit, z.atoms[0]), carry);
    return out;
}

/// Z*(a) in compact form. Token t < atom_count stands for the canonical atom
/// with that index; larger tokens index into terminals (final atoms).
template <class E>
struct FactorizationSet {
    E source;
    E leading_unit;
    std::size_t atom_count = 0;
    std::vector<E> terminals;
    std::vector<std::vector<std::uint32_t>> sequences;

    std::size_t size() const { return sequences.size(); }
    std::size_t length(std::size_t i) const { return sequences[i].size(); }
};

namespace detail {

template <MonoidProvider P>
class Enumerator {
public:
    using E = typename P::element_type;
    using Seq = std::vector<std::uint32_t>;

    Enumerator(const P& p, std::size_t max_count) : p_(p), max_count_(max_count) {}

    const std::vector<Seq>& run(const E& b) {
        auto it = memo_.find(b);
        if (it != memo_.end()) return *it->second;
        auto result = std::make_shared<std::vector<Seq>>();
        bool split = false;
        for (const auto& d : p_.left_divisor_atoms(b)) {
            if (p_.is_unit(d.cofactor)) continue;
            split = true;
            const auto& sub = run(d.cofactor);
            if (result->size() + sub.size() > max_count_)
                throw OverflowError("factorization count exceeds " + std::to_string(max_count_));
            for (const auto& s : sub) {
                Seq seq;
                seq.reserve(s.size() + 1);
                seq.push_back(static_cast<std::uint32_t>(d.atom_index));
                seq.insert(seq.end(), s.begin(), s.end());
                result->push_back(std::move(seq));
            }
        }
        if (!split) result->push_back(Seq{terminal_token(b)});
        return *memo_.emplace(b, std::move(result)).first->second;
    }

    std::vector<E> take_terminals() { return std::move(terminals_); }

private:
    std::uint32_t terminal_token(const E& b) {
        auto it = terminal_ids_.find(b);
        if (it != terminal_ids_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(p_.atom_count() + terminals_.size());
        terminals_.push_back(b);
        terminal_ids_.emplace(b, id);
        return id;
    }

    const P& p_;
    std::size_t max_count_;
    std::map<E, std::shared_ptr<std::vector<Seq>>> memo_;
    std::map<E, std::uint32_t> terminal_ids_;
    std::vector<E> terminals_;
};

inline bool sequence_less(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
}

template <MonoidProvider P>
void require_cancellative(const P& p, const typename P::element_type& a) {
    if (!p.is_cancellative(a)) throw DomainError("zero divisor has no factorizations");
}

} // namespace detail

/// All canonical rigid factorizations of a, sorted by (length, tokens).
/// Throws OverflowError once more than max_count factorizations are found.
template <MonoidProvider P>
FactorizationSet<typename P::element_type> enumerate_factorizations(
    const P& p, const typename P::element_type& a, std::size_t max_count = kDefaultMaxCount) {
    using E = typename P::element_type;
    detail::require_cancellative(p, a);
    FactorizationSet<E> out{a, p.identity(), p.atom_count(), {}, {}};
    if (p.is_unit(a)) {
        out.leading_unit = a;
        out.sequences.push_back({});
        return out;
    }
    detail::Enumerator<P> en(p, max_count);
    out.sequences = en.run(a);
    out.terminals = en.take_terminals();
    std::sort(out.sequences.begin(), out.sequences.end(), detail::sequence_less);
    if (std::adjacent_find(out.sequences.begin(), out.sequences.end()) != out.sequences.end())
        throw std::logic_error("duplicate canonical factorization");
    return out;
}

template <MonoidProvider P>
typename P::element_type token_element(const P& p, const FactorizationSet<typename P::element_type>& s,
                                       std::uint32_t token) {
    if (token < s.atom_count) return p.atom(token);
    return s.terminals[token - s.atom_count];
}

template <MonoidProvider P>
RigidFactorization<typename P::element_type> materialize(
    const P& p, const FactorizationSet<typename P::element_type>& s, std::size_t i) {
    RigidFactorization<typename P::element_type> z{s.leading_unit, {}};
    for (auto t : s.sequences[i]) z.atoms.push_back(token_element(p, s, t));
    return z;
}

/// L(a) as a bitmask (bit k set iff k is a length), by memoized recursion
/// without listing factorizations.
template <MonoidProvider P>
std::uint64_t length_mask(const P& p, const typename P::element_type& a) {
    using E = typename P::element_type;
    detail::require_cancellative(p, a);
    if (p.is_unit(a)) return 1;
    std::map<E, std::uint64_t> memo;
    auto rec = [&](auto&& self, const E& b) -> std::uint64_t {
        auto it = memo.find(b);
        if (it != memo.end()) return it->second;
        std::uint64_t mask = 0;
        bool split = false;
        for (const auto& d : p.left_divisor_atoms(b)) {
            if (p.is_unit(d.cofactor)) continue;
            split = true;
            mask |= self(self, d.cofactor) << 1;
        }
        if (!split) mask = 2;
        memo.emplace(b, mask);
        return mask;
    };
    return rec(rec, a);
}

template <MonoidProvider P>
std::vector<int> length_set(const P& p, const typename P::element_type& a) {
    std::vector<int> out;
    std::uint64_t mask = length_mask(p, a);
    for (int k = 0; k < 64; ++k)
        if (mask >> k & 1) out.push_back(k);
    return out;
}

/// |Z*(a)| by memoized counting; saturates at UINT64_MAX.
template <MonoidProvider P>
std::uint64_t count_factorizations(const P& p, const typename P::element_type& a) {
    using E = typename P::element_type;
    detail::require_cancellative(p, a);
    if (p.is_unit(a)) return 1;
    std::map<E, std::uint64_t> memo;
    auto rec = [&](auto&& self, const E& b) -> std::uint64_t {
        auto it = memo.find(b);
        if (it != memo.end()) return it->second;
        std::uint64_t total = 0;
        bool split = false;
        for (const auto& d : p.left_divisor_atoms(b)) {
            if (p.is_unit(d.cofactor)) continue;
            split = true;
            std::uint64_t sub = self(self, d.cofactor);
            total = (total > std::numeric_limits<std::uint64_t>::max() - sub)
                        ? std::numeric_limits<std::uint64_t>::max()
                        : total + sub;
        }
        if (!split) total = 1;
        memo.emplace(b, total);
        return total;
    };
    return rec(rec, a);
}

/// Rigid distance between two factorizations of the same element:
/// the minimum of max(|y|, |y'|, 1) over decompositions z = x*y*w,
/// z' = x*y'*w with y != y' (0 when z = z'). The common prefix x and suffix
/// w are found by unit propagation via the canonical right and left forms.
template <MonoidProvider P>
int rigid_distance(const P& p, const RigidFactorization<typename P::element_type>& z1,
                   const RigidFactorization<typename P::element_type>& z2) {
    if (product(p, z1) != product(p, z2))
        throw DomainError("distance needs factorizations of the same element");
    auto c1 = canonicalize(p, z1);
    auto c2 = canonicalize(p, z2);
    if (c1.atoms == c2.atoms) return 0;
    const std::size_t k1 = c1.length(), k2 = c2.length();
    const std::size_t lo = std::min(k1, k2), hi = std::max(k1, k2);
    if (lo == 0) return static_cast<int>(hi);
    std::size_t prefix = 0;
    while (prefix + 1 < lo && c1.atoms[prefix] == c2.atoms[prefix]) ++prefix;
    auto l1 = left_canonical_atoms(p, c1);
    auto l2 = left_canonical_atoms(p, c2);
    std::size_t suffix = 0;
    while (suffix + 1 < lo && l1[k1 - 1 - suffix] == l2[k2 - 1 - suffix]) ++suffix;
    return static_cast<int>(hi - std::min(prefix + suffix, lo - 1));
}

/// Token vectors of the canonical right and left forms of every element of a
/// FactorizationSet, for fast pairwise distances.
struct DistanceTable {
    std::vector<std::vector<std::uint32_t>> right;
    std::vector<std::vector<std::uint32_t>> left;

    std::size_t size() const { return right.size(); }
    int distance(std::size_t i, std::size_t j) const {
        const auto& r1 = right[i];
        const auto& r2 = right[j];
        if (r1 == r2) return 0;
        const std::size_t k1 = r1.size(), k2 = r2.size();
        const std::size_t lo = std::min(k1, k2), hi = std::max(k1, k2);
        if (lo == 0) return static_cast<int>(hi);
        std::size_t prefix = 0;
        while (prefix + 1 < lo && r1[prefix] == r2[prefix]) ++prefix;
        const auto& l1 = left[i];
        const auto& l2 = left[j];
        std::size_t suffix = 0;
        while (suffix + 1 < lo && l1[k1 - 1 - suffix] == l2[k2 - 1 - suffix]) ++suffix;
        return static_cast<int>(hi - std::min(prefix + suffix, lo - 1));
    }
};

template <MonoidProvider P>
DistanceTable build_distance_table(const P& p, const FactorizationSet<typename P::element_type>& s) {
    using E = typename P::element_type;
    DistanceTable t;
    t.right = s.sequences;
    t.left.resize(s.size());
    // Suffix trie: node 0 is the empty suffix with carry 1. A child records
    // the left-canonical atom index of its position and the unit carried on.
    struct Node {
        E carry;
    };
    std::vector<Node> nodes{{p.identity()}};
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<std::uint32_t, std::uint32_t>> child;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> head;
    std::map<E, std::uint32_t> head_ids;
    // Head tokens live above every left-canonical index.
    const auto head_base = static_cast<std::uint32_t>(p.atom_count());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& seq = s.sequences[i];
        std::vector<std::uint32_t> left(seq.size());
        std::uint32_t node = 0;
        for (std::size_t pos = seq.size(); pos-- > 1;) {
            auto key = std::make_pair(node, seq[pos]);
            auto it = child.find(key);
            if (it == child.end()) {
                auto c = p.canonical_left_associate(p.multiply(token_element(p, s, seq[pos]), nodes[node].carry));
                nodes.push_back({std::move(c.unit)});
                auto id = static_cast<std::uint32_t>(nodes.size() - 1);
                it = child.emplace(key, std::make_pair(id, static_cast<std::uint32_t>(c.index))).first;
            }
            left[pos] = it->second.second;
            node = it->second.first;
        }
        if (!seq.empty()) {
            auto key = std::make_pair(node, seq[0]);
            auto it = head.find(key);
            if (it == head.end()) {
                E h = p.multiply(p.multiply(s.leading_unit, token_element(p, s, seq[0])), nodes[node].carry);
                auto hid = head_ids.find(h);
                if (hid == head_ids.end())
                    hid = head_ids.emplace(std::move(h), head_base + static_cast<std::uint32_t>(head_ids.size())).first;
                it = head.emplace(key, hid->second).first;
            }
            left[0] = it->second;
        }
        t.left[i] = std::move(left);
    }
    return t;
}

/// Smallest N such that the graph with edges {d <= N} on all factorizations
/// is connected. Union-find threshold sweep over stored pairwise distances,
/// or a Prim bottleneck computation when the pair table would be too large.
inline int catenary_degree(const DistanceTable& t, std::size_t pair_table_limit = 40'000'000) {
    const std::size_t n = t.size();
    if (n <= 1) return 0;
    const std::size_t pairs = n * (n - 1) / 2;
    if (pairs <= pair_table_limit) {
        std::vector<std::uint8_t> dist(pairs);
        int max_d = 0;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                int d = t.distance(i, j);
                dist[idx++] = static_cast<std::uint8_t>(std::min(d, 255));
                max_d = std::max(max_d, d);
            }
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> buckets(max_d + 1);
        idx = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                buckets[dist[idx++]].emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        UnionFind uf(n);
        for (int d = 0; d <= max_d; ++d) {
            for (auto [i, j] : buckets[d]) uf.unite(i, j);
            if (uf.components() == 1) return d;
        }
        throw std::logic_error("factorization graph is disconnected");
    }
    // Minimum spanning tree minimizes the largest edge.
    std::vector<int> best(n, std::numeric_limits<int>::max());
    std::vector<char> in_tree(n, 0);
    best[0] = 0;
    int bottleneck = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
        in_tree[u] = 1;
        bottleneck = std::max(bottleneck, best[u]);
        for (std::size_t v = 0; v < n; ++v)
            if (!in_tree[v]) best[v] = std::min(best[v], t.distance(u, v));
    }
    return bottleneck;
}

template <MonoidProvider P>
int catenary_degree(const P& p, const FactorizationSet<typename P::element_type>& s) {
    return catenary_degree(build_distance_table(p, s));
}

/// A rational or +infinity (nullopt).
struct Extended {
    std::optional<Rational> value;

    static Extended infinity() { return {}; }
    bool is_infinite() const { return !value.has_value(); }
    std::string str() const { return value ? value->str() : "inf"; }
    friend bool operator==(const Extended&, const Extended&) = default;
};

struct LengthProfile {
    std::vector<int> lengths;
    std::vector<int> delta;
    Extended elasticity;
    int catenary = 0;
    std::uint64_t count = 0;
};

inline std::vector<int> delta_of(const std::vector<int>& lengths) {
    std::vector<int> gaps;
    for (std::size_t i = 1; i < lengths.size(); ++i) gaps.push_back(lengths[i] - lengths[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
    return gaps;
}

template <class E>
std::vector<int> lengths_of(const FactorizationSet<E>& s) {
    std::vector<int> out;
    for (const auto& seq : s.sequences) out.push_back(static_cast<int>(seq.size()));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <MonoidProvider P>
LengthProfile profile_of(const P& p, const FactorizationSet<typename P::element_type>& s) {
    LengthProfile prof;
    prof.count = s.size();
    if (s.size() == 1 && s.sequences[0].empty()) {
        prof.lengths = {0};
        prof.elasticity = {Rational(1)};
        return prof;
    }
    prof.lengths = lengths_of(s);
    prof.delta = delta_of(prof.lengths);
    prof.elasticity = {Rational(mpz_class(prof.lengths.back()), mpz_class(prof.lengths.front()))};
    prof.catenary = catenary_degree(p, s);
    return prof;
}

template <MonoidProvider P>
LengthProfile length_profile(const P& p, const typename P::element_type& a,
                             std::size_t max_count = kDefaultMaxCount) {
    return profile_of(p, enumerate_factorizations(p, a, max_count));
}

/// min and max norm valuation over the atoms of the provider's table; the
/// maximum is only a lower bound for the supremum over all atoms.
template <class P>
std::pair<int, int> scan_atom_norm_valuations(const P& p) {
    auto vals = p.atom_norm_valuations();
    if (vals.empty()) throw DomainError("empty atom table");
    auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    return {*lo, *hi};
}

struct ElasticityPrediction {
    Extended rho_even;     ///< rho_{2k}
    Extended rho_odd_low;  ///< lower bound for rho_{2k+1}
    Extended rho_odd_high; ///< upper bound for rho_{2k+1}
    Extended rho;
};

/// With D = 2M/m: rho_{2k} = kD, 1 + kD <= rho_{2k+1} <= kD + floor(D/2),
/// rho = D/2. M = nullopt means M is infinite.
ElasticityPrediction elasticity_formulas(int m, std::optional<long> M, long k);

} // namespace qfact
