#include "qfact/zpk.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "qfact/dvr.hpp"
#include "qfact/error.hpp"

namespace qfact {

namespace {

std::int64_t norm_mod(std::int64_t x, std::int64_t m) {
    x %= m;
    return x < 0 ? x + m : x;
}

} // namespace

ModInt::ModInt(std::int64_t value, std::int64_t modulus) : v(norm_mod(value, modulus)), mod(modulus) {
    if (modulus < 1) throw DomainError("modulus must be positive");
}

ModInt operator+(ModInt x, ModInt y) {
    std::int64_t s = x.v + y.v;
    if (s >= x.mod) s -= x.mod;
    x.v = s;
    return x;
}

ModInt operator-(ModInt x, ModInt y) {
    std::int64_t s = x.v - y.v;
    if (s < 0) s += x.mod;
    x.v = s;
    return x;
}

ModInt operator*(ModInt x, ModInt y) {
    x.v = static_cast<std::int64_t>(static_cast<__int128>(x.v) * y.v % x.mod);
    return x;
}

std::ostream& operator<<(std::ostream& os, const ModInt& x) { return os << x.v; }

ChainRing::ChainRing(long p, int k) : p_(p), k_(k), mod_(Dvr(p).modulus(k)) {
    if (k < 1) throw DomainError("exponent must be positive");
}

std::int64_t ChainRing::reduce(std::int64_t x) const { return norm_mod(x, mod_); }

int ChainRing::valuation(std::int64_t x) const {
    x = reduce(x);
    if (x == 0) return k_;
    int e = 0;
    while (x % p_ == 0) {
        x /= p_;
        ++e;
    }
    return e;
}

std::int64_t ChainRing::pow_p(int e) const {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= p_;
    return r;
}

std::int64_t ChainRing::mul(std::int64_t x, std::int64_t y) const {
    return static_cast<std::int64_t>(static_cast<__int128>(reduce(x)) * reduce(y) % mod_);
}

std::int64_t ChainRing::inverse(std::int64_t u) const {
    // extended Euclid
    std::int64_t a = reduce(u), m = mod_;
    std::int64_t x0 = 1, x1 = 0;
    std::int64_t r0 = a, r1 = m;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    }
    if (r0 != 1) throw DomainError("not a unit modulo p^k");
    return reduce(x0);
}

namespace {

// row -= q * pivot
void axpy(const ChainRing& R, ZVec& row, std::int64_t q, const ZVec& pivot) {
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = R.reduce(row[i] - R.mul(q, pivot[i]));
}

bool all_zero(const ZVec& v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

} // namespace

Submodule Submodule::span(ChainRing ring, int n, const std::vector<ZVec>& generators) {
    const ChainRing& R = ring;
    std::vector<ZVec> work;
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != n) throw DomainError("generator has wrong length");
        ZVec r(n);
        for (int i = 0; i < n; ++i) r[i] = R.reduce(g[i]);
        if (!all_zero(r)) work.push_back(std::move(r));
    }
    Submodule out(ring, n);
    std::vector<int> pivot_col;
    for (int col = 0; col < n; ++col) {
        int best = -1, best_e = R.exponent();
        for (std::size_t i = 0; i < work.size(); ++i) {
            int e = R.valuation(work[i][col]);
            if (e < best_e) {
                best_e = e;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) continue;
        ZVec pivot = work[best];
        work.erase(work.begin() + best);
        // scale so that the pivot entry is exactly p^e
        std::int64_t unit = pivot[col] / R.pow_p(best_e);
        std::int64_t inv = R.inverse(unit);
        for (auto& x : pivot) x = R.mul(x, inv);
        for (auto& row : work) {
            if (row[col] == 0) continue;
            axpy(R, row, row[col] / R.pow_p(best_e), pivot);
        }
        ZVec sat(n);
        for (int i = 0; i < n; ++i) sat[i] = R.mul(pivot[i], R.pow_p(R.exponent() - best_e));
        if (!all_zero(sat)) work.push_back(std::move(sat));
        work.erase(std::remove_if(work.begin(), work.end(), all_zero), work.end());
        out.rows_.push_back(std::move(pivot));
        pivot_col.push_back(col);
    }
    // reduce entries above each pivot into [0, p^e)
    for (std::size_t i = 0; i < out.rows_.size(); ++i) {
        const int col = pivot_col[i];
        const std::int64_t pe = out.rows_[i][col];
        for (std::size_t j = 0; j < i; ++j) {
            std::int64_t x = out.rows_[j][col];
            if (x >= pe) axpy(R, out.rows_[j], x / pe, out.rows_[i]);
        }
    }
    return out;
}

bool Submodule::contains(const ZVec& x0) const {
    if (static_cast<int>(x0.size()) != n_) throw DomainError("vector has wrong length");
    ZVec x(n_);
    for (int i = 0; i < n_; ++i) x[i] = ring_.reduce(x0[i]);
    int col = 0;
    for (const auto& row : rows_) {
        int pc = 0;
        while (row[pc] == 0) ++pc;
        for (; col < pc; ++col)
            if (x[col] != 0) return false;
        if (x[pc] % row[pc] != 0) return false;
        axpy(ring_, x, x[pc] / row[pc], row);
        col = pc + 1;
    }
    return all_zero(x);
}

bool Submodule::contains(const Submodule& other) const {
    return std::all_of(other.rows_.begin(), other.rows_.end(), [&](const ZVec& r) { return contains(r); });
}

int Submodule::length() const {
    int total = 0;
    for (const auto& row : rows_) {
        int pc = 0;
        while (row[pc] == 0) ++pc;
        total += ring_.exponent() - ring_.valuation(row[pc]);
    }
    return total;
}

std::vector<ZVec> kernel(const ChainRing& ring, const std::vector<ZVec>& matrix, int cols) {
    // Howell form of [M^T | I]; rows whose left block vanishes span the kernel.
    const int m = static_cast<int>(matrix.size());
    std::vector<ZVec> aug;
    for (int j = 0; j < cols; ++j) {
        ZVec r(m + cols, 0);
        for (int i = 0; i < m; ++i) r[i] = matrix[i].at(j);
        r[m + j] = 1;
        aug.push_back(std::move(r));
    }
    Submodule h = Submodule::span(ring, m + cols, aug);
    std::vector<ZVec> out;
    for (const auto& row : h.rows()) {
        if (std::any_of(row.begin(), row.begin() + m, [](std::int64_t x) { return x != 0; })) continue;
        out.emplace_back(row.begin() + m, row.end());
    }
    return out;
}

} // namespace qfact
