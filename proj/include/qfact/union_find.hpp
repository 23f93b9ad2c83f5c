#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace qfact {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true when x and y were in different components.
    bool unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (rank_[x] < rank_[y]) std::swap(x, y);
        parent_[y] = x;
        if (rank_[x] == rank_[y]) ++rank_[x];
        --components_;
        return true;
    }

    std::size_t components() const { return components_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned char> rank_;
    std::size_t components_;
};

} // namespace qfact
