// Disjoint sets with union by size and path halving.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace frozenperc {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::int32_t>(i);
    }

    std::int32_t find(std::int32_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    /// Returns the surviving root.
    std::int32_t unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return a;
    }

    std::int64_t set_size(std::int32_t i) { return size_[find(i)]; }
    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::int32_t> parent_;
    std::vector<std::int64_t> size_;
};

}  // namespace frozenperc
