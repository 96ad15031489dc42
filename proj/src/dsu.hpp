#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace kgsum::detail {

// Union-find with path halving; used by the MST and clustering passes.
class Dsu {
  public:
    explicit Dsu(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }

    // Returns false when already joined.
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

  private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace kgsum::detail
