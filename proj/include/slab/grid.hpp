#pragma once
// Tensor-product parameter grids, row-major node indexing and interior
// regions.  The last axis is fastest, so a region decomposes into contiguous
// rows; all per-node passes and reductions walk rows in ascending index
// order, which fixes the summation order once and for all.

#include <array>
#include <cstddef>
#include <vector>

namespace slab {

inline constexpr int kMaxDim = 3;   // parameter dimensions supported (n)
inline constexpr int kMaxAmb = 6;   // ambient dimensions (N = 2n)

// Packed symmetric index maps.  sym2: pairs i<=j; sym3: triples i<=j<=k.
inline int sym2_count(int n) { return n * (n + 1) / 2; }
inline int sym3_count(int n) { return n * (n + 1) * (n + 2) / 6; }
inline int sym2_index(int i, int j) {
    if (i > j) { const int t = i; i = j; j = t; }
    return j * (j + 1) / 2 + i;
}
inline int sym3_index(int i, int j, int k) {
    if (i > j) { const int t = i; i = j; j = t; }
    if (j > k) { const int t = j; j = k; k = t; }
    if (i > j) { const int t = i; i = j; j = t; }
    return k * (k + 1) * (k + 2) / 6 + j * (j + 1) / 2 + i;
}

using NodeArray = std::vector<double>;

struct Region; // below

struct ParameterGrid {
    int n = 0;
    std::vector<std::array<double, 2>> window;  // per-axis [a, b]
    std::vector<int> nodes;                     // m_i >= 5
    std::vector<double> spacing;                // h_i = (b-a)/(m-1)
    int margin = 0;                             // stencil margin r

    // Throws std::invalid_argument on malformed axes (m < 5, empty window).
    ParameterGrid() = default;
    ParameterGrid(std::vector<std::array<double, 2>> window_,
                  std::vector<int> nodes_, int margin_);

    std::size_t node_count() const { return total_; }
    std::size_t stride(int axis) const { return strides_[axis]; }

    std::size_t index(const int* idx) const {
        std::size_t off = 0;
        for (int a = 0; a < n; ++a) off += static_cast<std::size_t>(idx[a]) * strides_[a];
        return off;
    }
    void unindex(std::size_t off, int* idx) const {
        for (int a = 0; a < n; ++a) {
            idx[a] = static_cast<int>(off / strides_[a]);
            off %= strides_[a];
        }
    }
    double coord(int axis, int node) const {
        return window[axis][0] + spacing[axis] * node;
    }

    // Interior region: nodes at least (margin + extra) layers from every face.
    Region interior(int extra = 0) const;
    double max_spacing() const;

private:
    std::array<std::size_t, kMaxDim> strides_{};
    std::size_t total_ = 0;
};

struct Region {
    int n = 0;
    std::array<int, kMaxDim> lo{};   // inclusive
    std::array<int, kMaxDim> hi{};   // exclusive
    const ParameterGrid* grid = nullptr;

    bool empty() const {
        for (int a = 0; a < n; ++a)
            if (lo[a] >= hi[a]) return true;
        return n == 0;
    }
    std::size_t count() const {
        if (empty()) return 0;
        std::size_t c = 1;
        for (int a = 0; a < n; ++a) c *= static_cast<std::size_t>(hi[a] - lo[a]);
        return c;
    }

    // Visit contiguous rows (offset, length) in ascending node order.
    template <typename Fn>
    void for_each_row(Fn&& fn) const {
        if (empty()) return;
        std::array<int, kMaxDim> idx{};
        for (int a = 0; a < n; ++a) idx[a] = lo[a];
        const std::size_t len = static_cast<std::size_t>(hi[n - 1] - lo[n - 1]);
        for (;;) {
            fn(grid->index(idx.data()), len);
            int a = n - 2;
            for (; a >= 0; --a) {
                if (++idx[a] < hi[a]) break;
                idx[a] = lo[a];
            }
            if (a < 0) break;
        }
    }

    // Visit nodes with their multi-index, ascending order.
    template <typename Fn>
    void for_each_node(Fn&& fn) const {
        if (empty()) return;
        std::array<int, kMaxDim> idx{};
        for (int a = 0; a < n; ++a) idx[a] = lo[a];
        for (;;) {
            fn(grid->index(idx.data()), idx.data());
            int a = n - 1;
            for (; a >= 0; --a) {
                if (++idx[a] < hi[a]) break;
                idx[a] = lo[a];
            }
            if (a < 0) break;
        }
    }
};

inline NodeArray zeros(const ParameterGrid& grid) { return NodeArray(grid.node_count(), 0.0); }

} // namespace slab
