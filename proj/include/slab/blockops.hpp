#pragma once
// Region-restricted wrappers around the kernel table.  Running node passes
// row-by-row keeps boundary garbage (or exact zeros of compactly supported
// fields) untouched outside the region.

#include "slab/grid.hpp"
#include "slab/kernels.hpp"

namespace slab::bk {

inline void zero(const Region& r, NodeArray& dst) {
    r.for_each_row([&](std::size_t off, std::size_t len) {
        std::fill(dst.begin() + off, dst.begin() + off + len, 0.0);
    });
}
inline void copy(const Region& r, NodeArray& dst, const NodeArray& a) {
    r.for_each_row([&](std::size_t off, std::size_t len) {
        std::copy(a.begin() + off, a.begin() + off + len, dst.begin() + off);
    });
}
inline void add(const Region& r, NodeArray& dst, const NodeArray& a, const NodeArray& b) {
    const auto& K = kernels::active();
    r.for_each_row([&](std::size_t off, std::size_t len) {
        K.add(dst.data() + off, a.data() + off, b.data() + off, len);
    });
}
inline void sub(const Region& r, NodeArray& dst, const NodeArray& a, const NodeArray& b) {
    const auto& K = kernels::active();
    r.for_each_row([&](std::size_t off, std::size_t len) {
        K.sub(dst.data() + off, a.data() + off, b.data() + off, len);
    });
}
inline void mul(const Region& r, NodeArray& dst, const NodeArray& a, const NodeArray& b) {
    const auto& K = kernels::active();
    r.for_each_row([&](std::size_t off, std::size_t len) {
        K.mul(dst.data() + off, a.data() + off, b.data() + off, len);
    });
}
inline void fma(const Region& r, NodeArray& dst, const NodeArray& a, const NodeArray& b) {
    const auto& K = kernels::active();
    r.for_each_row([&](std::size_t off, std::size_t len) {
        K.fma_acc(dst.data() + off, a.data() + off, b.data() + off, len);
    });
}
inline void fnma(const Region& r, NodeArray& dst, const NodeArray& a, const NodeArray& b) {
    const auto& K = kernels::active();
    r.for_each_row([&](std::size_t off, std::size_t len) {
        K.fnma_acc(dst.data() + off, a.data() + off, b.data() + off, len);
    });
}
inline void scale(const Region& r, NodeArray& dst, const NodeArray& a, double s) {
    const auto& K = kernels::active();
    r.for_each_row([&](std::size_t off, std::size_t len) {
        K.scale(dst.data() + off, a.data() + off, s, len);
    });
}
inline void axpy(const Region& r, NodeArray& dst, const NodeArray& a, double s) {
    const auto& K = kernels::active();
    r.for_each_row([&](std::size_t off, std::size_t len) {
        K.axpy(dst.data() + off, a.data() + off, s, len);
    });
}

inline double max_abs(const Region& r, const NodeArray& a) {
    double m = 0.0;
    r.for_each_row([&](std::size_t off, std::size_t len) {
        const double v = kernels::reduce_max_abs(a.data() + off, len);
        if (v > m) m = v;
    });
    return m;
}

// Region with an absolute per-axis margin (layers from every face).
inline Region margin_region(const ParameterGrid& grid, int layers) {
    Region r;
    r.n = grid.n;
    r.grid = &grid;
    for (int a = 0; a < grid.n; ++a) {
        r.lo[a] = layers;
        r.hi[a] = grid.nodes[a] - layers;
    }
    return r;
}

} // namespace slab::bk
