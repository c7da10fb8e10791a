#include "slab/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace slab {

ParameterGrid::ParameterGrid(std::vector<std::array<double, 2>> window_,
                             std::vector<int> nodes_, int margin_)
    : n(static_cast<int>(window_.size())),
      window(std::move(window_)),
      nodes(std::move(nodes_)),
      margin(margin_) {
    if (n < 1 || n > kMaxDim)
        throw std::invalid_argument("grid: dimension must be 1.." + std::to_string(kMaxDim));
    if (static_cast<int>(nodes.size()) != n)
        throw std::invalid_argument("grid: node counts do not match dimension");
    spacing.resize(n);
    for (int a = 0; a < n; ++a) {
        if (nodes[a] < 5)
            throw std::invalid_argument("grid: axis " + std::to_string(a) +
                                        " needs at least 5 nodes, got " + std::to_string(nodes[a]));
        const double width = window[a][1] - window[a][0];
        if (!(width > 0.0))
            throw std::invalid_argument("grid: axis " + std::to_string(a) + " window is empty");
        spacing[a] = width / (nodes[a] - 1);
    }
    if (margin < 0 || 2 * margin + 1 >= *std::min_element(nodes.begin(), nodes.end()))
        throw std::invalid_argument("grid: too small for stencil margin " + std::to_string(margin));
    total_ = 1;
    for (int a = n - 1; a >= 0; --a) {
        strides_[a] = total_;
        total_ *= static_cast<std::size_t>(nodes[a]);
    }
}

Region ParameterGrid::interior(int extra) const {
    Region r;
    r.n = n;
    r.grid = this;
    for (int a = 0; a < n; ++a) {
        r.lo[a] = margin + extra;
        r.hi[a] = nodes[a] - margin - extra;
    }
    return r;
}

double ParameterGrid::max_spacing() const {
    double h = 0.0;
    for (int a = 0; a < n; ++a)
        if (spacing[a] > h) h = spacing[a];
    return h;
}

} // namespace slab
