#pragma once
// Ambient Euclidean structure: dimension, the fixed translation vector T and,
// when N = 2n, the complex structure J in interleaved coordinates
// (x1, y1, ..., xn, yn):  J dx_k = dy_k,  J dy_k = -dx_k.  The symplectic
// form is omega(U, V) = <JU, V>.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "slab/grid.hpp"
#include "slab/kernels.hpp"

namespace slab {

struct AmbientStructure {
    int dim = 0;                      // N
    std::vector<double> translation;  // T, length N
    bool has_complex = false;         // N = 2n with the interleaved J

    AmbientStructure() = default;
    AmbientStructure(int dim_, std::vector<double> t, bool has_complex_)
        : dim(dim_), translation(std::move(t)), has_complex(has_complex_) {
        if (static_cast<int>(translation.size()) != dim)
            throw std::invalid_argument("ambient: translation vector has wrong dimension");
        if (has_complex && dim % 2 != 0)
            throw std::invalid_argument("ambient: complex structure needs even dimension");
    }
};

// (Jv)_{2k} = -v_{2k+1}, (Jv)_{2k+1} = v_{2k}, componentwise on a plain vector.
inline std::vector<double> j_apply(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k + 1 < v.size(); k += 2) {
        out[k] = -v[k + 1];
        out[k + 1] = v[k];
    }
    return out;
}

// Same action on a block of component node arrays.
inline std::vector<NodeArray> j_apply_block(const std::vector<NodeArray>& w) {
    const auto& K = kernels::active();
    std::vector<NodeArray> out(w.size());
    for (std::size_t k = 0; k + 1 < w.size(); k += 2) {
        out[k].resize(w[k + 1].size());
        out[k + 1] = w[k];
        K.scale(out[k].data(), w[k + 1].data(), -1.0, w[k + 1].size());
    }
    return out;
}

} // namespace slab
