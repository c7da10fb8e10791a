#pragma once
// Pointwise geometric tensors of a patch: induced metric with inverse and
// derivatives, Christoffel symbols, second fundamental form and mean
// curvature.  Everything is stored as packed-symmetric blocks of node arrays
// and assembled through the kernel layer.

#include <vector>

#include "slab/patch.hpp"

namespace slab {

// Derivative depth of the metric data:
//   level 0: g, g^{-1}, det, sqrt(det)            (jets order >= 1)
//   level 1: + dg, Gamma, d(g^{-1})               (jets order >= 2)
//   level 2: + ddg, dd(g^{-1}), dGamma            (jets order >= 3)
struct MetricData {
    int n = 0;
    int level = 0;
    std::vector<NodeArray> g;       // sym2
    std::vector<NodeArray> ginv;    // sym2
    NodeArray det;
    NodeArray sqrt_det;
    std::vector<NodeArray> dg;      // n * sym2      [k][ij] = d_k g_ij
    std::vector<NodeArray> gamma;   // n * sym2      [k][ij] = Gamma^k_ij
    std::vector<NodeArray> dginv;   // n * sym2      [k][ij] = d_k g^ij
    std::vector<NodeArray> ddg;     // sym2 * sym2   [kl][ij] = d_k d_l g_ij
    std::vector<NodeArray> ddginv;  // sym2 * sym2
    std::vector<NodeArray> dgamma;  // n * n * sym2  [m][k][ij] = d_m Gamma^k_ij

    const NodeArray& g_at(int i, int j) const { return g[sym2_index(i, j)]; }
    const NodeArray& ginv_at(int i, int j) const { return ginv[sym2_index(i, j)]; }
    const NodeArray& dg_at(int k, int i, int j) const {
        return dg[k * (n * (n + 1) / 2) + sym2_index(i, j)];
    }
    const NodeArray& gamma_at(int k, int i, int j) const {
        return gamma[k * (n * (n + 1) / 2) + sym2_index(i, j)];
    }
    const NodeArray& dginv_at(int k, int i, int j) const {
        return dginv[k * (n * (n + 1) / 2) + sym2_index(i, j)];
    }
    const NodeArray& ddg_at(int k, int l, int i, int j) const {
        return ddg[sym2_index(k, l) * (n * (n + 1) / 2) + sym2_index(i, j)];
    }
    const NodeArray& ddginv_at(int k, int l, int i, int j) const {
        return ddginv[sym2_index(k, l) * (n * (n + 1) / 2) + sym2_index(i, j)];
    }
    const NodeArray& dgamma_at(int m, int k, int i, int j) const {
        return dgamma[(m * n + k) * (n * (n + 1) / 2) + sym2_index(i, j)];
    }
};

MetricData metric_data(const ImmersedPatch& patch, int level);

// Second fundamental form h_ij = (X_ij)^perp (ambient vectors), mean
// curvature H = g^ij h_ij (the full trace).  For Lagrangian patches the
// J-frame components h^alpha_ij and the cubic form C_ijk = <h_ij, J X_k> are
// populated; requesting them on a non-Lagrangian patch throws.
struct SffData {
    int n = 0;
    int amb = 0;
    bool framed_available = false;
    std::vector<NodeArray> h;        // sym2 * N   [ij*N + A]
    std::vector<NodeArray> mean;     // N
    std::vector<NodeArray> framed_;  // n * sym2   [alpha][ij]
    std::vector<NodeArray> cubic_;   // n * sym2   [k][ij] = C_ijk

    const NodeArray& h_at(int i, int j, int A) const { return h[sym2_index(i, j) * amb + A]; }
    const std::vector<NodeArray>& framed() const;
    const std::vector<NodeArray>& cubic() const;
};

SffData second_fundamental_form(const ImmersedPatch& patch, const MetricData& metric);

} // namespace slab
