#include "slab/geometry.hpp"

#include <stdexcept>

#include "slab/kernels.hpp"

namespace slab {

namespace {

// adjugate-based inverse for n <= 3, entrywise over node arrays
void inverse_from_adjugate(const kernels::Ops& K, int n, const std::vector<NodeArray>& g,
                           const NodeArray& det, std::vector<NodeArray>& ginv,
                           std::size_t len) {
    NodeArray t(len), adj(len);
    auto at = [&](int i, int j) -> const NodeArray& { return g[sym2_index(i, j)]; };
    if (n == 1) {
        NodeArray ones(len, 1.0);
        K.div(ginv[0].data(), ones.data(), det.data(), len);
        return;
    }
    if (n == 2) {
        K.div(ginv[sym2_index(0, 0)].data(), at(1, 1).data(), det.data(), len);
        K.div(ginv[sym2_index(1, 1)].data(), at(0, 0).data(), det.data(), len);
        K.scale(t.data(), at(0, 1).data(), -1.0, len);
        K.div(ginv[sym2_index(0, 1)].data(), t.data(), det.data(), len);
        return;
    }
    // n == 3: cofactors of the symmetric matrix
    auto cof = [&](int i0, int j0, int i1, int j1, int i2, int j2, int i3, int j3, double sign) {
        K.mul(adj.data(), at(i0, j0).data(), at(i1, j1).data(), len);
        K.fnma_acc(adj.data(), at(i2, j2).data(), at(i3, j3).data(), len);
        if (sign < 0) K.scale(adj.data(), adj.data(), -1.0, len);
    };
    cof(1, 1, 2, 2, 1, 2, 1, 2, +1.0);
    K.div(ginv[sym2_index(0, 0)].data(), adj.data(), det.data(), len);
    cof(0, 2, 1, 2, 0, 1, 2, 2, +1.0);
    K.div(ginv[sym2_index(0, 1)].data(), adj.data(), det.data(), len);
    cof(0, 1, 1, 2, 0, 2, 1, 1, +1.0);
    K.div(ginv[sym2_index(0, 2)].data(), adj.data(), det.data(), len);
    cof(0, 0, 2, 2, 0, 2, 0, 2, +1.0);
    K.div(ginv[sym2_index(1, 1)].data(), adj.data(), det.data(), len);
    cof(0, 1, 0, 2, 0, 0, 1, 2, +1.0);
    K.div(ginv[sym2_index(1, 2)].data(), adj.data(), det.data(), len);
    cof(0, 0, 1, 1, 0, 1, 0, 1, +1.0);
    K.div(ginv[sym2_index(2, 2)].data(), adj.data(), det.data(), len);
}

void determinant(const kernels::Ops& K, int n, const std::vector<NodeArray>& g,
                 NodeArray& det, std::size_t len) {
    auto at = [&](int i, int j) -> const NodeArray& { return g[sym2_index(i, j)]; };
    if (n == 1) {
        det = at(0, 0);
        return;
    }
    if (n == 2) {
        K.mul(det.data(), at(0, 0).data(), at(1, 1).data(), len);
        K.fnma_acc(det.data(), at(0, 1).data(), at(0, 1).data(), len);
        return;
    }
    // n == 3, cofactor expansion along the first row
    NodeArray t(len);
    K.mul(t.data(), at(1, 1).data(), at(2, 2).data(), len);
    K.fnma_acc(t.data(), at(1, 2).data(), at(1, 2).data(), len);
    K.mul(det.data(), at(0, 0).data(), t.data(), len);
    K.mul(t.data(), at(0, 1).data(), at(2, 2).data(), len);
    K.fnma_acc(t.data(), at(1, 2).data(), at(0, 2).data(), len);
    K.fnma_acc(det.data(), at(0, 1).data(), t.data(), len);
    K.mul(t.data(), at(0, 1).data(), at(1, 2).data(), len);
    K.fnma_acc(t.data(), at(1, 1).data(), at(0, 2).data(), len);
    K.fma_acc(det.data(), at(0, 2).data(), t.data(), len);
}

} // namespace

MetricData metric_data(const ImmersedPatch& patch, int level) {
    const auto& K = kernels::active();
    const int n = patch.n();
    const int N = patch.amb();
    const int s2 = sym2_count(n);
    const std::size_t len = patch.grid.node_count();

    if (level >= 1 && patch.jets.order < 2)
        throw std::invalid_argument("metric_data: level 1 needs second jets");
    if (level >= 2 && patch.jets.order < 3)
        throw std::invalid_argument("metric_data: level 2 needs third jets");

    MetricData md;
    md.n = n;
    md.level = level;
    md.g.assign(s2, NodeArray(len, 0.0));
    md.ginv.assign(s2, NodeArray(len, 0.0));
    md.det.assign(len, 0.0);
    md.sqrt_det.assign(len, 0.0);

    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            NodeArray& gij = md.g[sym2_index(i, j)];
            for (int A = 0; A < N; ++A)
                K.fma_acc(gij.data(), patch.d1(i, A).data(), patch.d1(j, A).data(), len);
        }
    determinant(K, n, md.g, md.det, len);
    K.sqrt_of(md.sqrt_det.data(), md.det.data(), len);
    inverse_from_adjugate(K, n, md.g, md.det, md.ginv, len);
    if (level == 0) return md;

    // dg[k][ij] = <X_ik, X_j> + <X_i, X_jk>
    md.dg.assign(static_cast<std::size_t>(n) * s2, NodeArray(len, 0.0));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                NodeArray& d = md.dg[k * s2 + sym2_index(i, j)];
                for (int A = 0; A < N; ++A) {
                    K.fma_acc(d.data(), patch.d2(i, k, A).data(), patch.d1(j, A).data(), len);
                    K.fma_acc(d.data(), patch.d1(i, A).data(), patch.d2(j, k, A).data(), len);
                }
            }

    // Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    md.gamma.assign(static_cast<std::size_t>(n) * s2, NodeArray(len, 0.0));
    NodeArray t(len), acc(len);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::fill(acc.begin(), acc.end(), 0.0);
                for (int l = 0; l < n; ++l) {
                    K.add(t.data(), md.dg_at(i, j, l).data(), md.dg_at(j, i, l).data(), len);
                    K.sub(t.data(), t.data(), md.dg_at(l, i, j).data(), len);
                    K.fma_acc(acc.data(), md.ginv_at(k, l).data(), t.data(), len);
                }
                K.scale(md.gamma[k * s2 + sym2_index(i, j)].data(), acc.data(), 0.5, len);
            }

    // d_m g^{ij} = -g^{ia} (d_m g_ab) g^{bj}
    md.dginv.assign(static_cast<std::size_t>(n) * s2, NodeArray(len, 0.0));
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::fill(acc.begin(), acc.end(), 0.0);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        K.mul(t.data(), md.ginv_at(i, a).data(), md.dg_at(m, a, b).data(), len);
                        K.fma_acc(acc.data(), t.data(), md.ginv_at(b, j).data(), len);
                    }
                K.scale(md.dginv[m * s2 + sym2_index(i, j)].data(), acc.data(), -1.0, len);
            }
    if (level == 1) return md;

    // dd g[(kl)][ij] = <X_ikl, X_j> + <X_ik, X_jl> + <X_il, X_jk> + <X_i, X_jkl>
    md.ddg.assign(static_cast<std::size_t>(s2) * s2, NodeArray(len, 0.0));
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    NodeArray& d = md.ddg[sym2_index(k, l) * s2 + sym2_index(i, j)];
                    for (int A = 0; A < N; ++A) {
                        K.fma_acc(d.data(), patch.d3(i, k, l, A).data(), patch.d1(j, A).data(), len);
                        K.fma_acc(d.data(), patch.d2(i, k, A).data(), patch.d2(j, l, A).data(), len);
                        K.fma_acc(d.data(), patch.d2(i, l, A).data(), patch.d2(j, k, A).data(), len);
                        K.fma_acc(d.data(), patch.d1(i, A).data(), patch.d3(j, k, l, A).data(), len);
                    }
                }

    // d_q d_m g^{ij} (stored at sym2(m,q), evaluated with m <= q):
    // -( d_q g^{ia} dg_m g^{bj} term + g^{ia} ddg_{mq} g^{bj} + g^{ia} dg_m d_q g^{bj} )
    md.ddginv.assign(static_cast<std::size_t>(s2) * s2, NodeArray(len, 0.0));
    for (int m = 0; m < n; ++m)
        for (int q = m; q < n; ++q)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    std::fill(acc.begin(), acc.end(), 0.0);
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) {
                            K.mul(t.data(), md.dginv_at(q, i, a).data(), md.dg_at(m, a, b).data(), len);
                            K.fma_acc(acc.data(), t.data(), md.ginv_at(b, j).data(), len);
                            K.mul(t.data(), md.ginv_at(i, a).data(), md.ddg_at(m, q, a, b).data(), len);
                            K.fma_acc(acc.data(), t.data(), md.ginv_at(b, j).data(), len);
                            K.mul(t.data(), md.ginv_at(i, a).data(), md.dg_at(m, a, b).data(), len);
                            K.fma_acc(acc.data(), t.data(), md.dginv_at(q, b, j).data(), len);
                        }
                    K.scale(md.ddginv[sym2_index(m, q) * s2 + sym2_index(i, j)].data(), acc.data(),
                            -1.0, len);
                }

    // d_m Gamma^k_ij
    md.dgamma.assign(static_cast<std::size_t>(n) * n * s2, NodeArray(len, 0.0));
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    std::fill(acc.begin(), acc.end(), 0.0);
                    for (int l = 0; l < n; ++l) {
                        K.add(t.data(), md.dg_at(i, j, l).data(), md.dg_at(j, i, l).data(), len);
                        K.sub(t.data(), t.data(), md.dg_at(l, i, j).data(), len);
                        K.fma_acc(acc.data(), md.dginv_at(m, k, l).data(), t.data(), len);
                        K.add(t.data(), md.ddg_at(m, i, j, l).data(), md.ddg_at(m, j, i, l).data(), len);
                        K.sub(t.data(), t.data(), md.ddg_at(m, l, i, j).data(), len);
                        K.fma_acc(acc.data(), md.ginv_at(k, l).data(), t.data(), len);
                    }
                    K.scale(md.dgamma[(m * n + k) * s2 + sym2_index(i, j)].data(), acc.data(), 0.5,
                            len);
                }
    return md;
}

const std::vector<NodeArray>& SffData::framed() const {
    if (!framed_available)
        throw std::runtime_error("sff: framed components need a Lagrangian patch");
    return framed_;
}

const std::vector<NodeArray>& SffData::cubic() const {
    if (!framed_available)
        throw std::runtime_error("sff: cubic form needs a Lagrangian patch");
    return cubic_;
}

SffData second_fundamental_form(const ImmersedPatch& patch, const MetricData& metric) {
    const auto& K = kernels::active();
    const int n = patch.n();
    const int N = patch.amb();
    const int s2 = sym2_count(n);
    const std::size_t len = patch.grid.node_count();
    if (metric.level < 1)
        throw std::invalid_argument("second_fundamental_form: needs metric level >= 1");

    SffData sff;
    sff.n = n;
    sff.amb = N;
    sff.h.assign(static_cast<std::size_t>(s2) * N, NodeArray(len, 0.0));
    sff.mean.assign(N, NodeArray(len, 0.0));

    // h_ij = X_ij - Gamma^k_ij X_k
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int A = 0; A < N; ++A) {
                NodeArray& d = sff.h[sym2_index(i, j) * N + A];
                d = patch.d2(i, j, A);
                for (int k = 0; k < n; ++k)
                    K.fnma_acc(d.data(), metric.gamma_at(k, i, j).data(), patch.d1(k, A).data(), len);
            }

    // H = g^{ij} h_ij (off-diagonal pairs count twice)
    NodeArray t(len);
    for (int A = 0; A < N; ++A)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                K.mul(t.data(), metric.ginv_at(i, j).data(), sff.h[sym2_index(i, j) * N + A].data(),
                      len);
                K.axpy(sff.mean[A].data(), t.data(), i == j ? 1.0 : 2.0, len);
            }

    if (patch.lagrangian) {
        sff.framed_available = true;
        sff.cubic_.assign(static_cast<std::size_t>(n) * s2, NodeArray(len, 0.0));
        sff.framed_.assign(static_cast<std::size_t>(n) * s2, NodeArray(len, 0.0));
        // C_ijk = <h_ij, J X_k>; with the interleaved J this is
        // sum_m ( h^{y_m} X_k^{x_m} - h^{x_m} X_k^{y_m} )
        for (int k = 0; k < n; ++k)
            for (int ij = 0; ij < s2; ++ij) {
                NodeArray& c = sff.cubic_[k * s2 + ij];
                for (int m = 0; m < n; ++m) {
                    K.fma_acc(c.data(), sff.h[ij * N + 2 * m + 1].data(), patch.d1(k, 2 * m).data(),
                              len);
                    K.fnma_acc(c.data(), sff.h[ij * N + 2 * m].data(),
                               patch.d1(k, 2 * m + 1).data(), len);
                }
            }
        // normal-bundle metric in the J-frame equals g, so h^alpha_ij = g^{alpha beta} C_ij beta
        for (int a = 0; a < n; ++a)
            for (int ij = 0; ij < s2; ++ij) {
                NodeArray& f = sff.framed_[a * s2 + ij];
                for (int b = 0; b < n; ++b)
                    K.fma_acc(f.data(), metric.ginv_at(a, b).data(), sff.cubic_[b * s2 + ij].data(),
                              len);
            }
    }
    return sff;
}

} // namespace slab
