#include "slab/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "slab/blockops.hpp"

namespace slab {

namespace {

int out_margin(int computed, const Support& support) {
    return (support.compact && support.margin >= computed) ? 0 : computed;
}

// G = c^i X_i with ambient partials assembled from the coefficient jets:
//   d_m G = c1[m]^i X_i + c^i X_im
//   d_m d_q G = c2[mq]^i X_i + c1[m]^i X_iq + c1[q]^i X_im + c^i X_imq
struct TangentJets {
    std::vector<NodeArray> g;   // N
    std::vector<NodeArray> g1;  // n*N
    std::vector<NodeArray> g2;  // sym2*N
};

TangentJets expand_tangent_jets(const ImmersedPatch& patch, const Region& r,
                                const std::vector<NodeArray>& c,
                                const std::vector<NodeArray>& c1,
                                const std::vector<NodeArray>& c2, int order) {
    const int n = patch.n();
    const int N = patch.amb();
    TangentJets out;
    out.g.assign(N, zeros(patch.grid));
    for (int A = 0; A < N; ++A)
        for (int i = 0; i < n; ++i) bk::fma(r, out.g[A], c[i], patch.d1(i, A));
    if (order >= 1) {
        out.g1.assign(static_cast<std::size_t>(n) * N, zeros(patch.grid));
        for (int m = 0; m < n; ++m)
            for (int A = 0; A < N; ++A) {
                NodeArray& d = out.g1[m * N + A];
                for (int i = 0; i < n; ++i) {
                    bk::fma(r, d, c1[m * n + i], patch.d1(i, A));
                    bk::fma(r, d, c[i], patch.d2(i, m, A));
                }
            }
    }
    if (order >= 2) {
        out.g2.assign(static_cast<std::size_t>(sym2_count(n)) * N, zeros(patch.grid));
        for (int m = 0; m < n; ++m)
            for (int q = m; q < n; ++q)
                for (int A = 0; A < N; ++A) {
                    NodeArray& d = out.g2[sym2_index(m, q) * N + A];
                    for (int i = 0; i < n; ++i) {
                        bk::fma(r, d, c2[sym2_index(m, q) * n + i], patch.d1(i, A));
                        bk::fma(r, d, c1[m * n + i], patch.d2(i, q, A));
                        bk::fma(r, d, c1[q * n + i], patch.d2(i, m, A));
                        bk::fma(r, d, c[i], patch.d3(i, m, q, A));
                    }
                }
    }
    return out;
}

// <T, X_i> and, at level >= 1, <T, X_im>
std::vector<NodeArray> translation_tangent(const ImmersedPatch& patch,
                                           const std::vector<double>& T, const Region& r) {
    const int n = patch.n();
    std::vector<NodeArray> ti(n, zeros(patch.grid));
    for (int i = 0; i < n; ++i)
        for (int A = 0; A < patch.amb(); ++A)
            if (T[A] != 0.0) bk::axpy(r, ti[i], patch.d1(i, A), T[A]);
    return ti;
}

} // namespace

std::vector<NodeArray> gradient_block(const ImmersedPatch& patch, const MetricData& metric,
                                      const ScalarField& f) {
    if (f.order < 1) throw std::invalid_argument("gradient: field carries no first partials");
    const int n = patch.n();
    const int N = patch.amb();
    const Region r = bk::margin_region(patch.grid, std::max(patch.grid.margin, f.margin));
    std::vector<NodeArray> coef(n, zeros(patch.grid));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) bk::fma(r, coef[i], metric.ginv_at(i, j), f.d1[j]);
    std::vector<NodeArray> g(N, zeros(patch.grid));
    for (int A = 0; A < N; ++A)
        for (int i = 0; i < n; ++i) bk::fma(r, g[A], coef[i], patch.d1(i, A));
    return g;
}

ScalarField drifted_laplacian(const ImmersedPatch& patch, const MetricData& metric,
                              const std::vector<double>& T, const ScalarField& f,
                              bool with_gradient) {
    const int n = patch.n();
    if (f.order < 2) throw std::invalid_argument("drifted_laplacian: field needs second partials");
    if (metric.level < 1) throw std::invalid_argument("drifted_laplacian: needs metric level >= 1");
    if (with_gradient &&
        (f.order < 3 || metric.level < 2 || patch.jets.order < 3))
        throw std::invalid_argument("drifted_laplacian: gradient output needs third-order data");

    const int computed = std::max(patch.grid.margin, f.margin);
    const Region r = bk::margin_region(patch.grid, computed);
    ScalarField out;
    out.order = with_gradient ? 1 : 0;
    out.support = f.support;
    out.margin = out_margin(computed, f.support);
    out.f = zeros(patch.grid);
    if (with_gradient) out.d1.assign(n, zeros(patch.grid));

    const std::vector<NodeArray> ti = translation_tangent(patch, T, r);
    NodeArray t(patch.grid.node_count(), 0.0), t2(patch.grid.node_count(), 0.0);

    // Delta f + <T, grad f>
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bk::copy(r, t, f.d2_at(i, j));
            for (int k = 0; k < n; ++k) bk::fnma(r, t, metric.gamma_at(k, i, j), f.d1[k]);
            bk::fma(r, out.f, metric.ginv_at(i, j), t);
            bk::mul(r, t, f.d1[j], ti[i]);
            bk::fma(r, out.f, metric.ginv_at(i, j), t);
        }

    if (!with_gradient) return out;

    for (int m = 0; m < n; ++m) {
        NodeArray& dm = out.d1[m];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                // d_m of g^{ij}(f_ij - Gamma^k_ij f_k)
                bk::copy(r, t, f.d2_at(i, j));
                for (int k = 0; k < n; ++k) bk::fnma(r, t, metric.gamma_at(k, i, j), f.d1[k]);
                bk::fma(r, dm, metric.dginv_at(m, i, j), t);
                bk::copy(r, t, f.d3_at(i, j, m));
                for (int k = 0; k < n; ++k) {
                    bk::fnma(r, t, metric.dgamma_at(m, k, i, j), f.d1[k]);
                    bk::fnma(r, t, metric.gamma_at(k, i, j), f.d2_at(k, m));
                }
                bk::fma(r, dm, metric.ginv_at(i, j), t);
                // d_m of g^{ij} f_j <T, X_i>
                bk::mul(r, t, f.d1[j], ti[i]);
                bk::fma(r, dm, metric.dginv_at(m, i, j), t);
                bk::mul(r, t, f.d2_at(j, m), ti[i]);
                bk::fma(r, dm, metric.ginv_at(i, j), t);
                std::fill(t2.begin(), t2.end(), 0.0);
                for (int A = 0; A < patch.amb(); ++A)
                    if (T[A] != 0.0) bk::axpy(r, t2, patch.d2(i, m, A), T[A]);
                bk::mul(r, t, f.d1[j], t2);
                bk::fma(r, dm, metric.ginv_at(i, j), t);
            }
    }
    return out;
}

VectorField normal_connection(const ImmersedPatch& patch, const MetricData& metric,
                              const VectorField& v, int dir) {
    if (v.order < 1) throw std::invalid_argument("normal_connection: field carries no partials");
    const int n = patch.n();
    const int N = patch.amb();
    const int computed = std::max(patch.grid.margin, v.margin);
    const Region r = bk::margin_region(patch.grid, computed);

    VectorField out;
    out.amb = N;
    out.order = 0;
    out.support = v.support;
    out.margin = out_margin(computed, v.support);
    out.v.assign(N, zeros(patch.grid));

    std::vector<NodeArray> pl(n, zeros(patch.grid)), pc(n, zeros(patch.grid));
    for (int l = 0; l < n; ++l)
        for (int A = 0; A < N; ++A) bk::fma(r, pl[l], v.d1_at(dir, A), patch.d1(l, A));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) bk::fma(r, pc[k], metric.ginv_at(k, l), pl[l]);
    for (int A = 0; A < N; ++A) {
        bk::copy(r, out.v[A], v.d1_at(dir, A));
        for (int k = 0; k < n; ++k) bk::fnma(r, out.v[A], pc[k], patch.d1(k, A));
    }
    return out;
}

VectorField stability_operator(const ImmersedPatch& patch, const MetricData& metric,
                               const SffData& sff, const std::vector<double>& T,
                               const VectorField& v) {
    if (!patch.lagrangian)
        throw std::runtime_error("stability_operator: unsupported on non-Lagrangian patches");
    if (v.order < 2)
        throw std::invalid_argument("stability_operator: field needs two derivative orders");
    if (metric.level < 1) throw std::invalid_argument("stability_operator: needs metric level >= 1");

    const int n = patch.n();
    const int N = patch.amb();
    const std::size_t len = patch.grid.node_count();
    const int computed = std::max(patch.grid.margin, v.margin);
    const Region r = bk::margin_region(patch.grid, computed);

    NodeArray t(len, 0.0);

    // t_i = <T, X_i>, (T^T)^i = g^{ij} t_j
    const std::vector<NodeArray> ti = translation_tangent(patch, T, r);
    std::vector<NodeArray> tt(n, zeros(patch.grid));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) bk::fma(r, tt[i], metric.ginv_at(i, j), ti[j]);

    // vl[j][l] = <d_j V, X_l>;  pc[j][k] = g^{kl} vl[j][l];  W_j = P_perp(d_j V)
    std::vector<NodeArray> vl(static_cast<std::size_t>(n) * n, zeros(patch.grid));
    std::vector<NodeArray> pc(static_cast<std::size_t>(n) * n, zeros(patch.grid));
    std::vector<NodeArray> w(static_cast<std::size_t>(n) * N, zeros(patch.grid));
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l)
            for (int A = 0; A < N; ++A)
                bk::fma(r, vl[j * n + l], v.d1_at(j, A), patch.d1(l, A));
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                bk::fma(r, pc[j * n + k], metric.ginv_at(k, l), vl[j * n + l]);
        for (int A = 0; A < N; ++A) {
            NodeArray& wa = w[j * N + A];
            bk::copy(r, wa, v.d1_at(j, A));
            for (int k = 0; k < n; ++k) bk::fnma(r, wa, pc[j * n + k], patch.d1(k, A));
        }
    }

    std::vector<NodeArray> lv(N, zeros(patch.grid));

    // Delta_perp V = g^{ij} ( P_perp(d_i W_j) - Gamma^k_ij W_k )
    std::vector<NodeArray> s1(n, zeros(patch.grid)), s2(n, zeros(patch.grid)),
        coefk(n, zeros(patch.grid)), ql(n, zeros(patch.grid)), qc(n, zeros(patch.grid));
    std::vector<NodeArray> dw(N, zeros(patch.grid));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) {
                bk::zero(r, s1[l]);
                bk::zero(r, s2[l]);
                for (int A = 0; A < N; ++A) {
                    bk::fma(r, s1[l], v.d2_at(i, j, A), patch.d1(l, A));
                    bk::fma(r, s2[l], v.d1_at(j, A), patch.d2(l, i, A));
                }
            }
            for (int k = 0; k < n; ++k) {
                bk::zero(r, coefk[k]);
                for (int l = 0; l < n; ++l) {
                    bk::fma(r, coefk[k], metric.dginv_at(i, k, l), vl[j * n + l]);
                    bk::add(r, t, s1[l], s2[l]);
                    bk::fma(r, coefk[k], metric.ginv_at(k, l), t);
                }
            }
            // ambient derivative of W_j along axis i
            for (int A = 0; A < N; ++A) {
                NodeArray& d = dw[A];
                bk::copy(r, d, v.d2_at(i, j, A));
                for (int k = 0; k < n; ++k) {
                    bk::fnma(r, d, coefk[k], patch.d1(k, A));
                    bk::fnma(r, d, pc[j * n + k], patch.d2(k, i, A));
                }
            }
            // normal projection of dW, then contract with g^{ij}
            for (int l = 0; l < n; ++l) {
                bk::zero(r, ql[l]);
                for (int A = 0; A < N; ++A) bk::fma(r, ql[l], dw[A], patch.d1(l, A));
            }
            for (int k = 0; k < n; ++k) {
                bk::zero(r, qc[k]);
                for (int l = 0; l < n; ++l) bk::fma(r, qc[k], metric.ginv_at(k, l), ql[l]);
            }
            for (int A = 0; A < N; ++A) {
                bk::copy(r, t, dw[A]);
                for (int k = 0; k < n; ++k) {
                    bk::fnma(r, t, qc[k], patch.d1(k, A));
                    bk::fnma(r, t, metric.gamma_at(k, i, j), w[k * N + A]);
                }
                bk::fma(r, lv[A], metric.ginv_at(i, j), t);
            }
        }

    // drift nabla_perp_{T^T} V = (T^T)^i W_i
    for (int A = 0; A < N; ++A)
        for (int i = 0; i < n; ++i) bk::fma(r, lv[A], tt[i], w[i * N + A]);

    // <<A,V>,A> = g^{ik} g^{jl} <h_ij, V> h_kl
    const int s2c = sym2_count(n);
    std::vector<NodeArray> hv(s2c, zeros(patch.grid));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int A = 0; A < N; ++A)
                bk::fma(r, hv[sym2_index(i, j)], sff.h_at(i, j, A), v.v[A]);
    NodeArray t2(len, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    bk::mul(r, t, metric.ginv_at(i, k), metric.ginv_at(j, l));
                    bk::mul(r, t2, t, hv[sym2_index(i, j)]);
                    for (int A = 0; A < N; ++A)
                        bk::fma(r, lv[A], t2, sff.h_at(k, l, A));
                }

    VectorField out;
    out.amb = N;
    out.order = 0;
    out.support = v.support;
    out.margin = out_margin(computed, v.support);
    out.v = std::move(lv);
    return out;
}

VectorField hamiltonian_field(const ImmersedPatch& patch, const MetricData& metric,
                              const ScalarField& f) {
    if (!patch.lagrangian)
        throw std::runtime_error("hamiltonian_field: unsupported on non-Lagrangian patches");
    if (f.order < 1) throw std::invalid_argument("hamiltonian_field: potential carries no partials");
    const int n = patch.n();
    const int order = std::min({2, f.order - 1, metric.level, patch.jets.order - 1});
    const int computed = std::max(patch.grid.margin, f.margin);
    const Region r = bk::margin_region(patch.grid, computed);

    std::vector<NodeArray> c(n, zeros(patch.grid)), c1, c2;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) bk::fma(r, c[i], metric.ginv_at(i, j), f.d1[j]);
    if (order >= 1) {
        c1.assign(static_cast<std::size_t>(n) * n, zeros(patch.grid));
        for (int m = 0; m < n; ++m)
            for (int i = 0; i < n; ++i) {
                NodeArray& d = c1[m * n + i];
                for (int j = 0; j < n; ++j) {
                    bk::fma(r, d, metric.dginv_at(m, i, j), f.d1[j]);
                    bk::fma(r, d, metric.ginv_at(i, j), f.d2_at(j, m));
                }
            }
    }
    if (order >= 2) {
        c2.assign(static_cast<std::size_t>(sym2_count(n)) * n, zeros(patch.grid));
        for (int m = 0; m < n; ++m)
            for (int q = m; q < n; ++q)
                for (int i = 0; i < n; ++i) {
                    NodeArray& d = c2[sym2_index(m, q) * n + i];
                    for (int j = 0; j < n; ++j) {
                        bk::fma(r, d, metric.ddginv_at(m, q, i, j), f.d1[j]);
                        bk::fma(r, d, metric.dginv_at(m, i, j), f.d2_at(j, q));
                        bk::fma(r, d, metric.dginv_at(q, i, j), f.d2_at(j, m));
                        bk::fma(r, d, metric.ginv_at(i, j), f.d3_at(j, m, q));
                    }
                }
    }
    TangentJets tj = expand_tangent_jets(patch, r, c, c1, c2, order);

    VectorField out;
    out.amb = patch.amb();
    out.order = order;
    out.support = f.support;
    out.margin = out_margin(computed, f.support);
    out.v = std::move(tj.g);
    out.d1 = std::move(tj.g1);
    out.d2 = std::move(tj.g2);
    return apply_complex_structure(out);
}

VectorField const_perp_field(const ImmersedPatch& patch, const MetricData& metric,
                             const std::vector<double>& y) {
    const int n = patch.n();
    const int N = patch.amb();
    if (static_cast<int>(y.size()) != N)
        throw std::invalid_argument("const_perp_field: vector has wrong dimension");
    const int order = std::min({2, metric.level, patch.jets.order - 1});
    const Region r = bk::margin_region(patch.grid, patch.grid.margin);

    // yj[j] = <y, X_j> and its parameter derivatives
    std::vector<NodeArray> yj(n, zeros(patch.grid));
    std::vector<NodeArray> dyj(static_cast<std::size_t>(n) * n, zeros(patch.grid));
    std::vector<NodeArray> ddyj(static_cast<std::size_t>(sym2_count(n)) * n, zeros(patch.grid));
    for (int j = 0; j < n; ++j)
        for (int A = 0; A < N; ++A)
            if (y[A] != 0.0) bk::axpy(r, yj[j], patch.d1(j, A), y[A]);
    if (order >= 1)
        for (int m = 0; m < n; ++m)
            for (int j = 0; j < n; ++j)
                for (int A = 0; A < N; ++A)
                    if (y[A] != 0.0) bk::axpy(r, dyj[m * n + j], patch.d2(j, m, A), y[A]);
    if (order >= 2)
        for (int m = 0; m < n; ++m)
            for (int q = m; q < n; ++q)
                for (int j = 0; j < n; ++j)
                    for (int A = 0; A < N; ++A)
                        if (y[A] != 0.0)
                            bk::axpy(r, ddyj[sym2_index(m, q) * n + j], patch.d3(j, m, q, A), y[A]);

    std::vector<NodeArray> c(n, zeros(patch.grid)), c1, c2;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) bk::fma(r, c[i], metric.ginv_at(i, j), yj[j]);
    if (order >= 1) {
        c1.assign(static_cast<std::size_t>(n) * n, zeros(patch.grid));
        for (int m = 0; m < n; ++m)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    bk::fma(r, c1[m * n + i], metric.dginv_at(m, i, j), yj[j]);
                    bk::fma(r, c1[m * n + i], metric.ginv_at(i, j), dyj[m * n + j]);
                }
    }
    if (order >= 2) {
        c2.assign(static_cast<std::size_t>(sym2_count(n)) * n, zeros(patch.grid));
        for (int m = 0; m < n; ++m)
            for (int q = m; q < n; ++q)
                for (int i = 0; i < n; ++i) {
                    NodeArray& d = c2[sym2_index(m, q) * n + i];
                    for (int j = 0; j < n; ++j) {
                        bk::fma(r, d, metric.ddginv_at(m, q, i, j), yj[j]);
                        bk::fma(r, d, metric.dginv_at(m, i, j), dyj[q * n + j]);
                        bk::fma(r, d, metric.dginv_at(q, i, j), dyj[m * n + j]);
                        bk::fma(r, d, metric.ginv_at(i, j), ddyj[sym2_index(m, q) * n + j]);
                    }
                }
    }
    TangentJets tj = expand_tangent_jets(patch, r, c, c1, c2, order);

    VectorField out;
    out.amb = N;
    out.order = order;
    out.margin = patch.grid.margin;
    out.v.assign(N, zeros(patch.grid));
    for (int A = 0; A < N; ++A) {
        NodeArray ya(patch.grid.node_count(), y[A]);
        bk::sub(r, out.v[A], ya, tj.g[A]);
    }
    if (order >= 1) {
        out.d1.assign(tj.g1.size(), zeros(patch.grid));
        for (std::size_t k = 0; k < tj.g1.size(); ++k) bk::scale(r, out.d1[k], tj.g1[k], -1.0);
    }
    if (order >= 2) {
        out.d2.assign(tj.g2.size(), zeros(patch.grid));
        for (std::size_t k = 0; k < tj.g2.size(); ++k) bk::scale(r, out.d2[k], tj.g2[k], -1.0);
    }
    return out;
}

double normal_defect(const ImmersedPatch& patch, const VectorField& v) {
    const int n = patch.n();
    const int N = patch.amb();
    const Region r = patch.grid.interior(v.margin > patch.grid.margin
                                             ? v.margin - patch.grid.margin
                                             : 0);
    double worst = 0.0;
    r.for_each_node([&](std::size_t off, const int*) {
        double vn = 0.0;
        for (int A = 0; A < N; ++A) vn += v.v[A][off] * v.v[A][off];
        vn = std::sqrt(vn);
        if (vn == 0.0) return;
        for (int i = 0; i < n; ++i) {
            double dot = 0.0, xn = 0.0;
            for (int A = 0; A < N; ++A) {
                dot += v.v[A][off] * patch.d1(i, A)[off];
                xn += patch.d1(i, A)[off] * patch.d1(i, A)[off];
            }
            xn = std::sqrt(xn);
            if (xn == 0.0) continue;
            const double q = std::fabs(dot) / (vn * xn);
            if (q > worst) worst = q;
        }
    });
    return worst;
}

WeightedMeasure weighted_measure(const ImmersedPatch& patch, const MetricData& metric,
                                 const std::vector<double>& T) {
    const int N = patch.amb();
    WeightedMeasure m;
    m.layers = patch.grid.margin;
    m.region = patch.grid.interior();
    m.w = zeros(patch.grid);
    double cell0 = 1.0;
    for (int a = 0; a < patch.grid.n; ++a) cell0 *= patch.grid.spacing[a];
    m.total = 0.0;
    m.region.for_each_node([&](std::size_t off, const int* idx) {
        double cell = cell0;
        for (int a = 0; a < patch.grid.n; ++a)
            if (idx[a] == m.region.lo[a] || idx[a] == m.region.hi[a] - 1) cell *= 0.5;
        double tx = 0.0;
        for (int A = 0; A < N; ++A) tx += T[A] * patch.pos(A)[off];
        const double w = cell * std::exp(tx) * metric.sqrt_det[off];
        m.w[off] = w;
        m.total += w;
    });
    return m;
}

double weighted_integral(const WeightedMeasure& measure, const NodeArray& integrand) {
    double acc = 0.0;
    measure.region.for_each_row([&](std::size_t off, std::size_t len) {
        acc += kernels::reduce_dot(measure.w.data() + off, integrand.data() + off, len);
    });
    return acc;
}

double weighted_block_dot(const WeightedMeasure& measure, const std::vector<NodeArray>& a,
                          const std::vector<NodeArray>& b) {
    double acc = 0.0;
    measure.region.for_each_row([&](std::size_t off, std::size_t len) {
        for (std::size_t A = 0; A < a.size(); ++A)
            acc += kernels::reduce_dot3(measure.w.data() + off, a[A].data() + off,
                                        b[A].data() + off, len);
    });
    return acc;
}

ResidualNorms scalar_norms(const ImmersedPatch& patch, const WeightedMeasure& measure,
                           const NodeArray& field, int extra_layers) {
    const Region r = bk::margin_region(patch.grid, measure.layers + extra_layers);
    ResidualNorms out;
    out.sup = bk::max_abs(r, field);
    double acc = 0.0;
    r.for_each_row([&](std::size_t off, std::size_t len) {
        acc += kernels::reduce_dot3(measure.w.data() + off, field.data() + off,
                                    field.data() + off, len);
    });
    out.l2 = std::sqrt(std::max(acc, 0.0));
    return out;
}

ResidualNorms block_norms(const ImmersedPatch& patch, const WeightedMeasure& measure,
                          const std::vector<NodeArray>& block, int extra_layers) {
    const Region r = bk::margin_region(patch.grid, measure.layers + extra_layers);
    NodeArray r2 = zeros(patch.grid);
    for (const NodeArray& comp : block) bk::fma(r, r2, comp, comp);
    ResidualNorms out;
    out.sup = std::sqrt(bk::max_abs(r, r2));
    double acc = 0.0;
    r.for_each_row([&](std::size_t off, std::size_t len) {
        acc += kernels::reduce_dot(measure.w.data() + off, r2.data() + off, len);
    });
    out.l2 = std::sqrt(std::max(acc, 0.0));
    return out;
}

} // namespace slab
