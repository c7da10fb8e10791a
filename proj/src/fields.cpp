#include "slab/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slab/blockops.hpp"
#include "slab/rng.hpp"

namespace slab {

namespace {

struct Meta {
    int margin;
    Support support;
};

// Margin/support bookkeeping for pointwise combinations: the result is
// computed on the interior past all operand margins; a compact operand whose
// zero collar covers that collar makes the result globally valid.
Meta combine(std::initializer_list<Meta> ops) {
    int m = 0;
    Support s;
    for (const Meta& o : ops) {
        if (o.margin > m) m = o.margin;
        if (o.support.compact) {
            s.compact = true;
            if (o.support.margin > s.margin) s.margin = o.support.margin;
        }
    }
    Meta out{m, s};
    if (s.compact && s.margin >= m) out.margin = 0;
    return out;
}

void alloc_scalar(const ParameterGrid& grid, ScalarField& f, int order) {
    const int n = grid.n;
    f.order = order;
    f.f = zeros(grid);
    if (order >= 1) f.d1.assign(n, zeros(grid));
    if (order >= 2) f.d2.assign(sym2_count(n), zeros(grid));
    if (order >= 3) f.d3.assign(sym3_count(n), zeros(grid));
}

void alloc_vector(const ParameterGrid& grid, int amb, VectorField& v, int order) {
    const int n = grid.n;
    v.amb = amb;
    v.order = order;
    v.v.assign(amb, zeros(grid));
    if (order >= 1) v.d1.assign(static_cast<std::size_t>(n) * amb, zeros(grid));
    if (order >= 2) v.d2.assign(static_cast<std::size_t>(sym2_count(n)) * amb, zeros(grid));
}

// one-axis bump factor chi and derivatives at a node index
struct BumpAxis {
    std::vector<double> c0, c1, c2, c3;
};

BumpAxis bump_axis(const ParameterGrid& grid, int axis, int margin) {
    const int m = grid.nodes[axis];
    BumpAxis out;
    out.c0.assign(m, 0.0);
    out.c1.assign(m, 0.0);
    out.c2.assign(m, 0.0);
    out.c3.assign(m, 0.0);
    const double lo = grid.window[axis][0] + margin * grid.spacing[axis];
    const double hi = grid.window[axis][1] - margin * grid.spacing[axis];
    const double dt = 2.0 / (hi - lo);
    for (int k = 0; k < m; ++k) {
        const double u = grid.coord(axis, k);
        const double t = (2.0 * u - (lo + hi)) / (hi - lo);
        if (!(std::fabs(t) < 1.0)) continue;
        const double om = 1.0 - t * t;
        const double chi = std::exp(1.0 - 1.0 / om);
        const double p1 = -2.0 * t / (om * om);
        const double p2 = -2.0 * (1.0 + 3.0 * t * t) / (om * om * om);
        const double p3 = -24.0 * t * (1.0 + t * t) / (om * om * om * om);
        out.c0[k] = chi;
        out.c1[k] = p1 * chi * dt;
        out.c2[k] = (p2 + p1 * p1) * chi * dt * dt;
        out.c3[k] = (p3 + 3.0 * p1 * p2 + p1 * p1 * p1) * chi * dt * dt * dt;
    }
    return out;
}

} // namespace

ScalarField cutoff_bump(const ParameterGrid& grid, int margin) {
    if (margin < grid.margin + 1)
        throw std::invalid_argument("cutoff_bump: margin must exceed the stencil margin");
    for (int a = 0; a < grid.n; ++a)
        if (2 * margin >= grid.nodes[a] - 1)
            throw std::invalid_argument("cutoff_bump: margin leaves empty support on axis " +
                                        std::to_string(a));
    const int n = grid.n;
    ScalarField out;
    alloc_scalar(grid, out, 3);
    out.margin = 0;
    out.support = Support{true, margin};

    std::vector<BumpAxis> ax;
    ax.reserve(n);
    for (int a = 0; a < n; ++a) ax.push_back(bump_axis(grid, a, margin));

    auto axis_factor = [&](int a, int node, int order) -> double {
        switch (order) {
        case 0: return ax[a].c0[node];
        case 1: return ax[a].c1[node];
        case 2: return ax[a].c2[node];
        default: return ax[a].c3[node];
        }
    };
    auto product = [&](const int* idx, const int* orders) {
        double p = 1.0;
        for (int a = 0; a < n; ++a) p *= axis_factor(a, idx[a], orders[a]);
        return p;
    };

    bk::margin_region(grid, 0).for_each_node([&](std::size_t off, const int* idx) {
        int ord[kMaxDim] = {0, 0, 0};
        out.f[off] = product(idx, ord);
        for (int i = 0; i < n; ++i) {
            ord[0] = ord[1] = ord[2] = 0;
            ord[i] += 1;
            out.d1[i][off] = product(idx, ord);
            for (int j = i; j < n; ++j) {
                ord[0] = ord[1] = ord[2] = 0;
                ord[i] += 1;
                ord[j] += 1;
                out.d2[sym2_index(i, j)][off] = product(idx, ord);
                for (int k = j; k < n; ++k) {
                    ord[0] = ord[1] = ord[2] = 0;
                    ord[i] += 1;
                    ord[j] += 1;
                    ord[k] += 1;
                    out.d3[sym3_index(i, j, k)][off] = product(idx, ord);
                }
            }
        }
    });
    return out;
}

ScalarField trig_polynomial(const ParameterGrid& grid, std::uint64_t seed) {
    const int n = grid.n;
    ScalarField out;
    alloc_scalar(grid, out, 3);
    out.margin = 0;
    out.support = Support{};

    // per-axis basis {1, sin(w th), cos(w th), ..., sin(3w th), cos(3w th)},
    // th normalized to a full period over the window
    int count = 1;
    for (int a = 0; a < n; ++a) count *= 7;
    Rng rng(seed);
    const std::vector<double> coef = rng.uniform_vector(count, -1.0, 1.0);

    struct AxisBasis {
        std::vector<double> b[4];  // [order][basis*m + node]
        int m = 0;
    };
    std::vector<AxisBasis> basis(n);
    for (int a = 0; a < n; ++a) {
        const int m = grid.nodes[a];
        basis[a].m = m;
        for (auto& v : basis[a].b) v.assign(static_cast<std::size_t>(7) * m, 0.0);
        const double w = 2.0 * std::numbers::pi / (grid.window[a][1] - grid.window[a][0]);
        for (int k = 0; k < m; ++k) {
            const double th = w * (grid.coord(a, k) - grid.window[a][0]);
            basis[a].b[0][0 * m + k] = 1.0;
            for (int d = 1; d <= 3; ++d) {
                const double s = std::sin(d * th), c = std::cos(d * th), wd = w * d;
                const int is = (2 * d - 1) * m + k, ic = (2 * d) * m + k;
                basis[a].b[0][is] = s;
                basis[a].b[1][is] = wd * c;
                basis[a].b[2][is] = -wd * wd * s;
                basis[a].b[3][is] = -wd * wd * wd * c;
                basis[a].b[0][ic] = c;
                basis[a].b[1][ic] = -wd * s;
                basis[a].b[2][ic] = -wd * wd * c;
                basis[a].b[3][ic] = wd * wd * wd * s;
            }
        }
    }

    bk::margin_region(grid, 0).for_each_node([&](std::size_t off, const int* idx) {
        auto term = [&](int ci, const int* orders) {
            double p = 1.0;
            int rem = ci;
            for (int a = n - 1; a >= 0; --a) {
                const int bidx = rem % 7;
                rem /= 7;
                p *= basis[a].b[orders[a]][bidx * basis[a].m + idx[a]];
            }
            return p;
        };
        for (int ci = 0; ci < count; ++ci) {
            const double c = coef[ci];
            int ord[kMaxDim] = {0, 0, 0};
            out.f[off] += c * term(ci, ord);
            for (int i = 0; i < n; ++i) {
                ord[0] = ord[1] = ord[2] = 0;
                ord[i] += 1;
                out.d1[i][off] += c * term(ci, ord);
                for (int j = i; j < n; ++j) {
                    ord[0] = ord[1] = ord[2] = 0;
                    ord[i] += 1;
                    ord[j] += 1;
                    out.d2[sym2_index(i, j)][off] += c * term(ci, ord);
                    for (int k = j; k < n; ++k) {
                        ord[0] = ord[1] = ord[2] = 0;
                        ord[i] += 1;
                        ord[j] += 1;
                        ord[k] += 1;
                        out.d3[sym3_index(i, j, k)][off] += c * term(ci, ord);
                    }
                }
            }
        }
    });
    return out;
}

ScalarField constant_scalar(const ParameterGrid& grid, double value) {
    ScalarField out;
    alloc_scalar(grid, out, 3);
    std::fill(out.f.begin(), out.f.end(), value);
    return out;
}

ScalarField coordinate_field(const ImmersedPatch& patch, int A) {
    const ParameterGrid& grid = patch.grid;
    const int n = grid.n;
    ScalarField out;
    alloc_scalar(grid, out, patch.jets.order);
    out.margin = grid.margin;
    out.f = patch.pos(A);
    for (int i = 0; i < n; ++i) out.d1[i] = patch.d1(i, A);
    if (out.order >= 2)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) out.d2[sym2_index(i, j)] = patch.d2(i, j, A);
    if (out.order >= 3)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = j; k < n; ++k) out.d3[sym3_index(i, j, k)] = patch.d3(i, j, k, A);
    return out;
}

ScalarField multiply(const ParameterGrid& grid, const ScalarField& a, const ScalarField& b) {
    const int n = grid.n;
    const Meta meta = combine({Meta{a.margin, a.support}, Meta{b.margin, b.support}});
    const Region r = bk::margin_region(grid, std::max(a.margin, b.margin));
    ScalarField out;
    alloc_scalar(grid, out, std::min(a.order, b.order));
    out.margin = meta.margin;
    out.support = meta.support;

    bk::mul(r, out.f, a.f, b.f);
    if (out.order >= 1)
        for (int i = 0; i < n; ++i) {
            bk::mul(r, out.d1[i], a.d1[i], b.f);
            bk::fma(r, out.d1[i], a.f, b.d1[i]);
        }
    if (out.order >= 2)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                NodeArray& d = out.d2[sym2_index(i, j)];
                bk::mul(r, d, a.d2_at(i, j), b.f);
                bk::fma(r, d, a.d1[i], b.d1[j]);
                bk::fma(r, d, a.d1[j], b.d1[i]);
                bk::fma(r, d, a.f, b.d2_at(i, j));
            }
    if (out.order >= 3)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    NodeArray& d = out.d3[sym3_index(i, j, k)];
                    bk::mul(r, d, a.d3_at(i, j, k), b.f);
                    bk::fma(r, d, a.d2_at(i, j), b.d1[k]);
                    bk::fma(r, d, a.d2_at(i, k), b.d1[j]);
                    bk::fma(r, d, a.d2_at(j, k), b.d1[i]);
                    bk::fma(r, d, a.d1[i], b.d2_at(j, k));
                    bk::fma(r, d, a.d1[j], b.d2_at(i, k));
                    bk::fma(r, d, a.d1[k], b.d2_at(i, j));
                    bk::fma(r, d, a.f, b.d3_at(i, j, k));
                }
    return out;
}

VectorField multiply(const ParameterGrid& grid, const ScalarField& s, const VectorField& v) {
    const int n = grid.n;
    const int N = v.amb;
    const Meta meta = combine({Meta{s.margin, s.support}, Meta{v.margin, v.support}});
    const Region r = bk::margin_region(grid, std::max(s.margin, v.margin));
    VectorField out;
    alloc_vector(grid, N, out, std::min(s.order, v.order));
    out.margin = meta.margin;
    out.support = meta.support;

    for (int A = 0; A < N; ++A) {
        bk::mul(r, out.v[A], s.f, v.v[A]);
        if (out.order >= 1)
            for (int i = 0; i < n; ++i) {
                NodeArray& d = out.d1[i * N + A];
                bk::mul(r, d, s.d1[i], v.v[A]);
                bk::fma(r, d, s.f, v.d1_at(i, A));
            }
        if (out.order >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    NodeArray& d = out.d2[sym2_index(i, j) * N + A];
                    bk::mul(r, d, s.d2_at(i, j), v.v[A]);
                    bk::fma(r, d, s.d1[i], v.d1_at(j, A));
                    bk::fma(r, d, s.d1[j], v.d1_at(i, A));
                    bk::fma(r, d, s.f, v.d2_at(i, j, A));
                }
    }
    return out;
}

VectorField apply_complex_structure(const VectorField& v) {
    VectorField out = v;
    out.v = j_apply_block(v.v);
    if (v.order >= 1) {
        const int n_blocks = static_cast<int>(v.d1.size()) / v.amb;
        for (int i = 0; i < n_blocks; ++i) {
            std::vector<NodeArray> blk(v.d1.begin() + static_cast<std::size_t>(i) * v.amb,
                                       v.d1.begin() + static_cast<std::size_t>(i + 1) * v.amb);
            auto jb = j_apply_block(blk);
            for (int A = 0; A < v.amb; ++A) out.d1[i * v.amb + A] = std::move(jb[A]);
        }
    }
    if (v.order >= 2) {
        const int n_blocks = static_cast<int>(v.d2.size()) / v.amb;
        for (int i = 0; i < n_blocks; ++i) {
            std::vector<NodeArray> blk(v.d2.begin() + static_cast<std::size_t>(i) * v.amb,
                                       v.d2.begin() + static_cast<std::size_t>(i + 1) * v.amb);
            auto jb = j_apply_block(blk);
            for (int A = 0; A < v.amb; ++A) out.d2[i * v.amb + A] = std::move(jb[A]);
        }
    }
    return out;
}

VectorField vector_from_block(const ImmersedPatch& patch, std::vector<NodeArray> block) {
    VectorField out;
    out.amb = patch.amb();
    out.order = 0;
    out.margin = patch.grid.margin;
    out.v = std::move(block);
    return out;
}

void fd_complete(const ParameterGrid& grid, VectorField& field, int target_order) {
    // Sequential central first differences: d2 = D1(d1).  Composing D1 keeps
    // the discrete derivatives compatible with the quadrature pairing (the
    // telescoping that mimics integration by parts), which the compact
    // 3-point second-derivative stencil does not.
    if (!field.support.compact || field.support.margin < target_order)
        throw std::invalid_argument(
            "fd_complete: needs compact support at least as wide as the stencil depth");
    if (field.order >= target_order) return;
    const int n = grid.n;
    const int N = field.amb;
    const int orig_order = field.order;
    if (orig_order < 1 && target_order >= 1)
        field.d1.assign(static_cast<std::size_t>(n) * N, zeros(grid));
    if (target_order >= 2) field.d2.assign(static_cast<std::size_t>(sym2_count(n)) * N, zeros(grid));

    auto central = [&](const NodeArray& src, int axis, int src_margin, NodeArray& dst) {
        const std::ptrdiff_t st = static_cast<std::ptrdiff_t>(grid.stride(axis));
        const double inv2h = 1.0 / (2.0 * grid.spacing[axis]);
        bk::margin_region(grid, src_margin + 1).for_each_row([&](std::size_t off, std::size_t len) {
            for (std::size_t k = 0; k < len; ++k)
                dst[off + k] = (src[off + k + st] - src[off + k - st]) * inv2h;
        });
    };
    for (int A = 0; A < N; ++A) {
        if (orig_order < 1)
            for (int i = 0; i < n; ++i) central(field.v[A], i, 0, field.d1[i * N + A]);
        if (target_order >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    central(field.d1[j * N + A], i, 1, field.d2[sym2_index(i, j) * N + A]);
    }
    field.order = target_order;
}

} // namespace slab
