#include "slab/patch.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "slab/geometry.hpp"
#include "slab/kernels.hpp"
#include "slab/tolerances.hpp"

namespace slab {

void Chart::jets(const double*, double*, double*, double*, double*) const {
    throw std::logic_error("chart: analytic jets requested but not provided");
}

namespace {

// Central stencils on node arrays.  shrink[a] tracks how many layers from
// each face of axis a the source is valid; the result loses one more layer
// along the differentiated axis.
using Shrink = std::array<int, kMaxDim>;

Region shrunk_region(const ParameterGrid& grid, const Shrink& s) {
    Region r;
    r.n = grid.n;
    r.grid = &grid;
    for (int a = 0; a < grid.n; ++a) {
        r.lo[a] = s[a];
        r.hi[a] = grid.nodes[a] - s[a];
    }
    return r;
}

void central_d1(const ParameterGrid& grid, const NodeArray& src, int axis,
                Shrink shrink, NodeArray& dst) {
    shrink[axis] += 1;
    const std::ptrdiff_t st = static_cast<std::ptrdiff_t>(grid.stride(axis));
    const double inv2h = 1.0 / (2.0 * grid.spacing[axis]);
    shrunk_region(grid, shrink).for_each_row([&](std::size_t off, std::size_t len) {
        const double* p = src.data() + off;
        double* d = dst.data() + off;
        for (std::size_t i = 0; i < len; ++i)
            d[i] = (p[i + st] - p[i - st]) * inv2h;
    });
}

void central_d2_pure(const ParameterGrid& grid, const NodeArray& src, int axis,
                     NodeArray& dst) {
    Shrink shrink{};
    shrink[axis] = 1;
    const std::ptrdiff_t st = static_cast<std::ptrdiff_t>(grid.stride(axis));
    const double invh2 = 1.0 / (grid.spacing[axis] * grid.spacing[axis]);
    shrunk_region(grid, shrink).for_each_row([&](std::size_t off, std::size_t len) {
        const double* p = src.data() + off;
        double* d = dst.data() + off;
        for (std::size_t i = 0; i < len; ++i)
            d[i] = (p[i + st] - 2.0 * p[i] + p[i - st]) * invh2;
    });
}

void central_d2_cross(const ParameterGrid& grid, const NodeArray& src, int ai, int aj,
                      NodeArray& dst) {
    Shrink shrink{};
    shrink[ai] = 1;
    shrink[aj] = 1;
    const std::ptrdiff_t si = static_cast<std::ptrdiff_t>(grid.stride(ai));
    const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(grid.stride(aj));
    const double inv4h = 1.0 / (4.0 * grid.spacing[ai] * grid.spacing[aj]);
    shrunk_region(grid, shrink).for_each_row([&](std::size_t off, std::size_t len) {
        const double* p = src.data() + off;
        double* d = dst.data() + off;
        for (std::size_t i = 0; i < len; ++i)
            d[i] = (p[i + si + sj] - p[i + si - sj] - p[i - si + sj] + p[i - si - sj]) * inv4h;
    });
}

JetField analytic_jets(const Chart& chart, const ParameterGrid& grid, int N) {
    const int n = grid.n;
    const int s2 = sym2_count(n), s3 = sym3_count(n);
    JetField out;
    out.order = 3;
    out.pos.assign(N, zeros(grid));
    out.d1.assign(static_cast<std::size_t>(n) * N, zeros(grid));
    out.d2.assign(static_cast<std::size_t>(s2) * N, zeros(grid));
    out.d3.assign(static_cast<std::size_t>(s3) * N, zeros(grid));
    std::vector<double> u(n), x(N), j1(static_cast<std::size_t>(n) * N),
        j2(static_cast<std::size_t>(s2) * N), j3(static_cast<std::size_t>(s3) * N);
    Region all = shrunk_region(grid, Shrink{});
    all.for_each_node([&](std::size_t off, const int* idx) {
        for (int a = 0; a < n; ++a) u[a] = grid.coord(a, idx[a]);
        chart.jets(u.data(), x.data(), j1.data(), j2.data(), j3.data());
        for (int A = 0; A < N; ++A) out.pos[A][off] = x[A];
        for (std::size_t k = 0; k < j1.size(); ++k) out.d1[k][off] = j1[k];
        for (std::size_t k = 0; k < j2.size(); ++k) out.d2[k][off] = j2[k];
        for (std::size_t k = 0; k < j3.size(); ++k) out.d3[k][off] = j3[k];
    });
    return out;
}

JetField finite_difference_jets(const Chart& chart, const ParameterGrid& grid, int N) {
    const int n = grid.n;
    const int s2 = sym2_count(n), s3 = sym3_count(n);
    JetField out;
    out.order = 3;
    out.pos.assign(N, zeros(grid));
    out.d1.assign(static_cast<std::size_t>(n) * N, zeros(grid));
    out.d2.assign(static_cast<std::size_t>(s2) * N, zeros(grid));
    out.d3.assign(static_cast<std::size_t>(s3) * N, zeros(grid));
    std::vector<double> u(n), x(N);
    Region all = shrunk_region(grid, Shrink{});
    all.for_each_node([&](std::size_t off, const int* idx) {
        for (int a = 0; a < n; ++a) u[a] = grid.coord(a, idx[a]);
        chart.position(u.data(), x.data());
        for (int A = 0; A < N; ++A) out.pos[A][off] = x[A];
    });
    for (int A = 0; A < N; ++A) {
        for (int i = 0; i < n; ++i)
            central_d1(grid, out.pos[A], i, Shrink{}, out.d1[i * N + A]);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                NodeArray& dst = out.d2[sym2_index(i, j) * N + A];
                if (i == j)
                    central_d2_pure(grid, out.pos[A], i, dst);
                else
                    central_d2_cross(grid, out.pos[A], i, j, dst);
            }
        // third jets: central difference of the second jets along the first
        // index; one more order of accuracy spent, still O(h^2) overall
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    Shrink src{};
                    src[j] = 1;
                    src[k] = 1;
                    central_d1(grid, out.d2[sym2_index(j, k) * N + A], i, src,
                               out.d3[sym3_index(i, j, k) * N + A]);
                }
    }
    return out;
}

std::string node_label(const ParameterGrid& grid, const int* idx) {
    std::ostringstream os;
    os << "(";
    for (int a = 0; a < grid.n; ++a) {
        if (a) os << ", ";
        os << idx[a];
    }
    os << ")";
    return os.str();
}

} // namespace

ImmersedPatch patch_from_jets(ParameterGrid grid, AmbientStructure ambient, Backend backend,
                              JetField jets) {
    ImmersedPatch p;
    p.grid = std::move(grid);
    p.ambient = std::move(ambient);
    p.backend = backend;
    p.jets = std::move(jets);
    return p;
}

ImmersedPatch build_patch(const Chart& chart, const ParameterGrid& grid,
                          AmbientStructure ambient, Backend backend, bool lagrangian) {
    const int n = grid.n;
    const int N = ambient.dim;
    if (chart.domain_dim() != n || chart.ambient_dim() != N)
        throw std::invalid_argument("build_patch: chart dimensions do not match grid/ambient");
    const int want_margin = backend == Backend::FiniteDifference ? 2 : 0;
    if (grid.margin != want_margin)
        throw std::invalid_argument("build_patch: grid margin must match the backend stencil margin");
    if (backend == Backend::Analytic && !chart.has_jets())
        throw std::invalid_argument("build_patch: analytic backend needs a chart with closed-form jets");

    ImmersedPatch p;
    p.grid = grid;
    p.ambient = std::move(ambient);
    p.backend = backend;
    p.lagrangian = lagrangian;
    p.jets = backend == Backend::Analytic ? analytic_jets(chart, grid, N)
                                          : finite_difference_jets(chart, grid, N);

    // immersion invariant: det g above the degeneracy floor at interior nodes
    const MetricData md = metric_data(p, 0);
    bool bad = false;
    std::string where;
    double bad_det = 0.0;
    p.grid.interior().for_each_node([&](std::size_t off, const int* idx) {
        if (!bad && !(md.det[off] > tol::kDetFloor)) {
            bad = true;
            bad_det = md.det[off];
            where = node_label(p.grid, idx);
        }
    });
    if (bad) {
        std::ostringstream os;
        os << "build_patch: degenerate metric (det g = " << bad_det << ") at node " << where;
        throw std::invalid_argument(os.str());
    }

    if (lagrangian) {
        if (!p.ambient.has_complex || N != 2 * n)
            throw std::invalid_argument("build_patch: lagrangian flag needs N = 2n");
        const double defect = lagrangian_defect(p).sup;
        const double lim = backend == Backend::Analytic
                               ? tol::kLagrangianDefect
                               : 100.0 * grid.max_spacing() * grid.max_spacing();
        if (!(defect <= lim)) {
            std::ostringstream os;
            os << "build_patch: Lagrangian defect " << defect << " exceeds " << lim;
            throw std::invalid_argument(os.str());
        }
    }
    return p;
}

SplitField project(const ImmersedPatch& patch, const MetricData& metric,
                   const std::vector<NodeArray>& w) {
    const auto& K = kernels::active();
    const int n = patch.n();
    const int N = patch.amb();
    const std::size_t len = patch.grid.node_count();
    if (static_cast<int>(w.size()) != N)
        throw std::invalid_argument("project: field has wrong ambient dimension");

    // w_j = <W, X_j>, then coef^i = g^{ij} w_j
    std::vector<NodeArray> wj(n, NodeArray(len, 0.0));
    for (int j = 0; j < n; ++j)
        for (int A = 0; A < N; ++A)
            K.fma_acc(wj[j].data(), w[A].data(), patch.d1(j, A).data(), len);
    std::vector<NodeArray> coef(n, NodeArray(len, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            K.fma_acc(coef[i].data(), metric.ginv_at(i, j).data(), wj[j].data(), len);

    SplitField out;
    out.tangential.assign(N, NodeArray(len, 0.0));
    out.normal.assign(N, NodeArray(len, 0.0));
    for (int A = 0; A < N; ++A) {
        for (int i = 0; i < n; ++i)
            K.fma_acc(out.tangential[A].data(), coef[i].data(), patch.d1(i, A).data(), len);
        K.sub(out.normal[A].data(), w[A].data(), out.tangential[A].data(), len);
    }
    return out;
}

LagrangianDefect lagrangian_defect(const ImmersedPatch& patch) {
    if (!patch.ambient.has_complex || patch.amb() != 2 * patch.n())
        throw std::invalid_argument("lagrangian_defect: needs N = 2n with complex structure");
    const auto& K = kernels::active();
    const int n = patch.n();
    const std::size_t len = patch.grid.node_count();
    LagrangianDefect out;
    out.field.assign(len, 0.0);
    NodeArray om(len, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            // omega(X_i, X_j) = sum_m (X_i^xm X_j^ym - X_i^ym X_j^xm)
            std::fill(om.begin(), om.end(), 0.0);
            for (int m = 0; m < n; ++m) {
                K.fma_acc(om.data(), patch.d1(i, 2 * m).data(), patch.d1(j, 2 * m + 1).data(), len);
                K.fnma_acc(om.data(), patch.d1(i, 2 * m + 1).data(), patch.d1(j, 2 * m).data(), len);
            }
            for (std::size_t k = 0; k < len; ++k) {
                const double a = std::fabs(om[k]);
                if (a > out.field[k]) out.field[k] = a;
            }
        }
    patch.grid.interior().for_each_row([&](std::size_t off, std::size_t rl) {
        const double m = kernels::reduce_max_abs(out.field.data() + off, rl);
        if (m > out.sup) out.sup = m;
    });
    return out;
}

} // namespace slab
