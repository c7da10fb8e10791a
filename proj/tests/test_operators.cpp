#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "slab/blockops.hpp"
#include "slab/catalog.hpp"
#include "slab/operators.hpp"
#include "slab/rng.hpp"
#include "slab/variation.hpp"

using namespace slab;

namespace {

struct Setup {
    ImmersedPatch patch;
    MetricData metric;
    SffData sff;
    std::vector<double> T;
    WeightedMeasure measure;
};

Setup cylinder(int res = 64, Backend backend = Backend::Analytic) {
    Setup s{make_grim_reaper_cylinder(2, {{-1, 1}, {0, 1}}, res, backend), {}, {}, {0, 1, 0, 0},
            {}};
    s.metric = metric_data(s.patch, 2);
    s.sff = second_fundamental_form(s.patch, s.metric);
    s.measure = weighted_measure(s.patch, s.metric, s.T);
    return s;
}

Setup plane(int res = 64) {
    Setup s{make_flat_plane(2, {1, 0, 0, 0}, {{0, 1}, {0, 1}}, res, Backend::Analytic),
            {},
            {},
            {1, 0, 0, 0},
            {}};
    s.metric = metric_data(s.patch, 2);
    s.sff = second_fundamental_form(s.patch, s.metric);
    s.measure = weighted_measure(s.patch, s.metric, s.T);
    return s;
}

double sup_interior(const ImmersedPatch& p, const NodeArray& a, int extra = 0) {
    return bk::max_abs(p.grid.interior(extra), a);
}

double sup_block_interior(const ImmersedPatch& p, const std::vector<NodeArray>& b,
                          int extra = 0) {
    double m = 0.0;
    for (const auto& c : b) m = std::max(m, sup_interior(p, c, extra));
    return m;
}

} // namespace

TEST_CASE("gradient: constants, identity chart, reaper at the waist") {
    Setup s = plane();
    const ScalarField c = constant_scalar(s.patch.grid, 3.0);
    CHECK(sup_block_interior(s.patch, gradient_block(s.patch, s.metric, c)) == 0.0);

    const ScalarField u1 = coordinate_field(s.patch, 0);  // f = u_1 on the identity chart
    const auto g = gradient_block(s.patch, s.metric, u1);
    CHECK(sup_interior(s.patch, g[0]) == doctest::Approx(1.0));
    CHECK(sup_interior(s.patch, g[1]) == 0.0);

    // grim reaper, f = u at u = 0: grad f = g^{11} X_1 = (1, 0, ...)
    Setup gr = cylinder(65);
    const ScalarField fu = coordinate_field(gr.patch, 0);
    const auto gg = gradient_block(gr.patch, gr.metric, fu);
    int idx[2] = {32, 32};
    const std::size_t at = gr.patch.grid.index(idx);
    CHECK(gr.patch.grid.coord(0, 32) == doctest::Approx(0.0));
    CHECK(gg[0][at] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(gg[1][at]) <= 1e-12);
}

TEST_CASE("drifted Laplacian of coordinate restrictions: Lx^A = T^A") {
    Setup s = cylinder();
    for (int A = 0; A < 4; ++A) {
        const ScalarField xa = coordinate_field(s.patch, A);
        const ScalarField lxa = drifted_laplacian(s.patch, s.metric, s.T, xa);
        double worst = 0.0;
        s.patch.grid.interior().for_each_node([&](std::size_t off, const int*) {
            worst = std::max(worst, std::fabs(lxa.f[off] - s.T[A]));
        });
        CHECK(worst <= 1e-12);
    }
    // constants map to zero
    const ScalarField c = constant_scalar(s.patch.grid, 2.0);
    const ScalarField lc = drifted_laplacian(s.patch, s.metric, s.T, c);
    CHECK(sup_interior(s.patch, lc.f) == 0.0);
}

TEST_CASE("stability operator: flat plane closed form and Prop 2.6 zeros") {
    // flat plane, V = bump * dy1, T tangent: LV = (drifted Laplacian of bump) dy1
    Setup s = plane();
    const ScalarField bump = cutoff_bump(s.patch.grid, 3);
    VectorField dir;
    dir.amb = 4;
    dir.order = 2;
    dir.v.assign(4, zeros(s.patch.grid));
    dir.d1.assign(8, zeros(s.patch.grid));
    dir.d2.assign(12, zeros(s.patch.grid));
    std::fill(dir.v[1].begin(), dir.v[1].end(), 1.0);
    const VectorField v = multiply(s.patch.grid, bump, dir);
    const VectorField lv = stability_operator(s.patch, s.metric, s.sff, s.T, v);
    const ScalarField lb = drifted_laplacian(s.patch, s.metric, s.T, bump);
    NodeArray diff = zeros(s.patch.grid);
    bk::sub(s.patch.grid.interior(), diff, lv.v[1], lb.f);
    CHECK(sup_interior(s.patch, diff) <= 1e-12);  // two pipelines, roundoff apart
    CHECK(sup_interior(s.patch, lv.v[0]) == 0.0);
    CHECK(sup_interior(s.patch, lv.v[2]) == 0.0);

    // grim reaper: L y_perp = 0 and LH = 0 (via y = T) to 1e-6
    Setup gr = cylinder();
    Rng rng(7);
    const std::vector<double> y = rng.uniform_vector(4, -1.0, 1.0);
    const VectorField yp = const_perp_field(gr.patch, gr.metric, y);
    CHECK(sup_block_interior(gr.patch,
                             stability_operator(gr.patch, gr.metric, gr.sff, gr.T, yp).v) <= 1e-6);
    const VectorField hp = const_perp_field(gr.patch, gr.metric, gr.T);
    CHECK(sup_block_interior(gr.patch,
                             stability_operator(gr.patch, gr.metric, gr.sff, gr.T, hp).v) <= 1e-6);

    // non-Lagrangian patches are refused
    ImmersedPatch not_lag = gr.patch;
    not_lag.lagrangian = false;
    CHECK_THROWS_AS(stability_operator(not_lag, gr.metric, gr.sff, gr.T, yp),
                    std::runtime_error);
}

TEST_CASE("hamiltonian fields: J grad f, orthogonality is a theorem") {
    Setup s = plane();
    const ScalarField u1 = coordinate_field(s.patch, 0);
    const VectorField v = hamiltonian_field(s.patch, s.metric, u1);
    CHECK(sup_interior(s.patch, v.v[1]) == doctest::Approx(1.0));  // J dx1 = dy1
    CHECK(sup_interior(s.patch, v.v[0]) == 0.0);
    const ScalarField c = constant_scalar(s.patch.grid, 5.0);
    CHECK(sup_block_interior(s.patch, hamiltonian_field(s.patch, s.metric, c).v) == 0.0);

    Setup gr = cylinder();
    const ScalarField f =
        multiply(gr.patch.grid, cutoff_bump(gr.patch.grid, 3), trig_polynomial(gr.patch.grid, 11));
    const VectorField w = hamiltonian_field(gr.patch, gr.metric, f);
    CHECK(normal_defect(gr.patch, w) <= 1e-10);
}

TEST_CASE("normal connection: parallel frames and metric compatibility") {
    // flat plane, constant normal field: nabla_perp = 0
    Setup s = plane();
    VectorField cn;
    cn.amb = 4;
    cn.order = 1;
    cn.v.assign(4, zeros(s.patch.grid));
    cn.d1.assign(8, zeros(s.patch.grid));
    std::fill(cn.v[1].begin(), cn.v[1].end(), 1.0);
    CHECK(sup_block_interior(s.patch, normal_connection(s.patch, s.metric, cn, 0).v) == 0.0);

    // Lagrangian identity: nabla_perp_i (J X_j) = Gamma^k_ij J X_k
    Setup gr = cylinder();
    const int n = 2, N = 4;
    for (int j = 0; j < n; ++j) {
        VectorField xj;
        xj.amb = N;
        xj.order = 1;
        xj.margin = gr.patch.grid.margin;
        xj.v.assign(N, zeros(gr.patch.grid));
        xj.d1.assign(n * N, zeros(gr.patch.grid));
        for (int A = 0; A < N; ++A) {
            xj.v[A] = gr.patch.d1(j, A);
            for (int i = 0; i < n; ++i) xj.d1[i * N + A] = gr.patch.d2(j, i, A);
        }
        const VectorField jxj = apply_complex_structure(xj);
        for (int i = 0; i < n; ++i) {
            const VectorField lhs = normal_connection(gr.patch, gr.metric, jxj, i);
            double worst = 0.0;
            gr.patch.grid.interior().for_each_node([&](std::size_t off, const int*) {
                for (int A = 0; A < N; ++A) {
                    double rhs = 0.0;
                    for (int k = 0; k < n; ++k)
                        rhs += gr.metric.gamma_at(k, i, j)[off] *
                               (A % 2 == 0 ? -gr.patch.d1(k, A + 1)[off]
                                           : gr.patch.d1(k, A - 1)[off]);
                    worst = std::max(worst, std::fabs(lhs.v[A][off] - rhs));
                }
            });
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("cutoff bump: exact zeros, center value, reflection symmetry") {
    const ParameterGrid grid({{-1, 1}, {0, 1}}, {65, 65}, 0);
    const ScalarField bump = cutoff_bump(grid, 3);
    int idx[2] = {32, 32};
    CHECK(bump.f[grid.index(idx)] == doctest::Approx(1.0));  // chi(0) = 1 at the center node
    // zero within 3 layers of every face, including the boundary of support
    for (int layer = 0; layer <= 3; ++layer) {
        int e[2] = {layer, 40};
        CHECK(bump.f[grid.index(e)] == 0.0);
        int e2[2] = {40, grid.nodes[1] - 1 - layer};
        CHECK(bump.f[grid.index(e2)] == 0.0);
    }
    // exact reflection symmetry across the midpoint
    for (int k = 0; k < 65; ++k) {
        int a[2] = {k, 20}, b[2] = {64 - k, 20};
        CHECK(bump.f[grid.index(a)] == bump.f[grid.index(b)]);
    }
    CHECK_THROWS(cutoff_bump(grid, 40));  // empty support
    const ParameterGrid fd_grid({{-1, 1}, {0, 1}}, {17, 17}, 2);
    CHECK_THROWS(cutoff_bump(fd_grid, 2));  // must exceed the stencil margin
}

TEST_CASE("weighted quadrature: catalog oracles and convergence") {
    // integrand 1 on the flat plane with T = dx1 over [0,1]^2: e - 1
    Setup s = plane(128);
    CHECK(s.measure.total == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-4));
    // integrand 0
    NodeArray zero = zeros(s.patch.grid);
    CHECK(weighted_integral(s.measure, zero) == 0.0);
    // grim reaper cylinder: 2 tan(1), trapezoid order 2
    double prev = 0.0, order = 0.0;
    for (int res : {32, 64, 128}) {
        Setup gr = cylinder(res);
        const double err = std::fabs(gr.measure.total - 2.0 * std::tan(1.0));
        if (prev > 0.0) order = std::log(prev / err) / std::log(double(res - 1) / (res / 2 - 1));
        prev = err;
    }
    CHECK(order >= 1.9);
}

TEST_CASE("integration by parts: residual and hypothesis refusal") {
    const SolitonSpec spec = SolitonSpec::from_kv("name=grim-reaper-cylinder n=2 window=-1:1,0:1 res=128");
    const Workbench b = make_workbench(spec, Backend::Analytic);
    const ScalarField bump = cutoff_bump(b.patch.grid, 3);
    const IbpResidual r = ibp_residual(b, bump, bump);
    CHECK(r.relative <= 1e-6);

    // u = bump, v = x^{y1} cross-checks Lx^A = T^A: lhs = int u * 1 * e
    const ScalarField v = coordinate_field(b.patch, 1);
    const IbpResidual r2 = ibp_residual(b, bump, v);
    NodeArray uf = bump.f;
    const double int_u = weighted_integral(b.measure, uf);
    CHECK(r2.lhs == doctest::Approx(int_u).epsilon(1e-9));
    CHECK(r2.relative <= 1e-6);

    // full-window u violates the compact-support hypothesis
    const ScalarField ones = constant_scalar(b.patch.grid, 1.0);
    CHECK_THROWS_AS(ibp_residual(b, ones, v), std::invalid_argument);
}

TEST_CASE("L is symmetric in the weighted inner product on Hamiltonian fields") {
    const SolitonSpec spec = SolitonSpec::from_kv("name=grim-reaper-cylinder n=2 window=-1:1,0:1 res=64");
    const Workbench b = make_workbench(spec, Backend::Analytic);
    const ScalarField bump = cutoff_bump(b.patch.grid, 3);
    for (int pair = 0; pair < 3; ++pair) {
        const ScalarField fu =
            multiply(b.patch.grid, bump, trig_polynomial(b.patch.grid, 100 + pair));
        const ScalarField fv =
            multiply(b.patch.grid, bump, trig_polynomial(b.patch.grid, 200 + pair));
        const VectorField vu = hamiltonian_field(b.patch, b.metric, fu);
        const VectorField vv = hamiltonian_field(b.patch, b.metric, fv);
        const VectorField lu = stability_operator(b.patch, b.metric, b.sff, b.T, vu);
        const VectorField lv = stability_operator(b.patch, b.metric, b.sff, b.T, vv);
        const double a = weighted_block_dot(b.measure, vu.v, lv.v);
        const double c = weighted_block_dot(b.measure, vv.v, lu.v);
        const double mag = std::max({std::fabs(a), std::fabs(c), 1.0});
        CHECK(std::fabs(a - c) / mag <= 1e-4);  // quadrature-level symmetry
    }
}
