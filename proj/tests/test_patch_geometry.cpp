#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "slab/blockops.hpp"
#include "slab/catalog.hpp"
#include "slab/geometry.hpp"
#include "slab/patch.hpp"

using namespace slab;

namespace {

// nearest node offset to parameter point u on an n=2 grid
std::size_t node_near(const ParameterGrid& g, double u0, double u1) {
    int idx[2];
    idx[0] = int(std::lround((u0 - g.window[0][0]) / g.spacing[0]));
    idx[1] = int(std::lround((u1 - g.window[1][0]) / g.spacing[1]));
    return g.index(idx);
}

// a chart that collapses one axis: u -> (u1, 0, u1, 0)
struct CollapsedChart final : Chart {
    int domain_dim() const override { return 2; }
    int ambient_dim() const override { return 4; }
    bool has_jets() const override { return true; }
    void position(const double* u, double* x) const override {
        x[0] = u[0];
        x[1] = 0.0;
        x[2] = u[0];
        x[3] = 0.0;
    }
    void jets(const double* u, double* x, double* d1, double* d2, double* d3) const override {
        position(u, x);
        for (int k = 0; k < 2 * 4; ++k) d1[k] = 0.0;
        for (int k = 0; k < sym2_count(2) * 4; ++k) d2[k] = 0.0;
        for (int k = 0; k < sym3_count(2) * 4; ++k) d3[k] = 0.0;
        d1[0 * 4 + 0] = 1.0;
        d1[0 * 4 + 2] = 1.0;
    }
};

// the plane span{dx_1, dy_1} in C^2: u -> (u1, u2, 0, 0), not Lagrangian
struct XYPlaneChart final : Chart {
    int domain_dim() const override { return 2; }
    int ambient_dim() const override { return 4; }
    bool has_jets() const override { return true; }
    void position(const double* u, double* x) const override {
        x[0] = u[0];
        x[1] = u[1];
        x[2] = 0.0;
        x[3] = 0.0;
    }
    void jets(const double* u, double* x, double* d1, double* d2, double* d3) const override {
        position(u, x);
        for (int k = 0; k < 2 * 4; ++k) d1[k] = 0.0;
        for (int k = 0; k < sym2_count(2) * 4; ++k) d2[k] = 0.0;
        for (int k = 0; k < sym3_count(2) * 4; ++k) d3[k] = 0.0;
        d1[0 * 4 + 0] = 1.0;
        d1[1 * 4 + 1] = 1.0;
    }
};

} // namespace

TEST_CASE("grid invariants and rejections") {
    CHECK_THROWS(ParameterGrid({{0.0, 1.0}}, {4}, 0));           // too few nodes
    CHECK_THROWS(ParameterGrid({{1.0, 1.0}}, {8}, 0));           // empty window
    CHECK_THROWS(ParameterGrid({{0.0, 1.0}}, {5}, 2));           // margin eats the grid
    const ParameterGrid g({{0.0, 1.0}, {-1.0, 1.0}}, {9, 17}, 2);
    CHECK(g.node_count() == 9 * 17);
    CHECK(g.spacing[0] == doctest::Approx(1.0 / 8));
    CHECK(g.interior().count() == std::size_t(5) * 13);
    int idx[2] = {3, 7};
    int back[2];
    g.unindex(g.index(idx), back);
    CHECK(back[0] == 3);
    CHECK(back[1] == 7);
}

TEST_CASE("flat plane metric is the identity, grim reaper matches closed forms") {
    const ImmersedPatch flat = make_flat_plane(2, {1, 0, 0, 0}, {{0, 1}, {0, 1}}, 16,
                                               Backend::Analytic);
    const MetricData mdf = metric_data(flat, 1);
    for (std::size_t k = 0; k < flat.grid.node_count(); ++k) {
        CHECK(mdf.g_at(0, 0)[k] == 1.0);
        CHECK(mdf.g_at(0, 1)[k] == 0.0);
        CHECK(mdf.gamma_at(0, 0, 0)[k] == 0.0);
    }

    const ImmersedPatch gr =
        make_grim_reaper_cylinder(2, {{-1, 1}, {0, 1}}, 65, Backend::Analytic);
    const MetricData md = metric_data(gr, 1);
    const double u = std::numbers::pi / 4;
    const std::size_t at = node_near(gr.grid, u, 0.5);
    const double u_star = gr.grid.coord(0, int(at / gr.grid.stride(0)));
    CHECK(md.g_at(0, 0)[at] == doctest::Approx(oracle::reaper_g11(u_star)).epsilon(1e-12));
    CHECK(md.sqrt_det[at] == doctest::Approx(oracle::reaper_density(u_star)).epsilon(1e-12));
    // g * g^{-1} = Id to 1e-12 everywhere on the interior
    double worst = 0.0;
    gr.grid.interior().for_each_node([&](std::size_t off, const int*) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0.0;
                for (int k = 0; k < 2; ++k)
                    s += md.g_at(i, k)[off] * md.ginv_at(k, j)[off];
                worst = std::max(worst, std::fabs(s - (i == j ? 1.0 : 0.0)));
            }
    });
    CHECK(worst <= 1e-12);
}

TEST_CASE("second fundamental form: mean curvature against the curve oracle") {
    const ImmersedPatch gr =
        make_grim_reaper_cylinder(2, {{-1, 1}, {0, 1}}, 65, Backend::Analytic);
    const MetricData md = metric_data(gr, 1);
    const SffData sff = second_fundamental_form(gr, md);

    auto check_at = [&](double u) {
        const std::size_t at = node_near(gr.grid, u, 0.5);
        const double us = gr.grid.coord(0, int(at / gr.grid.stride(0)));
        const auto hv = oracle::reaper_curvature(us);
        CHECK(sff.mean[0][at] == doctest::Approx(hv[0]).epsilon(1e-12));
        CHECK(sff.mean[1][at] == doctest::Approx(hv[1]).epsilon(1e-12));
        CHECK(std::fabs(sff.mean[2][at]) <= 1e-14);
        CHECK(std::fabs(sff.mean[3][at]) <= 1e-14);
    };
    check_at(0.0);            // H = (0, 1, 0, 0)
    check_at(std::numbers::pi / 4);  // H = (-1/2, 1/2, 0, 0)

    // Lagrangian cubic form is fully symmetric
    const auto& cubic = sff.cubic();
    const int s2 = sym2_count(2);
    double worst = 0.0;
    gr.grid.interior().for_each_node([&](std::size_t off, const int*) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const double a = cubic[k * s2 + sym2_index(i, j)][off];
                    const double b = cubic[j * s2 + sym2_index(i, k)][off];
                    worst = std::max(worst, std::fabs(a - b));
                }
    });
    CHECK(worst <= 1e-10);

    // flat plane: h = 0, H = 0
    const ImmersedPatch flat =
        make_flat_plane(2, {1, 0, 0, 0}, {{0, 1}, {0, 1}}, 16, Backend::Analytic);
    const MetricData mdf = metric_data(flat, 1);
    const SffData sf = second_fundamental_form(flat, mdf);
    for (int A = 0; A < 4; ++A)
        for (std::size_t k = 0; k < flat.grid.node_count(); ++k) CHECK(sf.mean[A][k] == 0.0);
}

TEST_CASE("framed components need a Lagrangian patch") {
    XYPlaneChart chart;
    const ParameterGrid g({{0, 1}, {0, 1}}, {8, 8}, 0);
    AmbientStructure amb(4, {1, 0, 0, 0}, true);
    const ImmersedPatch p = build_patch(chart, g, amb, Backend::Analytic, false);
    const MetricData md = metric_data(p, 1);
    const SffData sff = second_fundamental_form(p, md);
    CHECK_THROWS(sff.framed());
    CHECK(lagrangian_defect(p).sup == doctest::Approx(1.0));  // omega(dx1, dy1) = 1
}

TEST_CASE("degenerate chart is rejected with the node named") {
    CollapsedChart chart;
    const ParameterGrid g({{0, 1}, {0, 1}}, {8, 8}, 0);
    AmbientStructure amb(4, {1, 0, 0, 0}, true);
    CHECK_THROWS_WITH_AS(build_patch(chart, g, amb, Backend::Analytic, false),
                         doctest::Contains("degenerate metric"), std::invalid_argument);
}

TEST_CASE("projection splits exactly") {
    const ImmersedPatch gr =
        make_grim_reaper_cylinder(2, {{-1, 1}, {0, 1}}, 33, Backend::Analytic);
    const MetricData md = metric_data(gr, 0);

    // W = X_1 is tangent: normal part vanishes
    std::vector<NodeArray> w(4);
    for (int A = 0; A < 4; ++A) w[A] = gr.d1(0, A);
    SplitField s = project(gr, md, w);
    for (int A = 0; A < 4; ++A)
        CHECK(bk::max_abs(gr.grid.interior(), s.normal[A]) <= 1e-12);

    // W = T: |W_perp|(pi/3) = cos(pi/3) = 1/2, and the splitting is orthogonal
    const ImmersedPatch wide =
        make_grim_reaper_cylinder(2, {{-1.2, 1.2}, {0, 1}}, 33, Backend::Analytic);
    const MetricData mdw = metric_data(wide, 0);
    for (int A = 0; A < 4; ++A) w[A].assign(wide.grid.node_count(), A == 1 ? 1.0 : 0.0);
    s = project(wide, mdw, w);
    const std::size_t at = node_near(wide.grid, std::numbers::pi / 3, 0.5);
    const double us = wide.grid.coord(0, int(at / wide.grid.stride(0)));
    double norm2 = 0.0;
    for (int A = 0; A < 4; ++A) norm2 += s.normal[A][at] * s.normal[A][at];
    CHECK(std::sqrt(norm2) == doctest::Approx(std::cos(us)).epsilon(1e-12));
    double worst_dot = 0.0, worst_sum = 0.0;
    wide.grid.interior().for_each_node([&](std::size_t off, const int*) {
        double dot = 0.0;
        for (int A = 0; A < 4; ++A) {
            dot += s.tangential[A][off] * s.normal[A][off];
            worst_sum = std::max(
                worst_sum, std::fabs(s.tangential[A][off] + s.normal[A][off] - w[A][off]));
        }
        worst_dot = std::max(worst_dot, std::fabs(dot));
    });
    CHECK(worst_dot <= 1e-10);  // <W_T, W_perp> <= 1e-10 |W|^2 (|W| = 1 here)
    CHECK(worst_sum == 0.0);    // W_T + W_perp = W exactly

    // idempotence: projecting the parts changes nothing
    SplitField s2 = project(wide, mdw, s.normal);
    for (int A = 0; A < 4; ++A) {
        NodeArray diff = zeros(wide.grid);
        bk::sub(wide.grid.interior(), diff, s2.normal[A], s.normal[A]);
        CHECK(bk::max_abs(wide.grid.interior(), diff) <= 1e-12);
    }
}

TEST_CASE("lagrangian defect: catalog patches vanish, pi/2 windows rejected") {
    const ImmersedPatch gr =
        make_grim_reaper_cylinder(2, {{-1, 1}, {0, 1}}, 33, Backend::Analytic);
    CHECK(lagrangian_defect(gr).sup <= 1e-10);
    const ImmersedPatch flat =
        make_flat_plane(2, {1, 0, 0, 0}, {{0, 1}, {0, 1}}, 16, Backend::Analytic);
    CHECK(lagrangian_defect(flat).sup == 0.0);
}

TEST_CASE("finite-difference backend reproduces analytic tensors at order >= 1.8") {
    double prev_g = 0.0, prev_h = 0.0;
    double order_g = 10.0, order_h = 10.0;
    for (int res : {16, 32, 64, 128}) {
        const ImmersedPatch fd =
            make_grim_reaper_cylinder(2, {{-1, 1}, {0, 1}}, res, Backend::FiniteDifference);
        const ImmersedPatch an =
            make_grim_reaper_cylinder(2, {{-1, 1}, {0, 1}}, res, Backend::Analytic);
        const MetricData mf = metric_data(fd, 1);
        const MetricData ma = metric_data(an, 1);
        const SffData sf = second_fundamental_form(fd, mf);
        const SffData sa = second_fundamental_form(an, ma);
        // compare on a fixed sub-window: the moving interior edge carries a
        // sec-factor coefficient that settles only asymptotically
        double dg = 0.0, dh = 0.0;
        fd.grid.interior().for_each_node([&](std::size_t off, const int* idx) {
            if (std::fabs(fd.grid.coord(0, idx[0])) > 0.9) return;
            for (int ij = 0; ij < sym2_count(2); ++ij)
                dg = std::max(dg, std::fabs(mf.g[ij][off] - ma.g[ij][off]));
            for (int A = 0; A < 4; ++A)
                dh = std::max(dh, std::fabs(sf.mean[A][off] - sa.mean[A][off]));
        });
        if (prev_g > 0.0) {
            const double hr = std::log(double(res - 1) / (res / 2 - 1));
            order_g = std::min(order_g, std::log(prev_g / dg) / hr);
            order_h = std::min(order_h, std::log(prev_h / dh) / hr);
        }
        prev_g = dg;
        prev_h = dh;
    }
    CHECK(order_g >= 1.8);
    CHECK(order_h >= 1.8);
}
