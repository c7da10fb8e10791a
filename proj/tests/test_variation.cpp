#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "slab/blockops.hpp"
#include "slab/tolerances.hpp"
#include "slab/variation.hpp"

using namespace slab;

namespace {

Workbench cylinder_bench(int res = 64, Backend backend = Backend::Analytic) {
    return make_workbench(
        SolitonSpec::from_kv("name=grim-reaper-cylinder n=2 window=-1:1,0:1 res=" +
                             std::to_string(res)),
        backend);
}

VectorField seeded_hamiltonian(const Workbench& b, std::uint64_t seed) {
    const ScalarField f = multiply(b.patch.grid, cutoff_bump(b.patch.grid, 3),
                                   trig_polynomial(b.patch.grid, seed));
    return hamiltonian_field(b.patch, b.metric, f);
}

} // namespace

TEST_CASE("deform: s = 0 and V = 0 reproduce the base patch exactly") {
    const Workbench b = cylinder_bench(32);
    const VectorField v = seeded_hamiltonian(b, 5);
    const ImmersedPatch same = deform(b.patch, v, 0.0);
    for (int A = 0; A < 4; ++A)
        CHECK(std::memcmp(same.pos(A).data(), b.patch.pos(A).data(),
                          same.pos(A).size() * sizeof(double)) == 0);

    const ScalarField zero_f = constant_scalar(b.patch.grid, 0.0);
    const VectorField zero_v = hamiltonian_field(b.patch, b.metric, zero_f);
    const ImmersedPatch same2 = deform(b.patch, zero_v, 0.37);
    CHECK(f_value(same2, b.T) == b.measure.total);
}

TEST_CASE("deform: steps that crush the metric are rejected with s named") {
    const Workbench b = cylinder_bench(32);
    // V = -X scales every tangent by (1 - s); s = 1 collapses the immersion
    VectorField v;
    v.amb = 4;
    v.order = 2;
    v.v.assign(4, zeros(b.patch.grid));
    v.d1.assign(8, zeros(b.patch.grid));
    v.d2.assign(12, zeros(b.patch.grid));
    const Region all = bk::margin_region(b.patch.grid, 0);
    for (int A = 0; A < 4; ++A) {
        bk::scale(all, v.v[A], b.patch.pos(A), -1.0);
        for (int i = 0; i < 2; ++i) bk::scale(all, v.d1[i * 4 + A], b.patch.d1(i, A), -1.0);
        for (int ij = 0; ij < 3; ++ij)
            bk::scale(all, v.d2[ij * 4 + A], b.patch.jets.d2[ij * 4 + A], -1.0);
    }
    CHECK_THROWS_WITH_AS(deform(b.patch, v, 1.0), doctest::Contains("s = "),
                         std::invalid_argument);
}

TEST_CASE("F changes by O(s^2) at a critical point") {
    const Workbench b = cylinder_bench();
    const VectorField v = seeded_hamiltonian(b, 42);
    const double f0 = b.measure.total;
    double prev = 0.0;
    for (const double s : {1e-3, 5e-4}) {
        const double df = std::fabs(f_value(deform(b.patch, v, s), b.T) - f0);
        if (prev > 0.0) {
            const double order = std::log(prev / df) / std::log(2.0);
            CHECK(order >= 1.9);
        }
        prev = df;
    }
}

TEST_CASE("second variation fd is refused off a certified soliton") {
    Workbench b = cylinder_bench(32);
    const VectorField v = seeded_hamiltonian(b, 6);
    // poison the certification: wrong translation
    Workbench wrong = b;
    wrong.T = {1, 0, 0, 0};
    wrong.cert = soliton_residual(wrong.patch, wrong.metric, wrong.sff, wrong.T, wrong.measure);
    wrong.certified = wrong.cert.sup <= tol::kSolitonResidual;
    CHECK_FALSE(wrong.certified);
    CHECK_THROWS_AS(second_variation_fd(wrong, v, 1e-3), std::runtime_error);
}

TEST_CASE("fd second variation halves its error when the step halves twice") {
    const Workbench b = cylinder_bench();
    const VectorField v = seeded_hamiltonian(b, 9);
    const double qf = quadratic_form(b, v);
    // fd error ~ C s^2 + quadrature offset; compare against the quadrature
    // limit obtained at the smallest step
    const double limit = second_variation_fd(b, v, 2.5e-4).fd;
    const double e1 = std::fabs(second_variation_fd(b, v, 4e-3).fd - limit);
    const double e2 = std::fabs(second_variation_fd(b, v, 2e-3).fd - limit);
    CHECK(e2 <= 0.35 * e1);  // O(s^2) halving, with roundoff slack
    CHECK(std::fabs(qf - limit) / std::fabs(qf) <= 1e-3);  // both routes agree
}

TEST_CASE("bump * H with differenced jets matches the quadratic form") {
    const Workbench b = cylinder_bench();
    const ScalarField bump = cutoff_bump(b.patch.grid, 3);
    VectorField h = vector_from_block(b.patch, b.sff.mean);
    VectorField v = multiply(b.patch.grid, bump, h);
    fd_complete(b.patch.grid, v, 2);
    const SecondVariation sv = second_variation_fd(b, v, 1e-3);
    const double qf = quadratic_form(b, v);
    // scale = int (|bump| + |V|^2) e
    NodeArray sc = zeros(b.patch.grid);
    const Region reg = b.patch.grid.interior();
    reg.for_each_row([&](std::size_t off, std::size_t len) {
        for (std::size_t k = 0; k < len; ++k) sc[off + k] = std::fabs(bump.f[off + k]);
    });
    for (const auto& comp : v.v) bk::fma(reg, sc, comp, comp);
    const double scale = weighted_integral(b.measure, sc);
    const double h2 = b.patch.grid.max_spacing() * b.patch.grid.max_spacing();
    const double tol = tol::kDifferencedFieldCoef * scale *
                       (h2 + sv.step_used * sv.step_used);
    CHECK(std::fabs(sv.fd - qf) <= tol);
}

TEST_CASE("first variation on the wrong flat plane: both sides positive and equal") {
    Workbench b = make_workbench(
        SolitonSpec::from_kv("name=flat-plane n=2 window=0:1,0:1 res=64 t=1,0,0,0"),
        Backend::Analytic);
    // evaluate everything with the deliberately wrong T = dy1
    b.T = {0, 1, 0, 0};
    b.measure = weighted_measure(b.patch, b.metric, b.T);
    b.cert = soliton_residual(b.patch, b.metric, b.sff, b.T, b.measure);
    b.certified = false;

    const ScalarField bump = cutoff_bump(b.patch.grid, 3);
    VectorField dir;
    dir.amb = 4;
    dir.order = 2;
    dir.v.assign(4, zeros(b.patch.grid));
    dir.d1.assign(8, zeros(b.patch.grid));
    dir.d2.assign(12, zeros(b.patch.grid));
    std::fill(dir.v[1].begin(), dir.v[1].end(), 1.0);
    const VectorField v = multiply(b.patch.grid, bump, dir);

    const VariationSides sides = first_variation_sides(b, v, 1e-3);
    CHECK(sides.formula > 0.0);
    CHECK(sides.fd > 0.0);
    CHECK(std::fabs(sides.fd - sides.formula) / sides.formula <= tol::kNonCriticalRel);
    // brute-force the formula: <T_perp - H, V> = bump on this plane
    NodeArray uf = bump.f;
    CHECK(sides.formula == doctest::Approx(weighted_integral(b.measure, uf)).epsilon(1e-12));
}

TEST_CASE("stability scan is deterministic down to the bits") {
    const SolitonSpec spec =
        SolitonSpec::from_kv("name=grim-reaper-cylinder n=2 window=-1:1,0:1 res=32");
    CheckParams params;
    params.samples = 4;
    const CheckReport a = run_check("stability", spec, params);
    const CheckReport b = run_check("stability", spec, params);
    REQUIRE(a.detail.size() == b.detail.size());
    for (std::size_t i = 0; i < a.detail.size(); ++i) {
        REQUIRE(a.detail[i].kv.size() == b.detail[i].kv.size());
        for (std::size_t k = 0; k < a.detail[i].kv.size(); ++k) {
            CHECK(a.detail[i].kv[k].first == b.detail[i].kv[k].first);
            CHECK(std::memcmp(&a.detail[i].kv[k].second, &b.detail[i].kv[k].second,
                              sizeof(double)) == 0);
        }
    }
    CHECK(a.sup_residual == b.sup_residual);
}

TEST_CASE("commutation on the flat plane is exact for polynomial-free charts") {
    const SolitonSpec spec =
        SolitonSpec::from_kv("name=flat-plane n=2 window=0:1,0:1 res=32 t=1,0,0,0");
    CheckParams params;
    const CheckReport rep = run_check("commutation", spec, params);
    CHECK(rep.passed);
    CHECK(rep.sup_residual <= 1e-10);
}

TEST_CASE("convergence study guards its ladder") {
    const SolitonSpec spec =
        SolitonSpec::from_kv("name=grim-reaper-cylinder n=2 window=-1:1,0:1 res=64");
    CheckParams params;
    CHECK_THROWS_AS(convergence_study("soliton", spec, {16, 24, 32}, params),
                    std::invalid_argument);
    CHECK_THROWS_AS(convergence_study("soliton", spec, {16, 32}, params),
                    std::invalid_argument);
    CHECK_THROWS_AS(convergence_study("stability", spec, {16, 32, 64}, params),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS(run_check("spectral-gap", spec, params),
                         doctest::Contains("available"), std::invalid_argument);
}

TEST_CASE("analytic convergence study passes on residual floors") {
    const SolitonSpec spec =
        SolitonSpec::from_kv("name=grim-reaper-cylinder n=2 window=-1:1,0:1 res=64");
    CheckParams params;
    const CheckReport rep = convergence_study("soliton", spec, {16, 32, 64}, params);
    CHECK(rep.passed);
    CHECK(rep.check == "soliton-convergence");
}
