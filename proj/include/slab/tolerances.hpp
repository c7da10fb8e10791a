#pragma once
// Every pass/fail threshold used by the checks, pinned in one place.
//
// Analytic-backend identities are exact up to roundoff, so they get absolute
// thresholds.  Finite-difference quantities carry O(h^2) truncation error, so
// single-resolution runs get an h^2-scaled sanity gate and the real
// certification is the convergence-order assertion (>= 1.8).  Quadrature
// agreements get the floor max(rel_floor, C*(h^2 + s^2)) relative to the
// sample's own scale.

namespace slab::tol {

// patch algebra
inline constexpr double kDetFloor = 1e-12;          // immersion: det g must exceed this
inline constexpr double kMetricAlgebra = 1e-12;     // g * g^{-1} = Id
inline constexpr double kProjectionOrth = 1e-10;    // <W_T, W_perp> <= this * |W|^2

// soliton certification (analytic backend)
inline constexpr double kSolitonResidual = 1e-8;    // sup |H - T_perp|
inline constexpr double kLagrangianDefect = 1e-10;  // sup |omega(X_i, X_j)|

// pointwise operator identities (analytic backend): Ly_perp, LH, Lx^A - T^A,
// L Jgrad f - Jgrad L f
inline constexpr double kPointwiseIdentity = 1e-6;

// finite-difference backend: sanity gate coef * h_max^2 at a single
// resolution; order gate for ladders
inline constexpr double kFdSanityCoef = 300.0;
inline constexpr double kFdOrderMin = 1.8;

// F-functional quadrature: |F - closed form| <= coef * (1 + |exact|) * h^2
// (Euler-Maclaurin boundary term; the coefficient covers sec^2 integrands up
// to the 0.8-of-maximal catalog windows); convergence order of the trapezoid
inline constexpr double kFValueCoef = 50.0;
inline constexpr double kFValueOrderMin = 1.9;

// integration by parts, relative to int |grad u||grad v| e: tier by
// resolution (trapezoid error on smooth compactly supported integrands decays
// faster than any power, but is not yet asymptotic on coarse grids)
inline double ibp_rel(int resolution, bool finite_difference, double h_max) {
    if (finite_difference) return 50.0 * h_max * h_max;
    if (resolution >= 128) return 1e-6;
    if (resolution >= 64) return 1e-4;
    if (resolution >= 32) return 1e-2;
    return 1.0;
}

// first variation at a certified soliton: |formula|, |dF/ds| and their
// difference; s is the configured base step (before sup|V| normalization)
inline constexpr double kCriticalityFloor = 1e-6;
inline constexpr double kCriticalityStepCoef = 10.0;
// deliberately wrong soliton: fd and formula must agree to this, relatively
inline constexpr double kNonCriticalRel = 1e-4;

// three-way second variation agreement, relative to
// scale = int (|f| + |grad f|^2) e.  The quadrature error on the trig-times-
// bump integrands is governed by the phase advance per node of the highest
// (degree 3) mode, eps = 6 pi / (res - 1), independent of the window width;
// the fd truncation adds s_used^2.
inline constexpr double kThreeWayRelFloor = 1e-6;
inline constexpr double kThreeWayCoef = 2.0;        // * scale * (eps^2 + s_used^2)
inline double three_way_rel(int resolution, double step_used) {
    const double eps = 6.0 * 3.14159265358979323846 / (resolution - 1);
    const double e2 = eps * eps + step_used * step_used;
    return kThreeWayCoef * e2 > kThreeWayRelFloor ? kThreeWayCoef * e2 : kThreeWayRelFloor;
}
inline constexpr double kNonnegativity = -1e-8;     // * scale
inline constexpr double kConstSampleZero = 1e-12;

// second-variation fd against the quadratic form for fields with differenced
// jets (V = bump * H): coef * scale * (h^2 + s^2)
inline constexpr double kDifferencedFieldCoef = 10.0;

// certification gate used before second variations are allowed
inline double soliton_cert(bool finite_difference, double h_max) {
    return finite_difference ? 100.0 * h_max * h_max : kSolitonResidual;
}

} // namespace slab::tol
