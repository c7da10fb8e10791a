#pragma once
// Explicit Lagrangian translating solitons with closed-form jets: flat
// planes, grim reaper cylinders and grim reaper products
//   u -> (u_1, -(1/c_1) log cos(c_1 u_1), ..., u_n, -(1/c_n) log cos(c_n u_n))
// which translate with T = (0, c_1, ..., 0, c_n).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "slab/operators.hpp"
#include "slab/patch.hpp"

namespace slab {

struct SolitonSpec {
    std::string name;                             // flat-plane | grim-reaper-cylinder | grim-reaper-product
    int n = 2;
    std::vector<double> speeds;                   // product family, size n, all > 0
    std::vector<std::array<double, 2>> window;    // empty -> catalog defaults
    int resolution = 64;
    std::vector<double> translation;              // flat plane only: tangent T

    // plain-text key=value round-trip, e.g.
    // "name=grim-reaper-product n=2 speeds=1,2 window=-0.7:0.7,-0.7:0.7 res=64"
    std::string to_kv() const;
    static SolitonSpec from_kv(const std::string& text);

    std::vector<std::array<double, 2>> effective_window() const;
    std::vector<double> effective_translation() const;
};

ImmersedPatch make_patch(const SolitonSpec& spec, Backend backend);

ImmersedPatch make_flat_plane(int n, const std::vector<double>& translation,
                              const std::vector<std::array<double, 2>>& window, int resolution,
                              Backend backend);
ImmersedPatch make_grim_reaper_cylinder(int n, const std::vector<std::array<double, 2>>& window,
                                        int resolution, Backend backend);
ImmersedPatch make_grim_reaper_product(const std::vector<double>& speeds,
                                       const std::vector<std::array<double, 2>>& window,
                                       int resolution, Backend backend);

// sup and weighted-L2 norms of H - T^perp over the interior.
ResidualNorms soliton_residual(const ImmersedPatch& patch, const MetricData& metric,
                               const SffData& sff, const std::vector<double>& T,
                               const WeightedMeasure& measure);

// Exact window F-value for a catalog soliton over the given sub-window
// (the weighted area element splits into per-axis factors; each grim reaper
// axis contributes (tan(c b) - tan(c a))/c, each flat axis with tangential
// drift t contributes (e^{t b} - e^{t a})/t).
double closed_form_f(const SolitonSpec& spec,
                     const std::vector<std::array<double, 2>>& window);

const std::vector<std::string>& catalog_names();

} // namespace slab
