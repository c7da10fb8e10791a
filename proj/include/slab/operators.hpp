#pragma once
// The operator toolkit: intrinsic gradient, drifted Laplacian
// Lv = Delta v + <T, grad v>, normal connection, the stability operator
// LV = Delta_perp V + nabla_perp_{T_T} V + <<A,V>,A>, Hamiltonian fields
// V = J grad f, and weighted quadrature with density e^{<T,x>}.
//
// Every operator takes the translation vector explicitly so checks can probe
// deliberately wrong choices of T.

#include <vector>

#include "slab/fields.hpp"
#include "slab/geometry.hpp"
#include "slab/patch.hpp"

namespace slab {

// grad f = g^{ij} (d_j f) X_i as an ambient block (values only).
std::vector<NodeArray> gradient_block(const ImmersedPatch& patch, const MetricData& metric,
                                      const ScalarField& f);

// Lf = g^{ij}(f_ij - Gamma^k_ij f_k) + <T, grad f>.  With with_gradient the
// result carries first partials (needs third jets, metric level 2, f order 3).
ScalarField drifted_laplacian(const ImmersedPatch& patch, const MetricData& metric,
                              const std::vector<double>& T, const ScalarField& f,
                              bool with_gradient = false);

// nabla_perp_dir V = normal projection of the ambient derivative of V.
VectorField normal_connection(const ImmersedPatch& patch, const MetricData& metric,
                              const VectorField& v, int dir);

// LV on a Lagrangian patch; V must carry two derivative orders.
VectorField stability_operator(const ImmersedPatch& patch, const MetricData& metric,
                               const SffData& sff, const std::vector<double>& T,
                               const VectorField& v);

// V = J grad f with as many ambient partials as f affords (order = f.order-1,
// capped at 2).  Lagrangian patches only.
VectorField hamiltonian_field(const ImmersedPatch& patch, const MetricData& metric,
                              const ScalarField& f);

// y^perp for a constant ambient vector y, with ambient partials to order 2.
VectorField const_perp_field(const ImmersedPatch& patch, const MetricData& metric,
                             const std::vector<double>& y);

// sup over the interior of |<V, X_i>| / (|V| |X_i|); the NormalField
// orthogonality defect.
double normal_defect(const ImmersedPatch& patch, const VectorField& v);

// Trapezoid quadrature weights w = cell * e^{<T,x>} * sqrt(det g) on the
// interior window (face cells halved per axis).
struct WeightedMeasure {
    int layers = 0;   // region margin
    Region region;
    NodeArray w;      // zero outside the region
    double total = 0; // integral of 1
};
WeightedMeasure weighted_measure(const ImmersedPatch& patch, const MetricData& metric,
                                 const std::vector<double>& T);

double weighted_integral(const WeightedMeasure& measure, const NodeArray& integrand);
// integral of <a, b> for ambient blocks
double weighted_block_dot(const WeightedMeasure& measure, const std::vector<NodeArray>& a,
                          const std::vector<NodeArray>& b);

struct ResidualNorms {
    double sup = 0.0;
    double l2 = 0.0;
};
// Norms of a scalar/vector residual over the interior shrunk by extra_layers;
// l2 is weighted: sqrt( int field^2 e^{<T,x>} dmu ).
ResidualNorms scalar_norms(const ImmersedPatch& patch, const WeightedMeasure& measure,
                           const NodeArray& field, int extra_layers = 0);
ResidualNorms block_norms(const ImmersedPatch& patch, const WeightedMeasure& measure,
                          const std::vector<NodeArray>& block, int extra_layers = 0);

} // namespace slab
