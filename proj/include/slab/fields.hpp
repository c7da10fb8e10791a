#pragma once
// Scalar and ambient-vector fields on a grid, carrying analytic partials up
// to third (scalar) or second (vector) order.  A compactly supported field is
// exactly zero within `support.margin` node layers of every face; its stored
// arrays are therefore valid everywhere.  For full-window fields `margin`
// tracks how many face layers hold garbage (finite-difference backends).

#include <cstdint>
#include <vector>

#include "slab/grid.hpp"
#include "slab/patch.hpp"

namespace slab {

struct Support {
    bool compact = false;
    int margin = 0;   // exact-zero layers when compact
};

struct ScalarField {
    int order = 0;    // derivative orders carried (0..3)
    int margin = 0;   // validity margin
    Support support;
    NodeArray f;
    std::vector<NodeArray> d1;  // n
    std::vector<NodeArray> d2;  // sym2
    std::vector<NodeArray> d3;  // sym3

    const NodeArray& d1_at(int i) const { return d1[i]; }
    const NodeArray& d2_at(int i, int j) const { return d2[sym2_index(i, j)]; }
    const NodeArray& d3_at(int i, int j, int k) const { return d3[sym3_index(i, j, k)]; }
};

struct VectorField {
    int amb = 0;
    int order = 0;    // 0..2
    int margin = 0;
    Support support;
    std::vector<NodeArray> v;   // N
    std::vector<NodeArray> d1;  // n*N
    std::vector<NodeArray> d2;  // sym2*N

    const NodeArray& at(int A) const { return v[A]; }
    const NodeArray& d1_at(int i, int A) const { return d1[i * amb + A]; }
    const NodeArray& d2_at(int i, int j, int A) const { return d2[sym2_index(i, j) * amb + A]; }
};

// chi(t) = exp(1 - 1/(1-t^2)) per axis, rescaled to vanish identically within
// `margin` node layers of every face; partials to order 3.  Throws when the
// margin leaves no support or is below the stencil margin + 1.
ScalarField cutoff_bump(const ParameterGrid& grid, int margin);

// Trigonometric polynomial of per-axis degree <= 3 with seeded uniform
// coefficients in [-1, 1]; smooth on the whole window, partials to order 3.
ScalarField trig_polynomial(const ParameterGrid& grid, std::uint64_t seed);

ScalarField constant_scalar(const ParameterGrid& grid, double value);

// Restriction of the ambient coordinate x^A to the patch, partials taken
// from the patch jets.
ScalarField coordinate_field(const ImmersedPatch& patch, int A);

// Leibniz products
ScalarField multiply(const ParameterGrid& grid, const ScalarField& a, const ScalarField& b);
VectorField multiply(const ParameterGrid& grid, const ScalarField& s, const VectorField& v);

// J applied componentwise to a vector field and its partials.
VectorField apply_complex_structure(const VectorField& v);

// Vector field sampled from plain component blocks (no partials).
VectorField vector_from_block(const ImmersedPatch& patch, std::vector<NodeArray> block);

// Fills missing first/second partials of a compactly supported vector field
// by second-order central differences of its node values.
void fd_complete(const ParameterGrid& grid, VectorField& field, int target_order);

} // namespace slab
