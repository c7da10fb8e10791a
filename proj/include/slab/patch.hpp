#pragma once
// Immersed patches: a chart sampled on a parameter grid together with its
// derivative jets (to third order), either supplied in closed form or built
// from positions by second-order central stencils.

#include <memory>
#include <utility>
#include <vector>

#include "slab/ambient.hpp"
#include "slab/grid.hpp"

namespace slab {

enum class Backend { Analytic, FiniteDifference };

inline const char* backend_name(Backend b) {
    return b == Backend::Analytic ? "analytic" : "fd";
}

// A chart from the parameter box into ambient space.  Charts that can supply
// closed-form jets to order 3 override jets(); otherwise only position() is
// used and the finite-difference backend fills the jets.
class Chart {
public:
    virtual ~Chart() = default;
    virtual int domain_dim() const = 0;
    virtual int ambient_dim() const = 0;
    virtual bool has_jets() const { return false; }
    virtual void position(const double* u, double* x) const = 0;
    // x: N values; d1: n*N (i*N+A); d2: sym2*N; d3: sym3*N
    virtual void jets(const double* u, double* x, double* d1, double* d2, double* d3) const;
};

// Per-node jets of the immersion, stored as structure-of-arrays blocks.
struct JetField {
    int order = 0;                 // 1..3
    std::vector<NodeArray> pos;    // N
    std::vector<NodeArray> d1;     // n*N
    std::vector<NodeArray> d2;     // sym2(n)*N
    std::vector<NodeArray> d3;     // sym3(n)*N
};

struct ImmersedPatch {
    ParameterGrid grid;
    AmbientStructure ambient;
    Backend backend = Backend::Analytic;
    bool lagrangian = false;
    JetField jets;

    int n() const { return grid.n; }
    int amb() const { return ambient.dim; }

    const NodeArray& pos(int A) const { return jets.pos[A]; }
    const NodeArray& d1(int i, int A) const { return jets.d1[i * amb() + A]; }
    const NodeArray& d2(int i, int j, int A) const {
        return jets.d2[sym2_index(i, j) * amb() + A];
    }
    const NodeArray& d3(int i, int j, int k, int A) const {
        return jets.d3[sym3_index(i, j, k) * amb() + A];
    }
};

// Builds a patch.  The grid margin must match the backend (0 analytic, 2
// finite-difference).  Verifies the immersion invariant det g > 1e-12 at
// every interior node and, when lagrangian is set, that the Lagrangian
// defect vanishes to the backend tolerance.
ImmersedPatch build_patch(const Chart& chart, const ParameterGrid& grid,
                          AmbientStructure ambient, Backend backend, bool lagrangian);

// Assembles a patch directly from jets (used by deformations).  No defect or
// immersion check here; callers validate what they need.
ImmersedPatch patch_from_jets(ParameterGrid grid, AmbientStructure ambient, Backend backend,
                              JetField jets);

// Tangential/normal splitting of an ambient block W (N node arrays):
// W_T = g^{ij} <W, X_j> X_i, W_perp = W - W_T.
struct MetricData;
struct SplitField {
    std::vector<NodeArray> tangential;
    std::vector<NodeArray> normal;
};
SplitField project(const ImmersedPatch& patch, const MetricData& metric,
                   const std::vector<NodeArray>& w);

// sup_{i<j} |omega(X_i, X_j)| per node plus the patch-level sup over the
// interior.  Requires N = 2n.
struct LagrangianDefect {
    NodeArray field;
    double sup = 0.0;
};
LagrangianDefect lagrangian_defect(const ImmersedPatch& patch);

} // namespace slab
