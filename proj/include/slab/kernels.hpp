#pragma once
// Pointwise array kernels with runtime-dispatched SIMD variants.
//
// All node-level arithmetic in the library flows through this table so the
// scalar reference path and the AVX2 path are interchangeable.  Every kernel
// is specified operation-by-operation (including the use of fused
// multiply-add), so the two variants produce bit-identical results; the
// equivalence suite asserts this.  Reductions are NOT dispatched: they run
// scalar in lexicographic node order so report numbers are bit-stable.

#include <cstddef>
#include <string>

namespace slab::kernels {

struct Ops {
    const char* name;
    // dst[i] = a[i] (+|-|*|/) b[i]
    void (*add)(double* dst, const double* a, const double* b, std::size_t len);
    void (*sub)(double* dst, const double* a, const double* b, std::size_t len);
    void (*mul)(double* dst, const double* a, const double* b, std::size_t len);
    void (*div)(double* dst, const double* a, const double* b, std::size_t len);
    // dst[i] = fma(a[i], b[i], dst[i]) and dst[i] = fma(-a[i], b[i], dst[i])
    void (*fma_acc)(double* dst, const double* a, const double* b, std::size_t len);
    void (*fnma_acc)(double* dst, const double* a, const double* b, std::size_t len);
    // dst[i] = a[i]*s  and  dst[i] = fma(s, a[i], dst[i])
    void (*scale)(double* dst, const double* a, double s, std::size_t len);
    void (*axpy)(double* dst, const double* a, double s, std::size_t len);
    // dst[i] = sqrt(a[i])
    void (*sqrt_of)(double* dst, const double* a, std::size_t len);
};

enum class Mode { Auto, Scalar, Avx2 };

const Ops& scalar_ops();
const Ops* avx2_ops();   // null when the CPU or build lacks AVX2+FMA

// Active table.  Default selection: SOLITONLAB_KERNELS env (scalar|avx2|auto),
// else AVX2 when available.  select() throws if an unsupported mode is forced.
const Ops& active();
void select(Mode mode);
Mode parse_mode(const std::string& name);

// Deterministic reductions, always scalar, in index order.
double reduce_sum(const double* a, std::size_t len);
double reduce_dot(const double* a, const double* b, std::size_t len);          // sum fma(a,b,acc)
double reduce_dot3(const double* w, const double* a, const double* b, std::size_t len); // sum fma(w*a, b, acc)
double reduce_max_abs(const double* a, std::size_t len);

} // namespace slab::kernels
