// AVX2+FMA kernel variants.  Lanes map to consecutive nodes; each lane runs
// the exact scalar op sequence (vfmadd mirrors std::fma, vdivpd/vsqrtpd are
// correctly rounded), so results are bit-identical to the scalar table.
// Tails fall back to the scalar ops.

#include "slab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#define SLAB_AVX2 __attribute__((target("avx2,fma")))

namespace slab::kernels {
namespace {

SLAB_AVX2 void v_add(double* dst, const double* a, const double* b, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < len; ++i) dst[i] = a[i] + b[i];
}

SLAB_AVX2 void v_sub(double* dst, const double* a, const double* b, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < len; ++i) dst[i] = a[i] - b[i];
}

SLAB_AVX2 void v_mul(double* dst, const double* a, const double* b, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < len; ++i) dst[i] = a[i] * b[i];
}

SLAB_AVX2 void v_div(double* dst, const double* a, const double* b, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_div_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < len; ++i) dst[i] = a[i] / b[i];
}

SLAB_AVX2 void v_fma_acc(double* dst, const double* a, const double* b, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                                                  _mm256_loadu_pd(dst + i)));
    for (; i < len; ++i) dst[i] = std::fma(a[i], b[i], dst[i]);
}

SLAB_AVX2 void v_fnma_acc(double* dst, const double* a, const double* b, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_fnmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                                                   _mm256_loadu_pd(dst + i)));
    for (; i < len; ++i) dst[i] = std::fma(-a[i], b[i], dst[i]);
}

SLAB_AVX2 void v_scale(double* dst, const double* a, double s, std::size_t len) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vs));
    for (; i < len; ++i) dst[i] = a[i] * s;
}

SLAB_AVX2 void v_axpy(double* dst, const double* a, double s, std::size_t len) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(vs, _mm256_loadu_pd(a + i), _mm256_loadu_pd(dst + i)));
    for (; i < len; ++i) dst[i] = std::fma(s, a[i], dst[i]);
}

SLAB_AVX2 void v_sqrt(double* dst, const double* a, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_sqrt_pd(_mm256_loadu_pd(a + i)));
    for (; i < len; ++i) dst[i] = std::sqrt(a[i]);
}

const Ops avx2_table{"avx2", v_add,    v_sub,   v_mul,  v_div,  v_fma_acc,
                     v_fnma_acc, v_scale, v_axpy, v_sqrt};

} // namespace

const Ops* avx2_ops() {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &avx2_table;
    return nullptr;
}

} // namespace slab::kernels

#else // non-x86 builds: no AVX2 table

namespace slab::kernels {
const Ops* avx2_ops() { return nullptr; }
} // namespace slab::kernels

#endif
