// Scalar reference kernels.  These define the arithmetic contract: the SIMD
// variants must reproduce them bit-for-bit (same ops, same fma placement).

#include "slab/kernels.hpp"

#include <cmath>

namespace slab::kernels {
namespace {

void s_add(double* dst, const double* a, const double* b, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = a[i] + b[i];
}
void s_sub(double* dst, const double* a, const double* b, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = a[i] - b[i];
}
void s_mul(double* dst, const double* a, const double* b, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = a[i] * b[i];
}
void s_div(double* dst, const double* a, const double* b, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = a[i] / b[i];
}
void s_fma_acc(double* dst, const double* a, const double* b, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = std::fma(a[i], b[i], dst[i]);
}
void s_fnma_acc(double* dst, const double* a, const double* b, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = std::fma(-a[i], b[i], dst[i]);
}
void s_scale(double* dst, const double* a, double s, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = a[i] * s;
}
void s_axpy(double* dst, const double* a, double s, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = std::fma(s, a[i], dst[i]);
}
void s_sqrt(double* dst, const double* a, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = std::sqrt(a[i]);
}

} // namespace

const Ops& scalar_ops() {
    static const Ops table{"scalar", s_add,  s_sub,   s_mul,  s_div, s_fma_acc,
                           s_fnma_acc, s_scale, s_axpy, s_sqrt};
    return table;
}

double reduce_sum(const double* a, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc += a[i];
    return acc;
}

double reduce_dot(const double* a, const double* b, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc = std::fma(a[i], b[i], acc);
    return acc;
}

double reduce_dot3(const double* w, const double* a, const double* b, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc = std::fma(w[i] * a[i], b[i], acc);
    return acc;
}

double reduce_max_abs(const double* a, std::size_t len) {
    double m = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double v = a[i] < 0.0 ? -a[i] : a[i];
        if (v > m) m = v;
    }
    return m;
}

} // namespace slab::kernels
