// SPDX-License-Identifier: Apache-2.0

#include "polarcat/kernels.hpp"

#include <cstddef>

#if defined(__x86_64__) || defined(_M_X64)
#define POLARCAT_X86 1
#include <immintrin.h>
#else
#define POLARCAT_X86 0
#endif

namespace polarcat::kernels {

double dot_ref(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_ref(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

#if POLARCAT_X86

__attribute__((target("avx2,fma"))) static double dot_avx2(
    std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const double* px = x.data();
    const double* py = y.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i + 4), _mm256_loadu_pd(py + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
    __m256d acc = _mm256_add_pd(acc0, acc1);
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s2 = _mm_add_pd(lo, hi);
    double out = _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
    for (; i < n; ++i) out += px[i] * py[i];
    return out;
}

__attribute__((target("avx2,fma"))) static void axpy_avx2(double a,
                                                          std::span<const double> x,
                                                          std::span<double> y) {
    const std::size_t n = x.size();
    const double* px = x.data();
    double* py = y.data();
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_pd(py + i,
                         _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i)));
        _mm256_storeu_pd(
            py + i + 4,
            _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i + 4), _mm256_loadu_pd(py + i + 4)));
    }
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(py + i,
                         _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i)));
    for (; i < n; ++i) py[i] += a * px[i];
}

static bool cpu_has_avx2_fma() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#endif  // POLARCAT_X86

namespace {

Backend detect_backend() {
#if POLARCAT_X86
    if (cpu_has_avx2_fma()) return Backend::avx2;
#endif
    return Backend::scalar;
}

std::optional<Backend>& forced() {
    static std::optional<Backend> f;
    return f;
}

Backend current() {
    static const Backend detected = detect_backend();
    return forced().value_or(detected);
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
#if POLARCAT_X86
    if (current() == Backend::avx2) return dot_avx2(x, y);
#endif
    return dot_ref(x, y);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
#if POLARCAT_X86
    if (current() == Backend::avx2) {
        axpy_avx2(a, x, y);
        return;
    }
#endif
    axpy_ref(a, x, y);
}

Backend active_backend() { return current(); }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::avx2:
            return "avx2";
        case Backend::scalar:
        default:
            return "scalar";
    }
}

void force_backend(std::optional<Backend> b) {
#if POLARCAT_X86
    if (b == Backend::avx2 && !cpu_has_avx2_fma()) b = Backend::scalar;
#else
    if (b == Backend::avx2) b = Backend::scalar;
#endif
    forced() = b;
}

}  // namespace polarcat::kernels
