#include "expclass/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>

namespace expclass::kernels {

constexpr std::size_t kExpResync = 1024;  // keep in sync with scalar.cpp

namespace avx2_impl {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline __m256d vabs(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

void exp_decay_fill(double* out, std::size_t n, double x0, double step, double inv_mu) {
    const double r = std::exp(-step * inv_mu);
    const double r2 = r * r;
    const __m256d vr4 = _mm256_set1_pd(r2 * r2);
    std::size_t i = 0;
    while (i < n) {
        // One resync block: lanes hold v*r^{0..3}, stepped by r^4.
        const std::size_t end = (n < i + kExpResync) ? n : i + kExpResync;
        double v0 = std::exp(-(x0 + static_cast<double>(i) * step) * inv_mu);
        __m256d v = _mm256_set_pd(v0 * r2 * r, v0 * r2, v0 * r, v0);
        std::size_t j = i;
        for (; j + 4 <= end; j += 4) {
            _mm256_storeu_pd(out + j, v);
            v = _mm256_mul_pd(v, vr4);
        }
        double tail[4];
        _mm256_storeu_pd(tail, v);
        for (std::size_t k = 0; j < end; ++j, ++k) out[j] = tail[k];
        i = end;
    }
}

double trapezoid_abs(const double* f, std::size_t n, double h) {
    if (n < 2) return 0.0;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, vabs(_mm256_loadu_pd(f + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += std::fabs(f[i]);
    s -= 0.5 * (std::fabs(f[0]) + std::fabs(f[n - 1]));
    return s * h;
}

double trapezoid_abs_diff(const double* f, const double* g, std::size_t n, double h) {
    if (n < 2) return 0.0;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(f + i), _mm256_loadu_pd(g + i));
        acc = _mm256_add_pd(acc, vabs(d));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += std::fabs(f[i] - g[i]);
    s -= 0.5 * (std::fabs(f[0] - g[0]) + std::fabs(f[n - 1] - g[n - 1]));
    return s * h;
}

double trapezoid_signed_mix(const double* x, const double* s, std::size_t n, double h) {
    if (n < 2) return 0.0;
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = zero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d sv = _mm256_loadu_pd(s + i);
        __m256d is_zero = _mm256_cmp_pd(sv, zero, _CMP_EQ_OQ);
        __m256d term = _mm256_blendv_pd(_mm256_mul_pd(sv, xv), vabs(xv), is_zero);
        acc = _mm256_add_pd(acc, term);
    }
    double total = hsum(acc);
    auto mix = [](double xv, double sv) { return sv == 0.0 ? std::fabs(xv) : sv * xv; };
    for (; i < n; ++i) total += mix(x[i], s[i]);
    total -= 0.5 * (mix(x[0], s[0]) + mix(x[n - 1], s[n - 1]));
    return total * h;
}

void combine(double* out, double ca, const double* a, double cb, const double* b,
             std::size_t n) {
    const __m256d va = _mm256_set1_pd(ca);
    const __m256d vb = _mm256_set1_pd(cb);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(a + i)),
                                  _mm256_mul_pd(vb, _mm256_loadu_pd(b + i)));
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) out[i] = ca * a[i] + cb * b[i];
}

}  // namespace avx2_impl

const Table* avx2_table() {
    static const Table t{avx2_impl::sum,
                         avx2_impl::sum_sq,
                         avx2_impl::exp_decay_fill,
                         avx2_impl::trapezoid_abs,
                         avx2_impl::trapezoid_abs_diff,
                         avx2_impl::trapezoid_signed_mix,
                         avx2_impl::combine,
                         "avx2"};
    return &t;
}

}  // namespace expclass::kernels

#endif  // __x86_64__
