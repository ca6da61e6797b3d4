#include "expclass/kernels.hpp"

#include <cmath>

namespace expclass::kernels {

// Resync period of the geometric recurrence in exp_decay_fill. Must match
// the AVX2 variant so both resync at the same nodes.
constexpr std::size_t kExpResync = 1024;

namespace scalar_impl {

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sum_sq(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

void exp_decay_fill(double* out, std::size_t n, double x0, double step, double inv_mu) {
    const double r = std::exp(-step * inv_mu);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % kExpResync == 0) v = std::exp(-(x0 + static_cast<double>(i) * step) * inv_mu);
        out[i] = v;
        v *= r;
    }
}

double trapezoid_abs(const double* f, std::size_t n, double h) {
    if (n < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(f[i]);
    acc -= 0.5 * (std::fabs(f[0]) + std::fabs(f[n - 1]));
    return acc * h;
}

double trapezoid_abs_diff(const double* f, const double* g, std::size_t n, double h) {
    if (n < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(f[i] - g[i]);
    acc -= 0.5 * (std::fabs(f[0] - g[0]) + std::fabs(f[n - 1] - g[n - 1]));
    return acc * h;
}

inline double mix_term(double x, double s) { return s == 0.0 ? std::fabs(x) : s * x; }

double trapezoid_signed_mix(const double* x, const double* s, std::size_t n, double h) {
    if (n < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += mix_term(x[i], s[i]);
    acc -= 0.5 * (mix_term(x[0], s[0]) + mix_term(x[n - 1], s[n - 1]));
    return acc * h;
}

void combine(double* out, double ca, const double* a, double cb, const double* b,
             std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = ca * a[i] + cb * b[i];
}

}  // namespace scalar_impl

const Table& scalar() {
    static const Table t{scalar_impl::sum,
                         scalar_impl::sum_sq,
                         scalar_impl::exp_decay_fill,
                         scalar_impl::trapezoid_abs,
                         scalar_impl::trapezoid_abs_diff,
                         scalar_impl::trapezoid_signed_mix,
                         scalar_impl::combine,
                         "scalar"};
    return t;
}

void suffix_trapezoid(const double* f, std::size_t n, double h, double* out) {
    if (n == 0) return;
    out[n - 1] = 0.0;
    for (std::size_t i = n - 1; i-- > 0;) {
        out[i] = out[i + 1] + 0.5 * h * (f[i] + f[i + 1]);
    }
}

double positive_prefix_trapezoid(const double* diff, std::size_t n, double h, double start) {
    if (n < 2) return 0.0;
    double run = start;
    double acc = 0.5 * (run > 0.0 ? run : 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        run += 0.5 * h * (diff[i - 1] + diff[i]);
        double pos = run > 0.0 ? run : 0.0;
        acc += (i == n - 1) ? 0.5 * pos : pos;
    }
    return acc * h;
}

}  // namespace expclass::kernels
