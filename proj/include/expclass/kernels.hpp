#pragma once

#include <cstddef>

// Arithmetic inner loops shared by the metric quadratures and the limit-law
// functionals. Scalar reference kernels live in kernels::scalar; an AVX2
// variant of each data-parallel kernel is selected at runtime when the CPU
// supports it (override with EXPCLASS_KERNELS=scalar|avx2). The two
// implementations are equivalence-tested against each other.

namespace expclass::kernels {

struct Table {
    double (*sum)(const double* x, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    // out[k] = exp(-(x0 + k*step) * inv_mu). Both variants use the geometric
    // recurrence with a periodic exact resync, so drift stays below ~1e-13.
    void (*exp_decay_fill)(double* out, std::size_t n, double x0, double step, double inv_mu);
    // Trapezoid rule with node spacing h on |f|, |f-g|, and the mixed
    // sign integrand s[k]==0 ? |x[k]| : s[k]*x[k].
    double (*trapezoid_abs)(const double* f, std::size_t n, double h);
    double (*trapezoid_abs_diff)(const double* f, const double* g, std::size_t n, double h);
    double (*trapezoid_signed_mix)(const double* x, const double* s, std::size_t n, double h);
    // out[k] = ca * a[k] + cb * b[k]
    void (*combine)(double* out, double ca, const double* a, double cb, const double* b,
                    std::size_t n);
    const char* name;
};

const Table& scalar();
const Table* avx2();    // nullptr when unsupported at build or run time
const Table& active();  // chosen once at startup

// Serial recurrences (no SIMD variant).

// out[k] = trapezoid integral of f over [t_k, t_{n-1}] with spacing h.
void suffix_trapezoid(const double* f, std::size_t n, double h, double* out);

// Running trapezoid prefix integral of `diff` started at `start`, with the
// positive part taken before the outer trapezoid accumulation. Returns
// integral over the grid of max(start + int_{t_0}^{t}diff, 0) dt.
double positive_prefix_trapezoid(const double* diff, std::size_t n, double h, double start);

}  // namespace expclass::kernels
