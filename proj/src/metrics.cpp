#include "expclass/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "expclass/errors.hpp"
#include "expclass/kernels.hpp"

namespace expclass {

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Kolmogorov: return "kappa";
        case Metric::Wasserstein: return "w";
        case Metric::Zolotarev2: return "z2";
        case Metric::NormWasserstein: return "nw";
        case Metric::NormZolotarev2: return "nz2";
    }
    return "?";
}

Metric metric_from_string(const std::string& name) {
    if (name == "kappa" || name == "kolmogorov") return Metric::Kolmogorov;
    if (name == "w" || name == "wasserstein") return Metric::Wasserstein;
    if (name == "z2" || name == "zolotarev2") return Metric::Zolotarev2;
    if (name == "nw") return Metric::NormWasserstein;
    if (name == "nz2") return Metric::NormZolotarev2;
    throw ConfigError("unknown metric: " + name);
}

bool is_normalized(Metric m) {
    return m == Metric::NormWasserstein || m == Metric::NormZolotarev2;
}

namespace {

// Fills fn[k] = F_n(x0 + k*step) by sweeping the sorted sample once. The
// last node is forced to X_(n) so F_n there is exactly 1.
void empirical_cdf_on_grid(const std::vector<double>& sorted, double x0, double step,
                           std::size_t nodes, std::vector<double>& fn) {
    fn.resize(nodes);
    const double inv_n = 1.0 / static_cast<double>(sorted.size());
    std::size_t j = 0;
    for (std::size_t k = 0; k < nodes; ++k) {
        const double x = x0 + static_cast<double>(k) * step;
        while (j < sorted.size() && sorted[j] <= x) ++j;
        fn[k] = static_cast<double>(j) * inv_n;
    }
    fn[nodes - 1] = 1.0;
}

}  // namespace

DistanceEstimate kolmogorov(const PitSample& sample) {
    const auto& x = sample.values();
    const std::size_t n = sample.n();
    const double inv_mu = 1.0 / sample.mean_hat();
    const double inv_n = 1.0 / static_cast<double>(n);
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = -std::expm1(-x[i] * inv_mu);
        const double above = std::fabs(static_cast<double>(i + 1) * inv_n - g);
        const double below = std::fabs(static_cast<double>(i) * inv_n - g);
        sup = std::max({sup, above, below});
    }
    return {Metric::Kolmogorov, sup, n, 0};
}

DistanceEstimate wasserstein(const PitSample& sample, std::size_t grid_points) {
    if (grid_points < 1) throw ConfigError("grid_points must be >= 1");
    const auto& k = kernels::active();
    const double mu = sample.mean_hat();
    const double inv_mu = 1.0 / mu;
    const double x1 = sample.min();
    const double xn = sample.max();

    const double head = x1 - mu * (-std::expm1(-x1 * inv_mu));
    const double tail = mu * std::exp(-xn * inv_mu);

    double middle = 0.0;
    if (sample.n() > 1 && xn > x1) {
        const std::size_t nodes = grid_points + 1;
        const double step = (xn - x1) / static_cast<double>(grid_points);
        static thread_local std::vector<double> fn, gexp;
        empirical_cdf_on_grid(sample.values(), x1, step, nodes, fn);
        gexp.resize(nodes);
        k.exp_decay_fill(gexp.data(), nodes, x1, step, inv_mu);
        // gexp holds exp(-x/mu); G = 1 - gexp, so |F_n - G| = |fn - 1 + gexp|.
        for (std::size_t i = 0; i < nodes; ++i) gexp[i] = fn[i] - 1.0 + gexp[i];
        middle = k.trapezoid_abs(gexp.data(), nodes, step);
    }
    return {Metric::Wasserstein, head + middle + tail, sample.n(), grid_points};
}

DistanceEstimate zolotarev2(const PitSample& sample, std::size_t grid_points) {
    if (grid_points < 1) throw ConfigError("grid_points must be >= 1");
    const auto& k = kernels::active();
    const double mu = sample.mean_hat();
    const double inv_mu = 1.0 / mu;
    const double x1 = sample.min();
    const double xn = sample.max();
    const double a2 = sample.second_moment();

    // Running integral of F_n - G starts at -X_(1) + mu*G(X_(1)).
    const double start = -x1 + mu * (-std::expm1(-x1 * inv_mu));

    double outer = 0.0;
    if (sample.n() > 1 && xn > x1) {
        const std::size_t nodes = grid_points + 1;
        const double step = (xn - x1) / static_cast<double>(grid_points);
        const auto& sorted = sample.values();
        const double inv_n = 1.0 / static_cast<double>(sample.n());

        // The inner integral of F_n - G is evaluated exactly at the grid
        // nodes (F_n is a step function, G has a closed-form antiderivative);
        // only the outer integral of the positive part is a trapezoid sum.
        // Accumulating the inner integral by quadrature instead would leak
        // O(step) error from each jump of F_n into every later node.
        static thread_local std::vector<double> gexp, pos_part;
        gexp.resize(nodes);
        k.exp_decay_fill(gexp.data(), nodes, x1, step, inv_mu);
        pos_part.resize(nodes);
        const double e1 = gexp[0];  // exp(-x1/mu)
        double acc = 0.0;           // exact integral of F_n over [x1, pos]
        double pos = x1;
        std::size_t j = 0;
        for (std::size_t i = 0; i < nodes; ++i) {
            const double t = x1 + static_cast<double>(i) * step;
            while (j < sorted.size() && sorted[j] <= t) {
                acc += (sorted[j] - pos) * static_cast<double>(j) * inv_n;
                pos = sorted[j];
                ++j;
            }
            const double int_fn = acc + (t - pos) * static_cast<double>(j) * inv_n;
            const double int_g = (t - x1) + mu * (gexp[i] - e1);
            pos_part[i] = std::max(start + int_fn - int_g, 0.0);
        }
        outer = 0.5 * step * (pos_part.front() + pos_part.back());
        for (std::size_t i = 1; i + 1 < nodes; ++i) outer += step * pos_part[i];
    }
    // else: n == 1 or all values tied; the middle integral is 0 by
    // convention (degenerate grid) and `start` is always <= 0.

    double value = 2.0 * outer + mu * mu - 0.5 * a2;
    if (value < -1e-6) {
        throw QuadratureError("zeta_2 quadrature produced " + std::to_string(value) +
                              "; grid too coarse");
    }
    if (value < 0.0) value = 0.0;
    return {Metric::Zolotarev2, value, sample.n(), grid_points};
}

DistanceEstimate normalized(const PitSample& sample, Metric metric, std::size_t grid_points) {
    const double mu = sample.mean_hat();
    if (metric == Metric::NormWasserstein) {
        DistanceEstimate base = wasserstein(sample, grid_points);
        return {metric, base.value / mu, base.n, base.grid_points};
    }
    if (metric == Metric::NormZolotarev2) {
        DistanceEstimate base = zolotarev2(sample, grid_points);
        return {metric, base.value / (mu * mu), base.n, base.grid_points};
    }
    throw ConfigError("normalized() expects nw or nz2");
}

DistanceEstimate compute_distance(const PitSample& sample, Metric metric,
                                  std::size_t grid_points) {
    switch (metric) {
        case Metric::Kolmogorov: return kolmogorov(sample);
        case Metric::Wasserstein: return wasserstein(sample, grid_points);
        case Metric::Zolotarev2: return zolotarev2(sample, grid_points);
        case Metric::NormWasserstein:
        case Metric::NormZolotarev2: return normalized(sample, metric, grid_points);
    }
    throw ConfigError("unknown metric");
}

double wasserstein_exact_oracle(const PitSample& sample) {
    const auto& x = sample.values();
    const std::size_t n = sample.n();
    const double mu = sample.mean_hat();
    const double inv_mu = 1.0 / mu;

    // Antiderivative of (G - q) with G(t) = 1 - exp(-t/mu).
    auto anti = [&](double q, double t) { return (1.0 - q) * t + mu * std::exp(-t * inv_mu); };
    // Integral of |q - G| over [lo, hi], splitting at G's crossing of q.
    auto piece = [&](double q, double lo, double hi) {
        if (hi <= lo) return 0.0;
        const double cross = -mu * std::log1p(-q);
        double total = 0.0;
        if (cross > lo) {
            const double r = std::min(cross, hi);
            total += -(anti(q, r) - anti(q, lo));  // G < q here
        }
        if (cross < hi) {
            const double l = std::max(cross, lo);
            total += anti(q, hi) - anti(q, l);
        }
        return total;
    };

    double total = piece(0.0, 0.0, x[0]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        total += piece(static_cast<double>(i + 1) / static_cast<double>(n), x[i], x[i + 1]);
    }
    total += mu * std::exp(-x[n - 1] * inv_mu);
    return total;
}

double zolotarev2_fine_oracle(const PitSample& sample) {
    return zolotarev2(sample, 2000000).value;
}

}  // namespace expclass
