#include "expclass/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "expclass/errors.hpp"

namespace expclass::stats {

double mean(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size() - 1);
}

double sd(const std::vector<double>& x) { return std::sqrt(variance(x)); }

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw EmptyDataError("quantile of an empty vector");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantile probability outside [0,1]");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::vector<double> x, double p) {
    std::sort(x.begin(), x.end());
    return quantile_sorted(x, p);
}

double ks_statistic(const std::vector<double>& sorted,
                    const std::function<double(double)>& cdf) {
    const std::size_t n = sorted.size();
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = cdf(sorted[i]);
        sup = std::max({sup, std::fabs(static_cast<double>(i + 1) / n - g),
                        std::fabs(static_cast<double>(i) / n - g)});
    }
    return sup;
}

double ks_two_sample_statistic(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        sup = std::max(sup, std::fabs(static_cast<double>(i) / a.size() -
                                      static_cast<double>(j) / b.size()));
    }
    return sup;
}

double kolmogorov_sf(double x) {
    if (x <= 0.0) return 1.0;
    double total = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        total += (j % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * total, 0.0, 1.0);
}

double ks_two_sample_pvalue(const std::vector<double>& a, const std::vector<double>& b) {
    const double d = ks_two_sample_statistic(a, b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    return kolmogorov_sf(d * std::sqrt(na * nb / (na + nb)));
}

double normal_cdf(double x) { return boost::math::cdf(boost::math::normal_distribution<>(), x); }

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<>(), p);
}

}  // namespace expclass::stats
