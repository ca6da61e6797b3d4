#include "expclass/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "expclass/errors.hpp"
#include "expclass/rng.hpp"

namespace expclass {

std::string to_string(DistKind kind) {
    switch (kind) {
        case DistKind::Exponential: return "exponential";
        case DistKind::Weibull: return "weibull";
        case DistKind::Gamma: return "gamma";
    }
    return "?";
}

PitSample PitSample::from_values(std::vector<double> values) {
    if (values.empty()) throw EmptyDataError("empty sample");
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError("sample values must be finite and > 0");
        }
    }
    std::sort(values.begin(), values.end());
    PitSample s;
    s.mean_hat_ = std::accumulate(values.begin(), values.end(), 0.0) /
                  static_cast<double>(values.size());
    s.values_ = std::move(values);
    return s;
}

double PitSample::second_moment() const {
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return acc / static_cast<double>(values_.size());
}

RefDistribution::RefDistribution(DistKind kind, double shape, double scale)
    : kind_(kind), shape_(shape), scale_(scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw ConfigError("distribution parameters must be > 0");
    }
    switch (kind_) {
        case DistKind::Exponential: mean_ = scale_; break;
        case DistKind::Weibull: mean_ = scale_ * std::tgamma(1.0 + 1.0 / shape_); break;
        case DistKind::Gamma: mean_ = shape_ * scale_; break;
    }
}

RefDistribution RefDistribution::exponential(double mu) {
    if (!(mu > 0.0)) throw ConfigError("exponential mean must be > 0");
    return RefDistribution(DistKind::Exponential, 1.0, mu);
}

RefDistribution RefDistribution::mean_one(DistKind kind, double shape) {
    if (!(shape > 0.0)) throw ConfigError("shape must be > 0");
    switch (kind) {
        case DistKind::Exponential: return exponential(1.0);
        case DistKind::Weibull:
            return RefDistribution(kind, shape, 1.0 / std::tgamma(1.0 + 1.0 / shape));
        case DistKind::Gamma: return RefDistribution(kind, shape, 1.0 / shape);
    }
    throw ConfigError("unknown distribution kind");
}

RefDistribution RefDistribution::make(DistKind kind, double shape, double scale) {
    return RefDistribution(kind, shape, scale);
}

std::string RefDistribution::describe() const {
    if (kind_ == DistKind::Exponential) return "exponential(mu=" + std::to_string(scale_) + ")";
    return to_string(kind_) + "(shape=" + std::to_string(shape_) +
           ",scale=" + std::to_string(scale_) + ")";
}

double RefDistribution::cdf(double t) const {
    if (t <= 0.0) return 0.0;
    switch (kind_) {
        case DistKind::Exponential: return -std::expm1(-t / scale_);
        case DistKind::Weibull: return -std::expm1(-std::pow(t / scale_, shape_));
        case DistKind::Gamma: return boost::math::gamma_p(shape_, t / scale_);
    }
    return 0.0;
}

double RefDistribution::density(double t) const {
    if (t <= 0.0) return 0.0;
    switch (kind_) {
        case DistKind::Exponential: return std::exp(-t / scale_) / scale_;
        case DistKind::Weibull: {
            double z = t / scale_;
            return shape_ / scale_ * std::pow(z, shape_ - 1.0) * std::exp(-std::pow(z, shape_));
        }
        case DistKind::Gamma:
            return std::exp((shape_ - 1.0) * std::log(t / scale_) - t / scale_ -
                            std::lgamma(shape_)) /
                   scale_;
    }
    return 0.0;
}

double RefDistribution::quantile(double p) const {
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError("quantile probability must lie in [0,1)");
    if (p == 0.0) return 0.0;
    switch (kind_) {
        case DistKind::Exponential: return -scale_ * std::log1p(-p);
        case DistKind::Weibull: return scale_ * std::pow(-std::log1p(-p), 1.0 / shape_);
        case DistKind::Gamma: break;
    }
    // Bracketed bisection with a Newton polish; cdf is strictly increasing.
    double lo = 0.0;
    double hi = mean_;
    while (cdf(hi) < p) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-10 * (1.0 + hi); ++i) {
        double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        double d = density(x);
        if (d <= 0.0) break;
        double step = (cdf(x) - p) / d;
        double next = x - step;
        if (next <= lo || next >= hi) break;
        x = next;
    }
    return x;
}

namespace {

// Marsaglia-Tsang (2000). For shape < 1 draws at shape+1 and rescales by
// U^{1/shape}.
double gamma_draw(double shape, double scale, std::mt19937_64& gen,
                  std::normal_distribution<double>& nd) {
    double shape_boost = 1.0;
    double a = shape;
    if (a < 1.0) {
        shape_boost = std::pow(rng::uniform01(gen), 1.0 / a);
        a += 1.0;
    }
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = nd(gen);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng::uniform01(gen);
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return scale * shape_boost * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return scale * shape_boost * d * v;
    }
}

}  // namespace

std::vector<double> RefDistribution::sample_values(std::size_t n, std::uint64_t seed) const {
    if (n == 0) throw EmptyDataError("requested an empty sample");
    std::vector<double> out(n);
    std::mt19937_64 gen = rng::stream(seed);
    if (kind_ == DistKind::Gamma) {
        std::normal_distribution<double> nd;
        for (double& v : out) v = gamma_draw(shape_, scale_, gen, nd);
    } else {
        for (double& v : out) v = quantile(rng::uniform01(gen));
    }
    return out;
}

PitSample RefDistribution::sample(std::size_t n, std::uint64_t seed) const {
    return PitSample::from_values(sample_values(n, seed));
}

}  // namespace expclass
