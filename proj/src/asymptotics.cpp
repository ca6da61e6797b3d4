#include "expclass/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "expclass/errors.hpp"
#include "expclass/kernels.hpp"
#include "expclass/rng.hpp"
#include "expclass/stats.hpp"

namespace expclass {

namespace {
constexpr double kZeroTol = 1e-10;  // |g_d| below this counts as the zero set
}

CiMethod ci_method_from_string(const std::string& name) {
    if (name == "asymptotic-normal") return CiMethod::AsymptoticNormal;
    if (name == "asymptotic-quantile") return CiMethod::AsymptoticQuantile;
    if (name == "bootstrap-percentile") return CiMethod::BootstrapPercentile;
    throw ConfigError("unknown confidence interval method: " + name);
}

GofMethod gof_method_from_string(const std::string& name) {
    if (name == "asymptotic") return GofMethod::Asymptotic;
    if (name == "parametric-bootstrap" || name == "bootstrap") {
        return GofMethod::ParametricBootstrap;
    }
    throw ConfigError("unknown gof method: " + name);
}

LimitLawSampler::LimitLawSampler(Metric metric, const CdfModel& ref, const BridgeConfig& cfg)
    : metric_(metric), reference_(ref.describe()), mu_(ref.mean()) {
    if (metric == Metric::Kolmogorov) {
        throw ConfigError("no L1 limit functional for the Kolmogorov metric");
    }
    if (cfg.grid_subintervals < 1000) {
        throw ConfigError("grid_subintervals must be >= 1000");
    }
    const std::size_t m = cfg.grid_subintervals;
    horizon_ = cfg.horizon_T > 0.0 ? cfg.horizon_T : std::ceil(ref.upper_quantile(cfg.tol));
    step_ = horizon_ / static_cast<double>(m);

    const std::size_t nodes = m + 1;
    t_.resize(nodes);
    u_.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        t_[k] = static_cast<double>(k) * step_;
        u_[k] = ref.cdf(t_[k]);
    }

    const auto& kr = kernels::active();
    std::vector<double> expw(nodes);  // exp(-t/mu)
    kr.exp_decay_fill(expw.data(), nodes, 0.0, step_, 1.0 / mu_);

    // g_omega(t) = F - G_mu; g_zeta2(t) = suffix integral of F - G_mu.
    std::vector<double> diff(nodes);
    for (std::size_t k = 0; k < nodes; ++k) diff[k] = u_[k] - (1.0 - expw[k]);
    std::vector<double> g(nodes);
    const bool zeta = metric == Metric::Zolotarev2 || metric == Metric::NormZolotarev2;
    if (zeta) {
        kernels::suffix_trapezoid(diff.data(), nodes, step_, g.data());
    } else {
        g = diff;
    }

    sign_.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        sign_[k] = std::fabs(g[k]) <= kZeroTol ? 0.0 : (g[k] > 0.0 ? 1.0 : -1.0);
    }

    weight_.resize(nodes);
    integrate_path_ = zeta;
    switch (metric) {
        case Metric::Wasserstein:
            path_scale_ = 1.0;
            for (std::size_t k = 0; k < nodes; ++k) {
                weight_[k] = -t_[k] / (mu_ * mu_) * expw[k];
            }
            break;
        case Metric::NormWasserstein:
            path_scale_ = 1.0 / mu_;
            for (std::size_t k = 0; k < nodes; ++k) {
                weight_[k] = (g[k] / mu_ - t_[k] / (mu_ * mu_) * expw[k]) / mu_;
            }
            break;
        case Metric::Zolotarev2:
            path_scale_ = 1.0;
            for (std::size_t k = 0; k < nodes; ++k) {
                weight_[k] = -(1.0 + t_[k] / mu_) * expw[k];
            }
            break;
        case Metric::NormZolotarev2:
            path_scale_ = 1.0 / (mu_ * mu_);
            for (std::size_t k = 0; k < nodes; ++k) {
                weight_[k] = (2.0 * g[k] / mu_ - (1.0 + t_[k] / mu_) * expw[k]) /
                             (mu_ * mu_);
            }
            break;
        default: break;
    }
    // Normalized metrics divide g_d by mu or mu^2; signs are unchanged, so
    // sign_ built from the unnormalized g is valid for all four.
}

void LimitLawSampler::bridge_path(std::mt19937_64& gen, std::vector<double>& out) const {
    const std::size_t nodes = u_.size();
    out.resize(nodes);
    std::normal_distribution<double> nd;
    double w = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
        if (k > 0) {
            const double du = u_[k] - u_[k - 1];
            if (du > 0.0) w += std::sqrt(du) * nd(gen);
        }
        out[k] = w;  // Brownian motion at u_k, bridged below
    }
    const double w1 = w + std::sqrt(std::max(0.0, 1.0 - u_.back())) * nd(gen);
    for (std::size_t k = 0; k < nodes; ++k) out[k] -= u_[k] * w1;
}

void LimitLawSampler::limit_process(const std::vector<double>& bridge,
                                    std::vector<double>& out) const {
    const std::size_t nodes = u_.size();
    if (bridge.size() != nodes) throw ConfigError("bridge path does not match the grid");
    const auto& kr = kernels::active();
    const double i0 =
        step_ * (kr.sum(bridge.data(), nodes) - 0.5 * (bridge.front() + bridge.back()));
    out.resize(nodes);
    const double* path = bridge.data();
    if (integrate_path_) {
        work_s_.resize(nodes);
        kernels::suffix_trapezoid(bridge.data(), nodes, step_, work_s_.data());
        path = work_s_.data();
    }
    kr.combine(out.data(), path_scale_, path, i0, weight_.data(), nodes);
}

double LimitLawSampler::draw(std::mt19937_64& gen) const {
    bridge_path(gen, work_b_);
    limit_process(work_b_, work_x_);
    return kernels::active().trapezoid_signed_mix(work_x_.data(), sign_.data(), work_x_.size(),
                                                  step_);
}

LimitLawDraws LimitLawSampler::sample(std::size_t reps, std::uint64_t seed) const {
    LimitLawDraws out{metric_, reference_, {}};
    out.draws.resize(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        auto gen = rng::stream(seed, r);
        out.draws[r] = draw(gen);
    }
    return out;
}

LimitLawDraws sample_delta_infinity(Metric metric, const RefDistribution& ref,
                                    const BridgeConfig& cfg) {
    AnalyticCdf model(ref);
    LimitLawSampler sampler(metric, model, cfg);
    return sampler.sample(cfg.reps, cfg.seed);
}

LimitLawDraws null_law(Metric metric, const BridgeConfig& cfg) {
    if (!is_normalized(metric) && metric != Metric::Wasserstein &&
        metric != Metric::Zolotarev2) {
        throw ConfigError("null law undefined for this metric");
    }
    return sample_delta_infinity(metric, RefDistribution::exponential(1.0), cfg);
}

namespace {

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0,1)");
}

}  // namespace

ConfidenceInterval confidence_interval(const PitSample& sample, Metric metric, double level,
                                       CiMethod method, const BridgeConfig& cfg,
                                       std::size_t grid_points) {
    check_level(level);
    if (cfg.reps < 200) throw ConfigError("confidence intervals need reps >= 200");
    const std::size_t n = sample.n();
    if (n < 30 && method != CiMethod::BootstrapPercentile) {
        std::cerr << "warning: asymptotic interval with n = " << n << " (< 30)\n";
    }
    const double estimate = compute_distance(sample, metric, grid_points).value;
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    if (method == CiMethod::BootstrapPercentile) {
        const auto& values = sample.values();
        std::vector<double> boot(cfg.reps);
        for (std::size_t b = 0; b < cfg.reps; ++b) {
            auto gen = rng::stream(cfg.seed, b, 0x626f6f74ULL);
            std::vector<double> res(n);
            for (double& v : res) {
                v = values[static_cast<std::size_t>(gen() % n)];
            }
            boot[b] = compute_distance(PitSample::from_values(std::move(res)), metric,
                                       grid_points)
                          .value;
        }
        std::sort(boot.begin(), boot.end());
        return {stats::quantile_sorted(boot, (1.0 - level) / 2.0),
                stats::quantile_sorted(boot, (1.0 + level) / 2.0), estimate, level, method};
    }

    // Plug-in: the empirical cdf drives both the bridge time-change and g_d.
    EmpiricalCdf model(sample);
    LimitLawSampler sampler(metric, model, cfg);
    LimitLawDraws draws = sampler.sample(cfg.reps, cfg.seed);

    if (method == CiMethod::AsymptoticNormal) {
        const double half =
            stats::normal_quantile((1.0 + level) / 2.0) * stats::sd(draws.draws) / sqrt_n;
        return {estimate - half, estimate + half, estimate, level, method};
    }
    std::sort(draws.draws.begin(), draws.draws.end());
    const double hi_q = stats::quantile_sorted(draws.draws, (1.0 + level) / 2.0);
    const double lo_q = stats::quantile_sorted(draws.draws, (1.0 - level) / 2.0);
    return {estimate - hi_q / sqrt_n, estimate - lo_q / sqrt_n, estimate, level, method};
}

GofResult gof_with_null(const PitSample& sample, Metric metric, double level,
                        const LimitLawDraws& null_draws, std::size_t grid_points) {
    check_level(level);
    if (!is_normalized(metric)) {
        throw ConfigError("gof test needs a normalized metric (nw or nz2); "
                          "the unnormalized null laws depend on the unknown mean");
    }
    const double stat = std::sqrt(static_cast<double>(sample.n())) *
                        compute_distance(sample, metric, grid_points).value;
    std::size_t count = 0;
    for (double d : null_draws.draws) {
        if (d >= stat) ++count;
    }
    const double p = static_cast<double>(count) / static_cast<double>(null_draws.reps());
    return {stat, p, p <= level, metric, GofMethod::Asymptotic, null_draws.reps(), 0};
}

GofResult gof_exponentiality(const PitSample& sample, Metric metric, double level,
                             GofMethod method, const BridgeConfig& cfg,
                             std::size_t grid_points) {
    check_level(level);
    if (!is_normalized(metric)) {
        throw ConfigError("gof test needs a normalized metric (nw or nz2)");
    }
    const std::size_t n = sample.n();
    if (n < 20) std::cerr << "warning: gof test with n = " << n << " (< 20)\n";

    if (method == GofMethod::Asymptotic) {
        GofResult r = gof_with_null(sample, metric, level, null_law(metric, cfg), grid_points);
        r.seed = cfg.seed;
        return r;
    }

    const double stat = std::sqrt(static_cast<double>(n)) *
                        compute_distance(sample, metric, grid_points).value;
    const RefDistribution null_dist = RefDistribution::exponential(sample.mean_hat());
    std::size_t count = 0;
    for (std::size_t b = 0; b < cfg.reps; ++b) {
        std::uint64_t s = cfg.seed;
        rng::splitmix64(s);
        const PitSample res = null_dist.sample(n, s ^ (0x70626f6fULL + b));
        const double sb = std::sqrt(static_cast<double>(n)) *
                          compute_distance(res, metric, grid_points).value;
        if (sb >= stat) ++count;
    }
    const double p = static_cast<double>(count) / static_cast<double>(cfg.reps);
    return {stat, p, p <= level, metric, method, cfg.reps, cfg.seed};
}

}  // namespace expclass
