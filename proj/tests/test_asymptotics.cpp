#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "expclass/asymptotics.hpp"
#include "expclass/distributions.hpp"
#include "expclass/errors.hpp"
#include "expclass/rng.hpp"
#include "expclass/stats.hpp"

using namespace expclass;
using namespace expclass::stats;

namespace {

BridgeConfig small_cfg(std::size_t grid, std::uint64_t seed) {
    BridgeConfig cfg;
    cfg.grid_subintervals = grid;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("bridge paths have Brownian-bridge moments in F-time") {
    AnalyticCdf ref(RefDistribution::exponential(1.0));
    LimitLawSampler sampler(Metric::NormWasserstein, ref, small_cfg(2000, 7));
    const std::size_t m = sampler.nodes();
    // Two interior probe nodes; u = F(t) at those grid times.
    const std::size_t i = m / 4, j = m / 2;
    const double T = sampler.horizon();
    const double ui = 1.0 - std::exp(-(static_cast<double>(i) * T / static_cast<double>(m - 1)));
    const double uj = 1.0 - std::exp(-(static_cast<double>(j) * T / static_cast<double>(m - 1)));

    const std::size_t reps = 6000;
    std::vector<double> path, bi(reps), bj(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        auto gen = rng::stream(99, r);
        sampler.bridge_path(gen, path);
        REQUIRE(path.size() == m);
        CHECK(path.front() == 0.0);
        bi[r] = path[i];
        bj[r] = path[j];
    }
    const double mi = mean(bi), mj = mean(bj);
    const double vi = variance(bi), vj = variance(bj);
    // E B(u) = 0, Var B(u) = u(1-u), Cov = min(u,v) - uv.
    CHECK(std::fabs(mi) < 4.0 * std::sqrt(vi / reps));
    CHECK(std::fabs(mj) < 4.0 * std::sqrt(vj / reps));
    CHECK(vi == doctest::Approx(ui * (1.0 - ui)).epsilon(0.08));
    CHECK(vj == doctest::Approx(uj * (1.0 - uj)).epsilon(0.08));
    double cov = 0.0;
    for (std::size_t r = 0; r < reps; ++r) cov += (bi[r] - mi) * (bj[r] - mj);
    cov /= static_cast<double>(reps - 1);
    CHECK(cov == doctest::Approx(std::min(ui, uj) - ui * uj).epsilon(0.10));
}

TEST_CASE("limit functional is linear and maps the zero path to zero") {
    AnalyticCdf ref(RefDistribution::mean_one(DistKind::Gamma, 0.9));
    for (Metric metric : {Metric::Wasserstein, Metric::Zolotarev2, Metric::NormWasserstein,
                          Metric::NormZolotarev2}) {
        LimitLawSampler sampler(metric, ref, small_cfg(3000, 1));
        std::vector<double> zero(sampler.nodes(), 0.0), out;
        sampler.limit_process(zero, out);
        for (double v : out) CHECK(v == 0.0);

        auto gen = rng::stream(5, 0);
        std::vector<double> path, x1, x2, scaled(sampler.nodes());
        sampler.bridge_path(gen, path);
        sampler.limit_process(path, x1);
        for (std::size_t k = 0; k < path.size(); ++k) scaled[k] = -2.5 * path[k];
        sampler.limit_process(scaled, x2);
        for (std::size_t k = 0; k < x1.size(); ++k)
            CHECK(std::fabs(x2[k] - (-2.5 * x1[k])) < 1e-12);
    }
}

TEST_CASE("per-draw scale relations under common random numbers") {
    // ||X_{w,G_mu}|| = mu * ||X_{w,G_1}||, ||X_{z2,G_mu}|| = mu^2 * ||X_{z2,G_1}||,
    // and the normalized metrics are mu-free, all draw for draw at a shared seed.
    const double mu = 3.0;
    BridgeConfig cfg = small_cfg(5000, 0);
    cfg.reps = 200;
    auto draws = [&](Metric metric, double m) {
        return sample_delta_infinity(metric, RefDistribution::exponential(m), cfg).draws;
    };
    auto a_w = draws(Metric::Wasserstein, 1.0), b_w = draws(Metric::Wasserstein, mu);
    auto a_z = draws(Metric::Zolotarev2, 1.0), b_z = draws(Metric::Zolotarev2, mu);
    auto a_nw = draws(Metric::NormWasserstein, 1.0), b_nw = draws(Metric::NormWasserstein, mu);
    auto a_nz = draws(Metric::NormZolotarev2, 1.0), b_nz = draws(Metric::NormZolotarev2, mu);
    for (std::size_t r = 0; r < 200; ++r) {
        CHECK(b_w[r] == doctest::Approx(mu * a_w[r]).epsilon(1e-9));
        CHECK(b_z[r] == doctest::Approx(mu * mu * a_z[r]).epsilon(1e-9));
        CHECK(b_nw[r] == doctest::Approx(a_nw[r]).epsilon(1e-9));
        CHECK(b_nz[r] == doctest::Approx(a_nz[r]).epsilon(1e-9));
    }
}

TEST_CASE("null law is positive, reproducible, and stable under grid refinement") {
    BridgeConfig cfg = small_cfg(10000, 42);
    cfg.reps = 1500;
    auto a = null_law(Metric::NormZolotarev2, cfg);
    auto b = null_law(Metric::NormZolotarev2, cfg);
    REQUIRE(a.reps() == 1500);
    CHECK(a.draws == b.draws);
    for (double v : a.draws) CHECK(v > 0.0);

    BridgeConfig fine = cfg;
    fine.grid_subintervals = 20000;
    auto c = null_law(Metric::NormZolotarev2, fine);
    std::vector<double> sa = a.draws, sc = c.draws;
    std::sort(sa.begin(), sa.end());
    std::sort(sc.begin(), sc.end());
    CHECK(quantile_sorted(sa, 0.5) == doctest::Approx(quantile_sorted(sc, 0.5)).epsilon(0.05));
}

TEST_CASE("kolmogorov metric and coarse grids are rejected") {
    AnalyticCdf ref(RefDistribution::exponential(1.0));
    CHECK_THROWS_AS(LimitLawSampler(Metric::Kolmogorov, ref, small_cfg(2000, 0)), ConfigError);
    CHECK_THROWS_AS(LimitLawSampler(Metric::NormWasserstein, ref, small_cfg(500, 0)), ConfigError);
}

TEST_CASE("zero-mean draws for nz2 under gamma(0.9)") {
    BridgeConfig cfg = small_cfg(5000, 11);
    cfg.reps = 2000;
    auto d = sample_delta_infinity(Metric::NormZolotarev2,
                                   RefDistribution::mean_one(DistKind::Gamma, 0.9), cfg);
    const double m = mean(d.draws);
    const double s = sd(d.draws);
    CHECK(std::fabs(m) < 4.0 * s / std::sqrt(2000.0));
    bool has_neg = false, has_pos = false;
    for (double v : d.draws) {
        has_neg = has_neg || v < 0.0;
        has_pos = has_pos || v > 0.0;
    }
    CHECK(has_neg);
    CHECK(has_pos);
}

TEST_CASE("confidence intervals are ordered and shrink like 1/sqrt(n)") {
    BridgeConfig cfg = small_cfg(5000, 3);
    cfg.reps = 1200;
    auto gamma = RefDistribution::mean_one(DistKind::Gamma, 0.9);
    auto big = PitSample::from_values(gamma.sample_values(6400, 17));
    std::vector<double> head(big.values().begin(), big.values().begin() + 400);
    auto small_sample = PitSample::from_values(head);

    for (CiMethod method :
         {CiMethod::AsymptoticNormal, CiMethod::AsymptoticQuantile, CiMethod::BootstrapPercentile}) {
        auto ci = confidence_interval(big, Metric::NormZolotarev2, 0.90, method, cfg, 4000);
        CHECK(ci.lo < ci.hi);
        CHECK(ci.level == 0.90);
        CHECK(ci.estimate > 0.0);
        auto wide = confidence_interval(small_sample, Metric::NormZolotarev2, 0.90, method, cfg, 4000);
        CHECK(wide.hi - wide.lo > ci.hi - ci.lo);
    }

    BridgeConfig tiny = cfg;
    tiny.reps = 50;
    CHECK_THROWS_AS(confidence_interval(big, Metric::NormZolotarev2, 0.90,
                                        CiMethod::AsymptoticNormal, tiny, 4000),
                    ConfigError);
}

TEST_CASE("gof: p-values are proper, the rejection rule matches, and power shows up") {
    BridgeConfig cfg = small_cfg(5000, 23);
    cfg.reps = 1500;
    auto null_draws = null_law(Metric::NormWasserstein, cfg);

    auto exp_sample =
        PitSample::from_values(RefDistribution::exponential(2.0).sample_values(300, 8));
    auto g_null = gof_with_null(exp_sample, Metric::NormWasserstein, 0.05, null_draws, 4000);
    CHECK(g_null.p_value >= 0.0);
    CHECK(g_null.p_value <= 1.0);
    CHECK(g_null.reject == (g_null.p_value <= 0.05));
    CHECK(g_null.statistic == doctest::Approx(std::sqrt(300.0) *
                                              compute_distance(exp_sample, Metric::NormWasserstein,
                                                               4000)
                                                  .value));

    auto g_asym = gof_exponentiality(exp_sample, Metric::NormWasserstein, 0.05,
                                     GofMethod::Asymptotic, cfg, 4000);
    CHECK(g_asym.statistic == doctest::Approx(g_null.statistic));
    CHECK(g_asym.p_value == doctest::Approx(g_null.p_value).epsilon(1e-12));

    auto far = PitSample::from_values(
        RefDistribution::mean_one(DistKind::Gamma, 0.5).sample_values(2000, 9));
    auto g_far =
        gof_exponentiality(far, Metric::NormWasserstein, 0.05, GofMethod::Asymptotic, cfg, 4000);
    CHECK(g_far.reject);
    CHECK(g_far.p_value < 0.01);

    BridgeConfig boot = cfg;
    boot.reps = 249;
    auto g_boot = gof_exponentiality(exp_sample, Metric::NormWasserstein, 0.05,
                                     GofMethod::ParametricBootstrap, boot, 4000);
    CHECK(g_boot.p_value >= 0.0);
    CHECK(g_boot.p_value <= 1.0);
    CHECK(g_boot.reject == (g_boot.p_value <= 0.05));
    CHECK(g_boot.statistic == doctest::Approx(g_null.statistic));

    CHECK_THROWS_AS(gof_exponentiality(exp_sample, Metric::Wasserstein, 0.05,
                                       GofMethod::Asymptotic, cfg, 4000),
                    ConfigError);
}
