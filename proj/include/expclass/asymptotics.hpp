#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "expclass/cdf.hpp"
#include "expclass/metrics.hpp"
#include "expclass/pit_sample.hpp"

namespace expclass {

struct BridgeConfig {
    double horizon_T = 0.0;  // 0 = auto: ceil(F^{-1}(1 - tol))
    std::size_t grid_subintervals = 50000;
    double tol = 1e-6;
    std::size_t reps = 10000;
    std::uint64_t seed = 0;
};

struct LimitLawDraws {
    Metric metric;
    std::string reference;  // description of F
    std::vector<double> draws;
    std::size_t reps() const { return draws.size(); }
};

// Simulates the weak limit of sqrt(n)*(d(F_n,G_muhat) - d(F,G_mu)) for one
// (metric, F) pair: an F-time-changed Brownian bridge is pushed through the
// limit functional, then integrated against the sign of g_d (plain L1 norm
// on the zero set of g_d, which is everything when F is exponential).
//
// All grid-dependent quantities (time grid, F values, g_d and its sign,
// the exponential weights) are precomputed at construction; draws reuse
// internal buffers, so one sampler instance is not safe for concurrent
// draw calls. Distinct instances are independent.
class LimitLawSampler {
  public:
    LimitLawSampler(Metric metric, const CdfModel& ref, const BridgeConfig& cfg);

    double horizon() const { return horizon_; }
    std::size_t nodes() const { return t_.size(); }
    double step() const { return step_; }

    // Discretized F-Brownian bridge at the grid times.
    void bridge_path(std::mt19937_64& gen, std::vector<double>& out) const;
    // Applies the limit functional of the configured metric to a path.
    void limit_process(const std::vector<double>& bridge, std::vector<double>& out) const;
    // One draw of delta_infinity.
    double draw(std::mt19937_64& gen) const;

    LimitLawDraws sample(std::size_t reps, std::uint64_t seed) const;

  private:
    Metric metric_;
    std::string reference_;
    double mu_;
    double horizon_;
    double step_;
    std::vector<double> t_;        // grid times
    std::vector<double> u_;        // F(t)
    std::vector<double> weight_;   // coefficient of int B in the functional
    std::vector<double> sign_;     // sgn(g_d), 0 on |g_d| <= zero_tol
    double path_scale_;            // leading 1, 1/mu or 1/mu^2 factor
    bool integrate_path_;          // zeta metrics use the suffix integral of B
    mutable std::vector<double> work_w_, work_b_, work_s_, work_x_;
};

LimitLawDraws sample_delta_infinity(Metric metric, const RefDistribution& ref,
                                    const BridgeConfig& cfg);

// Corollary-1 null law: draws of ||X_{d,G_1}||_1 with F = exponential(1).
// Only the normalized metrics have a mu-free null law.
LimitLawDraws null_law(Metric metric, const BridgeConfig& cfg);

enum class CiMethod { AsymptoticNormal, AsymptoticQuantile, BootstrapPercentile };
CiMethod ci_method_from_string(const std::string& name);

struct ConfidenceInterval {
    double lo, hi;
    double estimate;
    double level;
    CiMethod method;
};

ConfidenceInterval confidence_interval(const PitSample& sample, Metric metric, double level,
                                       CiMethod method, const BridgeConfig& cfg,
                                       std::size_t grid_points = 20000);

enum class GofMethod { Asymptotic, ParametricBootstrap };
GofMethod gof_method_from_string(const std::string& name);

struct GofResult {
    double statistic;  // sqrt(n) * d(F_n, G_muhat)
    double p_value;
    bool reject;
    Metric metric;
    GofMethod method;
    std::size_t reps;
    std::uint64_t seed;
};

// Test of H0: F exponential, one-sided (reject for large distances).
GofResult gof_exponentiality(const PitSample& sample, Metric metric, double level,
                             GofMethod method, const BridgeConfig& cfg,
                             std::size_t grid_points = 20000);

// Same test against precomputed null-law draws (shared across many calls).
GofResult gof_with_null(const PitSample& sample, Metric metric, double level,
                        const LimitLawDraws& null_draws, std::size_t grid_points = 20000);

}  // namespace expclass
