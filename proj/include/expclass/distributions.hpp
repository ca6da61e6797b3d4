#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expclass/pit_sample.hpp"

namespace expclass {

enum class DistKind { Exponential, Weibull, Gamma };

std::string to_string(DistKind kind);

// Analytic reference distribution on (0, inf). Used both as a data
// generator and as the exponential target with matched mean.
class RefDistribution {
  public:
    // Exponential with mean mu: cdf(t) = 1 - exp(-t/mu).
    static RefDistribution exponential(double mu);

    // Weibull or gamma scaled to unit mean: Weibull uses scale
    // 1/Gamma(1+1/shape), gamma uses scale 1/shape. An Exponential kind
    // here is exponential(1) regardless of shape.
    static RefDistribution mean_one(DistKind kind, double shape);

    static RefDistribution make(DistKind kind, double shape, double scale);

    DistKind kind() const { return kind_; }
    double shape() const { return shape_; }
    double scale() const { return scale_; }
    double mean() const { return mean_; }
    std::string describe() const;

    double cdf(double t) const;
    double density(double t) const;
    // Inverse cdf; closed form for exponential and Weibull, bracketed
    // root-find (tolerance 1e-10) for gamma.
    double quantile(double p) const;

    // n i.i.d. draws, deterministic per seed. Exponential and Weibull use
    // the inverse cdf; gamma uses the Marsaglia-Tsang rejection sampler.
    std::vector<double> sample_values(std::size_t n, std::uint64_t seed) const;
    PitSample sample(std::size_t n, std::uint64_t seed) const;

  private:
    RefDistribution(DistKind kind, double shape, double scale);
    DistKind kind_;
    double shape_;
    double scale_;
    double mean_;
};

}  // namespace expclass
