#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "expclass/distributions.hpp"
#include "expclass/pit_sample.hpp"

namespace expclass {

// Minimal cdf interface shared by analytic reference distributions and
// empirical cdfs, so limit-law simulation can run in both the known-F and
// the plug-in (bootstrap) settings.
class CdfModel {
  public:
    virtual ~CdfModel() = default;
    virtual double cdf(double t) const = 0;
    virtual double mean() const = 0;
    // Smallest t with cdf(t) >= 1 - tol; input to the horizon rule.
    virtual double upper_quantile(double tol) const = 0;
    virtual std::string describe() const = 0;
};

class AnalyticCdf final : public CdfModel {
  public:
    explicit AnalyticCdf(RefDistribution dist) : dist_(std::move(dist)) {}
    double cdf(double t) const override { return dist_.cdf(t); }
    double mean() const override { return dist_.mean(); }
    double upper_quantile(double tol) const override { return dist_.quantile(1.0 - tol); }
    std::string describe() const override { return dist_.describe(); }
    const RefDistribution& dist() const { return dist_; }

  private:
    RefDistribution dist_;
};

class EmpiricalCdf final : public CdfModel {
  public:
    explicit EmpiricalCdf(const PitSample& sample)
        : values_(sample.values()), mean_(sample.mean_hat()) {}
    double cdf(double t) const override {
        auto it = std::upper_bound(values_.begin(), values_.end(), t);
        return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
    }
    double mean() const override { return mean_; }
    // F_n^{-1}(1 - tol) is X_(n) for any tol < 1/n.
    double upper_quantile(double /*tol*/) const override { return values_.back(); }
    std::string describe() const override {
        return "empirical(n=" + std::to_string(values_.size()) + ")";
    }

  private:
    std::vector<double> values_;
    double mean_;
};

}  // namespace expclass
