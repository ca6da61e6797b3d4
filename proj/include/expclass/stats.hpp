#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace expclass::stats {

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // denominator n-1
double sd(const std::vector<double>& x);

// Linear-interpolation quantile (R type 7) on an already sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double p);
// Convenience: copies and sorts.
double quantile(std::vector<double> x, double p);

// One-sample Kolmogorov-Smirnov statistic of sorted data against a cdf.
double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov statistic of two sorted samples.
double ks_two_sample_statistic(const std::vector<double>& a, const std::vector<double>& b);

// Asymptotic survival function of the Kolmogorov distribution,
// P(K > x) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_sf(double x);

// Asymptotic p-value for the two-sample statistic.
double ks_two_sample_pvalue(const std::vector<double>& a, const std::vector<double>& b);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace expclass::stats
