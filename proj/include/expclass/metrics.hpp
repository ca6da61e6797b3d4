#pragma once

#include <cstddef>
#include <string>

#include "expclass/pit_sample.hpp"

namespace expclass {

enum class Metric { Kolmogorov, Wasserstein, Zolotarev2, NormWasserstein, NormZolotarev2 };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& name);
bool is_normalized(Metric m);

struct DistanceEstimate {
    Metric metric;
    double value;
    std::size_t n;
    std::size_t grid_points;  // 0 for the grid-free Kolmogorov sup
};

// Exact sup of |F_n - G_muhat| over the sample's jump points; no grid.
DistanceEstimate kolmogorov(const PitSample& sample);

// L1 distance between F_n and the exponential cdf with mean muhat. The head
// and tail pieces are closed form; the middle integral over
// [X_(1), X_(n)] uses the trapezoid rule on grid_points+1 equispaced nodes.
DistanceEstimate wasserstein(const PitSample& sample, std::size_t grid_points = 20000);

// Zolotarev zeta_2 distance to the exponential cdf with mean muhat:
// 2 * integral of the positive part of the running integral of F_n - G,
// accumulated on the same trapezoid grid, plus muhat^2 - a2/2. Clamped to 0
// when quadrature noise gives a tiny negative value; throws QuadratureError
// below -1e-6.
DistanceEstimate zolotarev2(const PitSample& sample, std::size_t grid_points = 20000);

// Scale-free versions: Wasserstein / muhat, zeta_2 / muhat^2.
DistanceEstimate normalized(const PitSample& sample, Metric metric,
                            std::size_t grid_points = 20000);

DistanceEstimate compute_distance(const PitSample& sample, Metric metric,
                                  std::size_t grid_points = 20000);

// Test oracles, independent of the grid scheme above.

// Exact piecewise integral of |F_n - G_muhat|: on each order-statistic
// interval the integrand is |i/n - G| integrated in closed form, split at
// the crossing -muhat*log(1 - i/n) when it falls inside.
double wasserstein_exact_oracle(const PitSample& sample);

// zolotarev2 on a 2e6-point grid.
double zolotarev2_fine_oracle(const PitSample& sample);

}  // namespace expclass
