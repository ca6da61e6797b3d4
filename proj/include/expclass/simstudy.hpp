#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "expclass/asymptotics.hpp"
#include "expclass/distributions.hpp"
#include "expclass/metrics.hpp"

namespace expclass {

// Monte Carlo comparison of the standardized estimation error
// sqrt(n)*(d(F_n,G_muhat) - d(F,G_mu)) across sample sizes against its
// asymptotic law, one cell per (distribution, metric, n or "infinity").
struct StudyConfig {
    std::vector<std::pair<DistKind, double>> distributions{
        {DistKind::Exponential, 1.0}, {DistKind::Weibull, 0.9}, {DistKind::Weibull, 1.1},
        {DistKind::Gamma, 0.9},       {DistKind::Gamma, 1.1}};
    std::vector<std::size_t> sizes{100, 500, 1000, 5000};
    std::size_t replicates = 10000;
    std::vector<Metric> metrics{Metric::NormWasserstein, Metric::NormZolotarev2};
    std::uint64_t seed = 0;
    std::size_t grid_points = 20000;
    BridgeConfig bridge;  // reps field ignored; replicates is used
};

struct StudyRow {
    std::string distribution;
    Metric metric;
    std::string n_label;  // "100", ..., or "infinity"
    std::size_t replicate;
    double value;
};

using StudyCell = std::tuple<std::string, Metric, std::string>;

struct BoxplotStats {
    double q1, median, q3;
    double whisker_lo, whisker_hi;  // Tukey 1.5*IQR whiskers
    std::size_t n_outliers;
};

// True d(F, G_mu) from the analytic cdfs by trapezoid quadrature on
// grid_points+1 nodes over [0, T] with the usual horizon rule.
double true_distance(const RefDistribution& ref, Metric metric, std::size_t grid_points,
                     double tol = 1e-6);

std::vector<StudyRow> run_study(const StudyConfig& cfg);

std::map<StudyCell, BoxplotStats> summarize(const std::vector<StudyRow>& rows);

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows);
void write_summary_json(std::ostream& out, const std::map<StudyCell, BoxplotStats>& cells);

}  // namespace expclass
