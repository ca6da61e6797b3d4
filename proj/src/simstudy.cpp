#include "expclass/simstudy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <nlohmann/json.hpp>

#include "expclass/errors.hpp"
#include "expclass/kernels.hpp"
#include "expclass/rng.hpp"
#include "expclass/stats.hpp"

namespace expclass {

double true_distance(const RefDistribution& ref, Metric metric, std::size_t grid_points,
                     double tol) {
    if (metric == Metric::Kolmogorov) throw ConfigError("true_distance covers the L1 metrics");
    const double mu = ref.mean();
    const RefDistribution target = RefDistribution::exponential(mu);
    const double horizon = std::ceil(std::max(ref.quantile(1.0 - tol),
                                              target.quantile(1.0 - tol)));
    const std::size_t nodes = grid_points + 1;
    const double h = horizon / static_cast<double>(grid_points);

    std::vector<double> diff(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double t = static_cast<double>(k) * h;
        diff[k] = ref.cdf(t) - target.cdf(t);
    }
    const auto& kr = kernels::active();
    double value = 0.0;
    switch (metric) {
        case Metric::Wasserstein:
            value = kr.trapezoid_abs(diff.data(), nodes, h);
            break;
        case Metric::NormWasserstein:
            value = kr.trapezoid_abs(diff.data(), nodes, h) / mu;
            break;
        case Metric::Zolotarev2:
        case Metric::NormZolotarev2: {
            std::vector<double> suffix(nodes);
            kernels::suffix_trapezoid(diff.data(), nodes, h, suffix.data());
            value = kr.trapezoid_abs(suffix.data(), nodes, h);
            if (metric == Metric::NormZolotarev2) value /= mu * mu;
            break;
        }
        default: break;
    }
    return value;
}

std::vector<StudyRow> run_study(const StudyConfig& cfg) {
    if (cfg.replicates < 100) throw ConfigError("replicates must be >= 100");
    if (!std::is_sorted(cfg.sizes.begin(), cfg.sizes.end())) {
        throw ConfigError("sizes must be ascending");
    }
    std::vector<StudyRow> rows;
    rows.reserve(cfg.distributions.size() * cfg.metrics.size() * (cfg.sizes.size() + 1) *
                 cfg.replicates);

    std::uint64_t dist_id = 0;
    for (const auto& [kind, shape] : cfg.distributions) {
        const RefDistribution ref = RefDistribution::mean_one(kind, shape);
        const std::string name = ref.describe();
        std::uint64_t metric_id = 0;
        for (Metric metric : cfg.metrics) {
            const double d_true = true_distance(ref, metric, 1000000);
            for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
                const std::size_t n = cfg.sizes[si];
                const double sqrt_n = std::sqrt(static_cast<double>(n));
                for (std::size_t r = 0; r < cfg.replicates; ++r) {
                    // Stream keyed by the whole cell so cells are independent
                    // and reproducible regardless of evaluation order.
                    std::uint64_t s = cfg.seed;
                    rng::splitmix64(s);
                    s ^= (dist_id << 24) ^ (metric_id << 16) ^ n;
                    const PitSample sample = ref.sample(n, s ^ (r * 0x9e3779b9ULL));
                    const double d_hat =
                        compute_distance(sample, metric, cfg.grid_points).value;
                    rows.push_back({name, metric, std::to_string(n), r,
                                    sqrt_n * (d_hat - d_true)});
                }
            }
            BridgeConfig bridge = cfg.bridge;
            bridge.reps = cfg.replicates;
            bridge.seed = cfg.seed ^ (dist_id << 40) ^ (metric_id << 32) ^ 0xa5a5ULL;
            LimitLawDraws inf_draws = sample_delta_infinity(metric, ref, bridge);
            for (std::size_t r = 0; r < inf_draws.draws.size(); ++r) {
                rows.push_back({name, metric, "infinity", r, inf_draws.draws[r]});
            }
            ++metric_id;
        }
        ++dist_id;
    }
    return rows;
}

std::map<StudyCell, BoxplotStats> summarize(const std::vector<StudyRow>& rows) {
    if (rows.empty()) throw EmptyDataError("empty study table");
    std::map<StudyCell, std::vector<double>> cells;
    for (const auto& r : rows) {
        cells[{r.distribution, r.metric, r.n_label}].push_back(r.value);
    }
    std::map<StudyCell, BoxplotStats> out;
    for (auto& [key, values] : cells) {
        if (values.empty()) {
            throw EmptyDataError("empty cell: " + std::get<0>(key) + "/" +
                                 to_string(std::get<1>(key)) + "/" + std::get<2>(key));
        }
        std::sort(values.begin(), values.end());
        BoxplotStats b{};
        b.q1 = stats::quantile_sorted(values, 0.25);
        b.median = stats::quantile_sorted(values, 0.5);
        b.q3 = stats::quantile_sorted(values, 0.75);
        const double iqr = b.q3 - b.q1;
        const double lo_fence = b.q1 - 1.5 * iqr;
        const double hi_fence = b.q3 + 1.5 * iqr;
        b.whisker_lo = values.back();
        b.whisker_hi = values.front();
        b.n_outliers = 0;
        for (double v : values) {
            if (v < lo_fence || v > hi_fence) {
                ++b.n_outliers;
            } else {
                b.whisker_lo = std::min(b.whisker_lo, v);
                b.whisker_hi = std::max(b.whisker_hi, v);
            }
        }
        out[key] = b;
    }
    return out;
}

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
    out << "distribution,metric,n,replicate,value\n";
    out << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.distribution << ',' << to_string(r.metric) << ',' << r.n_label << ','
            << r.replicate << ',' << r.value << '\n';
    }
}

void write_summary_json(std::ostream& out, const std::map<StudyCell, BoxplotStats>& cells) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [key, b] : cells) {
        j.push_back({{"distribution", std::get<0>(key)},
                     {"metric", to_string(std::get<1>(key))},
                     {"n", std::get<2>(key)},
                     {"q1", b.q1},
                     {"median", b.median},
                     {"q3", b.q3},
                     {"whisker_lo", b.whisker_lo},
                     {"whisker_hi", b.whisker_hi},
                     {"n_outliers", b.n_outliers}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace expclass
