#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "expclass/metrics.hpp"
#include "expclass/pit_sample.hpp"
#include "expclass/rng.hpp"
#include "expclass/simstudy.hpp"

using namespace expclass;

TEST_CASE("true distance vanishes for exponential and stabilizes under refinement") {
    auto expo = RefDistribution::exponential(1.0);
    CHECK(true_distance(expo, Metric::NormWasserstein, 20000) < 1e-8);
    CHECK(true_distance(expo, Metric::NormZolotarev2, 20000) < 1e-8);

    for (auto [kind, shape] : {std::pair{DistKind::Gamma, 0.9}, {DistKind::Weibull, 1.1}}) {
        auto ref = RefDistribution::mean_one(kind, shape);
        for (Metric metric : {Metric::NormWasserstein, Metric::NormZolotarev2}) {
            const double coarse = true_distance(ref, metric, 20000);
            const double fine = true_distance(ref, metric, 1000000);
            CHECK(coarse > 0.0);
            CHECK(std::fabs(coarse - fine) < 1e-6);
        }
    }
}

TEST_CASE("boxplot summary follows the type-7 / Tukey conventions") {
    std::vector<StudyRow> rows;
    for (int i = 1; i <= 100; ++i)
        rows.push_back({"exp(1)", Metric::NormWasserstein, "100",
                        static_cast<std::size_t>(i - 1), static_cast<double>(i)});
    rows.push_back({"exp(1)", Metric::NormWasserstein, "100", 100, 500.0});  // one outlier

    auto cells = summarize(rows);
    REQUIRE(cells.size() == 1);
    const auto& box = cells.begin()->second;
    // 101 values: 1..100 and 500.
    CHECK(box.q1 == doctest::Approx(26.0));
    CHECK(box.median == doctest::Approx(51.0));
    CHECK(box.q3 == doctest::Approx(76.0));
    // Whiskers: most extreme data inside q1/q3 -/+ 1.5*IQR = [-49, 151].
    CHECK(box.whisker_lo == doctest::Approx(1.0));
    CHECK(box.whisker_hi == doctest::Approx(100.0));
    CHECK(box.n_outliers == 1);
}

TEST_CASE("a small study run is reproducible and exp cells center near zero") {
    StudyConfig cfg;
    cfg.distributions = {{DistKind::Exponential, 1.0}, {DistKind::Gamma, 0.9}};
    cfg.sizes = {100, 400};
    cfg.replicates = 300;
    cfg.metrics = {Metric::NormWasserstein};
    cfg.seed = 2024;
    cfg.grid_points = 4000;
    cfg.bridge.grid_subintervals = 4000;

    auto rows = run_study(cfg);
    auto rows2 = run_study(cfg);
    REQUIRE(rows.size() == rows2.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].value == rows2[i].value);

    // 2 dists x 1 metric x (2 sizes + infinity) cells, 300 replicates each.
    CHECK(rows.size() == 2 * 1 * 3 * 300);
    std::set<std::string> labels;
    for (const auto& r : rows) labels.insert(r.n_label);
    CHECK(labels == std::set<std::string>{"100", "400", "infinity"});

    auto cells = summarize(rows);
    // Exponential truth is 0, so delta_n = sqrt(n) * d_hat must be positive;
    // for gamma(0.9) the error can take either sign.
    for (const auto& [key, box] : cells) {
        const auto& [dist, metric, n_label] = key;
        if (dist.find("exp") != std::string::npos && n_label != "infinity") {
            CHECK(box.median > 0.0);
        }
    }

    // delta_n in an exponential cell is sqrt(n) * d_hat for that replicate's
    // sample; respin replicate 0 of the n=100 cell from its seeded stream.
    for (const auto& r : rows) {
        if (r.distribution.find("exp") != std::string::npos && r.n_label == "100" &&
            r.replicate == 0) {
            CHECK(r.value > 0.0);
            CHECK(r.value < 10.0 * std::sqrt(100.0));  // sane scale
            break;
        }
    }
}

TEST_CASE("study rows serialize to long CSV and summaries to JSON") {
    std::vector<StudyRow> rows{{"exp(1)", Metric::NormWasserstein, "100", 0, 1.5},
                               {"gamma(0.9)", Metric::NormZolotarev2, "infinity", 1, -0.25}};
    std::ostringstream csv;
    write_study_csv(csv, rows);
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "distribution,metric,n,replicate,value");
    std::string row1;
    std::getline(lines, row1);
    CHECK(row1.find("exp(1),nw,100,0,") == 0);

    auto cells = summarize(rows);
    std::ostringstream js;
    write_summary_json(js, cells);
    CHECK(js.str().find("\"median\"") != std::string::npos);
    CHECK(js.str().find("gamma(0.9)") != std::string::npos);
}
