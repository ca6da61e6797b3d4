#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expclass/asymptotics.hpp"
#include "expclass/errors.hpp"
#include "expclass/ingest.hpp"
#include "expclass/rng.hpp"

using namespace expclass;

namespace {

EventSeries events_from(const std::string& csv, const std::string& id = "src") {
    std::istringstream in(csv);
    return parse_events(in, id);
}

}  // namespace

TEST_CASE("event parsing: ordering, dedup, and line-numbered errors") {
    auto s = events_from(
        "time_s,energy_kev\n"
        "3.0,1.5\n"
        "1.0,2.0\n"
        "2.0,0.9\n"
        "2.0,4.0\n");
    REQUIRE(s.arrivals.size() == 3);
    CHECK(s.arrivals == std::vector<double>{1.0, 2.0, 3.0});
    // Duplicate timestamp keeps the first row encountered (energy 0.9).
    CHECK(s.energies == std::vector<double>{2.0, 0.9, 1.5});
    REQUIRE(s.good_intervals.size() == 1);
    CHECK(s.good_intervals[0].first == 1.0);
    CHECK(s.good_intervals[0].second == 3.0);

    try {
        events_from("time_s,energy_kev\n1.0,2.0\nbad,row\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 3);
    }
    CHECK_THROWS_AS(events_from("wrong,header\n1.0,2.0\n"), ParseError);
    CHECK_THROWS_AS(events_from("time_s,energy_kev\n1.0\n"), ParseError);
}

TEST_CASE("gap parsing and complement construction") {
    std::istringstream gaps_in(
        "gap_start_s,gap_end_s\n"
        "4.0,6.0\n"
        "1.5,2.5\n");
    auto gaps = parse_gaps(gaps_in);
    REQUIRE(gaps.size() == 2);
    CHECK(gaps[0].first == 1.5);  // sorted

    auto s = events_from(
        "time_s,energy_kev\n"
        "1.0,1.0\n"
        "2.0,1.0\n"
        "3.0,1.0\n"
        "5.0,1.0\n"
        "7.0,1.0\n"
        "8.0,1.0\n");
    apply_gaps(s, gaps);
    // Events in [gap_start, gap_end) are dropped: 2.0 and 5.0 go.
    CHECK(s.arrivals == std::vector<double>{1.0, 3.0, 7.0, 8.0});
    // Complement of the gaps within [1, 8].
    REQUIRE(s.good_intervals.size() == 3);
    CHECK(s.good_intervals[0] == std::pair<double, double>{1.0, 1.5});
    CHECK(s.good_intervals[1] == std::pair<double, double>{2.5, 4.0});
    CHECK(s.good_intervals[2] == std::pair<double, double>{6.0, 8.0});

    std::istringstream overlap("gap_start_s,gap_end_s\n1.0,3.0\n2.0,4.0\n");
    CHECK_THROWS_AS(parse_gaps(overlap), ParseError);
}

TEST_CASE("energy filter keeps the closed band and is idempotent") {
    auto s = events_from(
        "time_s,energy_kev\n"
        "1.0,0.4\n"
        "2.0,0.5\n"
        "3.0,3.0\n"
        "4.0,8.0\n"
        "5.0,8.1\n");
    auto f = filter_energy(s);
    CHECK(f.arrivals == std::vector<double>{2.0, 3.0, 4.0});
    auto ff = filter_energy(f);
    CHECK(ff.arrivals == f.arrivals);
    CHECK(ff.energies == f.energies);
}

TEST_CASE("pit extraction: same-interval diffs only, straddles dropped") {
    auto s = events_from(
        "time_s,energy_kev\n"
        "1.0,1.0\n"
        "1.5,1.0\n"
        "3.0,1.0\n"
        "7.0,1.0\n"
        "7.25,1.0\n");
    apply_gaps(s, {{4.0, 6.0}});
    auto pits = extract_pits(s);
    // (1.0,1.5), (1.5,3.0) in the first window; (7.0,7.25) in the second.
    // The 3.0 -> 7.0 pair straddles the gap and must not appear.
    REQUIRE(pits.n() == 3);
    CHECK(pits.values() == std::vector<double>{0.25, 0.5, 1.5});

    auto lone = events_from("time_s,energy_kev\n1.0,1.0\n");
    CHECK_THROWS_AS(extract_pits(lone), EmptyDataError);
}

TEST_CASE("feature rows: min-pit rule and median energy") {
    std::ostringstream csv;
    csv << "time_s,energy_kev\n";
    for (int i = 0; i < 120; ++i) csv << (i * 0.5) << "," << (1.0 + 0.01 * i) << "\n";
    auto s = events_from(csv.str(), "bright");
    auto feats = build_features(s, 100, 4000);
    REQUIRE(feats.has_value());
    CHECK(feats->source_id == "bright");
    CHECK(feats->n_pit == 119);
    // 120 energies 1.00..2.19: even count -> average of the middle two.
    CHECK(feats->med_energy_kev == doctest::Approx(0.5 * (1.59 + 1.60)).epsilon(1e-12));
    CHECK(feats->dist_kolmogorov > 0.0);
    CHECK(feats->dist_norm_wasserstein > 0.0);
    CHECK(feats->dist_norm_zolotarev2 > 0.0);
    CHECK_FALSE(feats->class_label.has_value());

    auto small = events_from("time_s,energy_kev\n1.0,1.0\n2.0,1.0\n3.0,1.0\n");
    CHECK_FALSE(build_features(small, 100, 4000).has_value());
}

TEST_CASE("features CSV round trip") {
    std::vector<SourceFeatures> rows{
        {"a", 150, 1.25, 0.04, 0.05, 0.003, std::optional<std::string>{"NM"}},
        {"b", 301, 2.5, 0.10, 0.20, 0.030, std::nullopt},
    };
    std::ostringstream out;
    write_features_csv(out, rows);
    std::istringstream in(out.str());
    auto back = read_features_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].source_id == "a");
    CHECK(back[0].n_pit == 150);
    CHECK(back[0].med_energy_kev == doctest::Approx(1.25));
    CHECK(back[0].dist_norm_zolotarev2 == doctest::Approx(0.003));
    CHECK(back[0].class_label == std::optional<std::string>{"NM"});
    CHECK_FALSE(back[1].class_label.has_value());
}

TEST_CASE("homogeneous Poisson events survive the pipeline as exponential pits") {
    // Simulate a Poisson process, punch gaps into it, and confirm the
    // extracted pits still look exponential to the GOF machinery.
    BridgeConfig cfg;
    cfg.grid_subintervals = 5000;
    cfg.reps = 1500;
    cfg.seed = 77;
    auto null_draws = null_law(Metric::NormWasserstein, cfg);

    int pass = 0;
    const int trials = 25;
    for (int trial = 0; trial < trials; ++trial) {
        auto gen = rng::stream(1234, static_cast<std::uint64_t>(trial));
        std::exponential_distribution<double> wait(2.0);
        std::ostringstream csv;
        csv << "time_s,energy_kev\n";
        double t = 0.0;
        for (int i = 0; i < 900; ++i) {
            t += wait(gen);
            csv << std::setprecision(17) << t << ",1.0\n";
        }
        auto s = events_from(csv.str());
        apply_gaps(s, {{t * 0.25, t * 0.30}, {t * 0.6, t * 0.62}});
        auto pits = extract_pits(s);
        CHECK(pits.n() < 899);   // straddling pairs removed
        CHECK(pits.n() > 700);
        auto g = gof_with_null(pits, Metric::NormWasserstein, 0.05, null_draws, 4000);
        if (!g.reject) ++pass;
    }
    CHECK(pass >= 22);  // ~size 0.05 test; allow a little slack at 25 trials
}
