#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "expclass/classify.hpp"
#include "expclass/errors.hpp"
#include "expclass/rng.hpp"

using namespace expclass;

namespace {

FeatureMatrix three_gaussians(std::size_t per_class, std::uint64_t seed, double spread = 0.25) {
    FeatureMatrix m;
    m.class_names = {"NM", "HO", "LO"};
    const std::array<std::array<double, 2>, 3> centers{{{0.0, 0.0}, {3.0, 0.5}, {1.5, 3.0}}};
    auto gen = rng::stream(seed);
    std::normal_distribution<double> noise(0.0, spread);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            m.points.push_back({centers[c][0] + noise(gen), centers[c][1] + noise(gen)});
            m.labels.push_back(c);
        }
    }
    return m;
}

}  // namespace

TEST_CASE("qda separates well-separated gaussians and returns proper posteriors") {
    auto train = three_gaussians(120, 5);
    auto test = three_gaussians(80, 6);
    auto model = fit_qda(train);

    auto cm = evaluate([&](const std::array<double, 2>& x) { return model.predict(x); }, test);
    CHECK(cm.accuracy() >= 0.99);
    CHECK(cm.total() == 240);

    for (const auto& p : test.points) {
        auto post = model.posteriors(p);
        REQUIRE(post.size() == 3);
        double sum = 0.0;
        for (double v : post) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Symmetric two-class midpoint gets a 0.5/0.5 posterior.
    QdaModel sym({{0.5, {-1.0, 0.0}, {1.0, 0.0, 0.0, 1.0}},
                  {0.5, {1.0, 0.0}, {1.0, 0.0, 0.0, 1.0}}},
                 {"A", "B"});
    auto post = sym.posteriors({0.0, 0.0});
    CHECK(post[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(post[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sym.predict({0.0, 0.0}) == 0);  // tie breaks to the first class
}

TEST_CASE("qda rejects degenerate training sets, ridge rescues them") {
    FeatureMatrix tiny;
    tiny.class_names = {"A", "B"};
    tiny.points = {{0, 0}, {1, 1}, {2, 2}, {5, 0}, {6, 1}, {7, 2}};
    tiny.labels = {0, 0, 0, 1, 1, 1};
    // Both classes are collinear: singular covariance.
    CHECK_THROWS_AS(fit_qda(tiny), ConfigError);
    auto model = fit_qda(tiny, 1e-3);
    CHECK(model.predict({1.0, 1.0}) == 0);
    CHECK(model.predict({6.0, 1.0}) == 1);

    FeatureMatrix scarce;
    scarce.class_names = {"A", "B"};
    scarce.points = {{0, 0}, {1, 0}, {0, 1}, {5, 5}, {6, 5}};
    scarce.labels = {0, 0, 0, 1, 1};  // class B has 2 < 3 rows
    CHECK_THROWS_AS(fit_qda(scarce), ConfigError);
}

TEST_CASE("qda model json round trip preserves predictions") {
    auto train = three_gaussians(50, 9);
    auto model = fit_qda(train);
    std::stringstream buf;
    model.save_json(buf);
    auto back = QdaModel::load_json(buf);
    REQUIRE(back.class_names() == model.class_names());
    for (const auto& p : train.points) {
        CHECK(back.predict(p) == model.predict(p));
        auto a = model.posteriors(p), b = back.posteriors(p);
        for (std::size_t c = 0; c < a.size(); ++c)
            CHECK(b[c] == doctest::Approx(a[c]).epsilon(1e-12));
    }
}

TEST_CASE("knn edge cases: k=1, k=n, and deterministic tie-breaking") {
    FeatureMatrix train;
    train.class_names = {"A", "B"};
    train.points = {{0, 0}, {0, 1}, {10, 0}, {10, 1}};
    train.labels = {0, 0, 1, 1};

    CHECK(knn_predict(train, 1, {0.1, 0.0}) == 0);
    CHECK(knn_predict(train, 1, {9.9, 1.0}) == 1);
    // k = n: 2-2 vote; the A points are nearer the query, so mean distance
    // breaks the tie toward A.
    CHECK(knn_predict(train, 4, {2.0, 0.5}) == 0);
    CHECK(knn_predict(train, 4, {8.0, 0.5}) == 1);
    // Perfectly symmetric 2-2 vote falls back to class index order.
    CHECK(knn_predict(train, 4, {5.0, 0.5}) == 0);

    CHECK_THROWS_AS(knn_predict(train, 0, {0.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(knn_predict(train, 5, {0.0, 0.0}), ConfigError);

    // knn accuracy on separated clusters.
    auto big = three_gaussians(60, 21);
    auto test = three_gaussians(40, 22);
    auto cm = evaluate([&](const std::array<double, 2>& x) { return knn_predict(big, 5, x); },
                       test);
    CHECK(cm.accuracy() >= 0.95);
}

TEST_CASE("k selection is deterministic, stratified, and tie-breaks small") {
    auto train = three_gaussians(40, 31);
    auto grid = std::vector<std::size_t>{5, 9, 13};
    auto sel1 = select_k(train, grid, CvScheme::Cv5, 111);
    auto sel2 = select_k(train, grid, CvScheme::Cv5, 111);
    CHECK(sel1.best_k == sel2.best_k);
    REQUIRE(sel1.accuracy.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(sel1.accuracy[i].first == grid[i]);
        CHECK(sel1.accuracy[i].second == doctest::Approx(sel2.accuracy[i].second));
        CHECK(sel1.accuracy[i].second >= 0.9);  // clusters barely overlap
    }
    // On a perfectly separable set every k is tied at accuracy 1 -> pick 5.
    auto clean = three_gaussians(40, 32, 0.05);
    auto sel = select_k(clean, grid, CvScheme::Cv10, 7);
    CHECK(sel.best_k == 5);
    for (auto [k, acc] : sel.accuracy) CHECK(acc == doctest::Approx(1.0));

    auto loo = select_k(clean, {5}, CvScheme::Loo, 0);
    CHECK(loo.accuracy[0].second == doctest::Approx(1.0));

    CHECK(default_k_grid().front() == 5);
    CHECK(default_k_grid().back() == 63);
}

TEST_CASE("confusion matrix bookkeeping and csv output") {
    ConfusionMatrix cm{2, {8, 2, 1, 9}, {"A", "B"}};
    CHECK(cm.total() == 20);
    CHECK(cm.accuracy() == doctest::Approx(17.0 / 20.0));
    CHECK(cm.at(0, 1) == 2);
    CHECK(cm.ppv(0) == doctest::Approx(8.0 / 10.0));
    CHECK(cm.ppv(1) == doctest::Approx(9.0 / 10.0));

    std::ostringstream out;
    write_confusion_csv(out, cm);
    CHECK(out.str().find("predicted") != std::string::npos);
    CHECK(out.str().find("A") != std::string::npos);
}

TEST_CASE("qda predictions are invariant under common shifts of all features") {
    auto train = three_gaussians(50, 41);
    auto shifted = train;
    for (auto& p : shifted.points) {
        p[0] += 10.0;
        p[1] -= 4.0;
    }
    auto m1 = fit_qda(train);
    auto m2 = fit_qda(shifted);
    for (const auto& p : train.points) {
        std::array<double, 2> q{p[0] + 10.0, p[1] - 4.0};
        CHECK(m2.predict(q) == m1.predict(p));
    }
}
