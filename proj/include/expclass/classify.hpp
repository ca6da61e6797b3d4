#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace expclass {

// 2-D feature rows (log median energy, log distance) with optional labels.
// Class names are kept in a fixed order; index order doubles as the
// deterministic tie-break order (NM < HO < LO in the default setup).
struct FeatureMatrix {
    std::vector<std::array<double, 2>> points;
    std::vector<int> labels;  // index into class_names, -1 = unlabeled
    std::vector<std::string> class_names;

    std::size_t n() const { return points.size(); }
    std::size_t n_classes() const { return class_names.size(); }
};

struct QdaClass {
    double prior;
    std::array<double, 2> mean;
    std::array<double, 4> cov;  // row-major 2x2, symmetric
};

// Gaussian class-conditional model with per-class covariances.
class QdaModel {
  public:
    QdaModel(std::vector<QdaClass> classes, std::vector<std::string> names);

    // Posterior probabilities, normalized to sum 1.
    std::vector<double> posteriors(const std::array<double, 2>& x) const;
    int predict(const std::array<double, 2>& x) const;

    const std::vector<QdaClass>& classes() const { return classes_; }
    const std::vector<std::string>& class_names() const { return names_; }

    void save_json(std::ostream& out) const;
    static QdaModel load_json(std::istream& in);

  private:
    std::vector<QdaClass> classes_;
    std::vector<std::string> names_;
    // Cached per-class Cholesky factors of the covariances.
    std::vector<std::array<double, 3>> chol_;  // l11, l21, l22
    std::vector<double> log_norm_;
};

// Fits priors, means and covariances per class. Throws ConfigError when a
// class has fewer than 3 rows or a singular covariance (suggesting the
// ridge flag, which adds ridge*I to every covariance).
QdaModel fit_qda(const FeatureMatrix& data, double ridge = 0.0);

// Majority vote among the k nearest training rows (Euclidean distance on
// the raw log features, no standardization). Voting ties break by smaller
// mean distance, then by class index order.
int knn_predict(const FeatureMatrix& train, std::size_t k, const std::array<double, 2>& x);

enum class CvScheme { Cv10, Cv5, Loo };
CvScheme cv_scheme_from_string(const std::string& name);

struct KSelection {
    std::size_t best_k;
    std::vector<std::pair<std::size_t, double>> accuracy;  // (k, cv accuracy)
};

// Cross-validated accuracy per k over a grid (default: odd k in [5,63]);
// folds are seeded and stratified by class. Ties pick the smallest k.
KSelection select_k(const FeatureMatrix& train, std::vector<std::size_t> k_grid,
                    CvScheme scheme, std::uint64_t seed);
std::vector<std::size_t> default_k_grid();

struct ConfusionMatrix {
    std::size_t n_classes;
    std::vector<std::size_t> counts;  // predicted * n_classes + actual
    std::vector<std::string> class_names;

    std::size_t at(std::size_t predicted, std::size_t actual) const {
        return counts[predicted * n_classes + actual];
    }
    std::size_t total() const;
    double accuracy() const;
    // Positive predictive value: diagonal over predicted-row sum.
    double ppv(std::size_t cls) const;
};

template <typename Predictor>
ConfusionMatrix evaluate(const Predictor& predict, const FeatureMatrix& data) {
    ConfusionMatrix cm{data.n_classes(),
                       std::vector<std::size_t>(data.n_classes() * data.n_classes(), 0),
                       data.class_names};
    for (std::size_t i = 0; i < data.n(); ++i) {
        if (data.labels[i] < 0) continue;
        const int pred = predict(data.points[i]);
        ++cm.counts[static_cast<std::size_t>(pred) * cm.n_classes +
                    static_cast<std::size_t>(data.labels[i])];
    }
    return cm;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm);

}  // namespace expclass
