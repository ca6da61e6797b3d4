#include "expclass/classify.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "expclass/errors.hpp"
#include "expclass/rng.hpp"

namespace expclass {

namespace {

// Lower Cholesky factor of a symmetric 2x2 matrix; throws on non-SPD.
std::array<double, 3> cholesky2(const std::array<double, 4>& cov) {
    const double a = cov[0], b = cov[1], d = cov[3];
    if (!(a > 0.0)) throw ConfigError("singular class covariance; consider --ridge");
    const double l11 = std::sqrt(a);
    const double l21 = b / l11;
    const double rest = d - l21 * l21;
    if (!(rest > 0.0)) throw ConfigError("singular class covariance; consider --ridge");
    return {l11, l21, std::sqrt(rest)};
}

}  // namespace

QdaModel::QdaModel(std::vector<QdaClass> classes, std::vector<std::string> names)
    : classes_(std::move(classes)), names_(std::move(names)) {
    if (classes_.size() != names_.size() || classes_.size() < 2) {
        throw ConfigError("QDA model needs >= 2 named classes");
    }
    for (const auto& c : classes_) {
        chol_.push_back(cholesky2(c.cov));
        const auto& l = chol_.back();
        log_norm_.push_back(-std::log(2.0 * M_PI) - std::log(l[0] * l[2]));
    }
}

std::vector<double> QdaModel::posteriors(const std::array<double, 2>& x) const {
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) {
        throw ConfigError("non-finite feature point");
    }
    std::vector<double> log_post(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        const auto& l = chol_[c];
        const double d0 = x[0] - classes_[c].mean[0];
        const double d1 = x[1] - classes_[c].mean[1];
        // Solve L y = d; quadratic form is |y|^2.
        const double y0 = d0 / l[0];
        const double y1 = (d1 - l[1] * y0) / l[2];
        log_post[c] = std::log(classes_[c].prior) + log_norm_[c] -
                      0.5 * (y0 * y0 + y1 * y1);
    }
    const double m = *std::max_element(log_post.begin(), log_post.end());
    double total = 0.0;
    for (double& v : log_post) {
        v = std::exp(v - m);
        total += v;
    }
    for (double& v : log_post) v /= total;
    return log_post;
}

int QdaModel::predict(const std::array<double, 2>& x) const {
    const auto post = posteriors(x);
    return static_cast<int>(std::max_element(post.begin(), post.end()) - post.begin());
}

void QdaModel::save_json(std::ostream& out) const {
    nlohmann::json j;
    j["classes"] = nlohmann::json::array();
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        j["classes"].push_back({{"name", names_[c]},
                                {"prior", classes_[c].prior},
                                {"mean", classes_[c].mean},
                                {"cov", classes_[c].cov}});
    }
    out << j.dump(2) << '\n';
}

QdaModel QdaModel::load_json(std::istream& in) {
    nlohmann::json j;
    in >> j;
    std::vector<QdaClass> classes;
    std::vector<std::string> names;
    for (const auto& c : j.at("classes")) {
        QdaClass q;
        q.prior = c.at("prior").get<double>();
        q.mean = c.at("mean").get<std::array<double, 2>>();
        q.cov = c.at("cov").get<std::array<double, 4>>();
        classes.push_back(q);
        names.push_back(c.at("name").get<std::string>());
    }
    return QdaModel(std::move(classes), std::move(names));
}

QdaModel fit_qda(const FeatureMatrix& data, double ridge) {
    const std::size_t nc = data.n_classes();
    std::vector<std::vector<std::size_t>> members(nc);
    for (std::size_t i = 0; i < data.n(); ++i) {
        if (data.labels[i] >= 0) members[static_cast<std::size_t>(data.labels[i])].push_back(i);
    }
    std::size_t total = 0;
    for (const auto& m : members) total += m.size();
    if (total == 0) throw ConfigError("no labeled rows");

    std::vector<QdaClass> classes(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        const auto& idx = members[c];
        if (idx.size() < 3) {
            throw ConfigError("class '" + data.class_names[c] + "' has fewer than 3 rows");
        }
        QdaClass& q = classes[c];
        q.prior = static_cast<double>(idx.size()) / static_cast<double>(total);
        q.mean = {0.0, 0.0};
        for (std::size_t i : idx) {
            q.mean[0] += data.points[i][0];
            q.mean[1] += data.points[i][1];
        }
        q.mean[0] /= static_cast<double>(idx.size());
        q.mean[1] /= static_cast<double>(idx.size());
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (std::size_t i : idx) {
            const double dx = data.points[i][0] - q.mean[0];
            const double dy = data.points[i][1] - q.mean[1];
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        const double denom = static_cast<double>(idx.size() - 1);
        q.cov = {sxx / denom + ridge, sxy / denom, sxy / denom, syy / denom + ridge};
    }
    return QdaModel(std::move(classes), data.class_names);
}

int knn_predict(const FeatureMatrix& train, std::size_t k, const std::array<double, 2>& x) {
    if (train.n() == 0) throw EmptyDataError("empty training set");
    if (k == 0 || k > train.n()) throw ConfigError("k must lie in [1, n]");

    std::vector<std::pair<double, int>> dist;  // (squared distance, label)
    dist.reserve(train.n());
    for (std::size_t i = 0; i < train.n(); ++i) {
        if (train.labels[i] < 0) continue;
        const double dx = train.points[i][0] - x[0];
        const double dy = train.points[i][1] - x[1];
        dist.emplace_back(dx * dx + dy * dy, train.labels[i]);
    }
    if (dist.size() < k) throw ConfigError("fewer labeled rows than k");
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());

    const std::size_t nc = train.n_classes();
    std::vector<std::size_t> votes(nc, 0);
    std::vector<double> mean_dist(nc, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        ++votes[static_cast<std::size_t>(dist[i].second)];
        mean_dist[static_cast<std::size_t>(dist[i].second)] += std::sqrt(dist[i].first);
    }
    int best = -1;
    for (std::size_t c = 0; c < nc; ++c) {
        if (votes[c] == 0) continue;
        if (best < 0 || votes[c] > votes[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(c);
        } else if (votes[c] == votes[static_cast<std::size_t>(best)]) {
            // Tie: smaller mean distance wins; equal means keep the lower
            // class index (already held by `best`).
            const double mc = mean_dist[c] / static_cast<double>(votes[c]);
            const double mb = mean_dist[static_cast<std::size_t>(best)] /
                              static_cast<double>(votes[static_cast<std::size_t>(best)]);
            if (mc < mb) best = static_cast<int>(c);
        }
    }
    return best;
}

CvScheme cv_scheme_from_string(const std::string& name) {
    if (name == "cv10") return CvScheme::Cv10;
    if (name == "cv5") return CvScheme::Cv5;
    if (name == "loo") return CvScheme::Loo;
    throw ConfigError("unknown CV scheme: " + name);
}

std::vector<std::size_t> default_k_grid() {
    std::vector<std::size_t> grid;
    for (std::size_t k = 5; k <= 63; k += 2) grid.push_back(k);
    return grid;
}

KSelection select_k(const FeatureMatrix& train, std::vector<std::size_t> k_grid,
                    CvScheme scheme, std::uint64_t seed) {
    std::size_t labeled = 0;
    for (int l : train.labels) {
        if (l >= 0) ++labeled;
    }
    if (labeled == 0) throw ConfigError("select_k needs labeled data");
    const std::size_t folds = scheme == CvScheme::Cv10 ? 10
                              : scheme == CvScheme::Cv5 ? 5
                                                        : labeled;

    // Stratified fold assignment: shuffle within each class, deal round-robin.
    std::vector<int> fold_of(train.n(), -1);
    if (scheme == CvScheme::Loo) {
        int f = 0;
        for (std::size_t i = 0; i < train.n(); ++i) {
            if (train.labels[i] >= 0) fold_of[i] = f++;
        }
    } else {
        auto gen = rng::stream(seed, 0x6376ULL);
        for (std::size_t c = 0; c < train.n_classes(); ++c) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < train.n(); ++i) {
                if (train.labels[i] == static_cast<int>(c)) idx.push_back(i);
            }
            if (idx.empty()) continue;
            if (idx.size() < folds) {
                throw ConfigError("class '" + train.class_names[c] +
                                  "' has fewer rows than folds");
            }
            std::shuffle(idx.begin(), idx.end(), gen);
            for (std::size_t j = 0; j < idx.size(); ++j) {
                fold_of[idx[j]] = static_cast<int>(j % folds);
            }
        }
    }

    KSelection sel{0, {}};
    double best_acc = -1.0;
    for (std::size_t k : k_grid) {
        std::size_t correct = 0, seen = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            FeatureMatrix fit;
            fit.class_names = train.class_names;
            for (std::size_t i = 0; i < train.n(); ++i) {
                if (fold_of[i] >= 0 && static_cast<std::size_t>(fold_of[i]) != f) {
                    fit.points.push_back(train.points[i]);
                    fit.labels.push_back(train.labels[i]);
                }
            }
            if (fit.n() < k) continue;
            for (std::size_t i = 0; i < train.n(); ++i) {
                if (fold_of[i] < 0 || static_cast<std::size_t>(fold_of[i]) != f) continue;
                ++seen;
                if (knn_predict(fit, k, train.points[i]) == train.labels[i]) ++correct;
            }
        }
        const double acc = seen == 0 ? 0.0 : static_cast<double>(correct) /
                                                 static_cast<double>(seen);
        sel.accuracy.emplace_back(k, acc);
        if (acc > best_acc) {  // strict: ties keep the smallest k
            best_acc = acc;
            sel.best_k = k;
        }
    }
    return sel;
}

std::size_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

double ConfusionMatrix::accuracy() const {
    std::size_t diag = 0;
    for (std::size_t c = 0; c < n_classes; ++c) diag += at(c, c);
    const std::size_t t = total();
    return t == 0 ? 0.0 : static_cast<double>(diag) / static_cast<double>(t);
}

double ConfusionMatrix::ppv(std::size_t cls) const {
    std::size_t row = 0;
    for (std::size_t a = 0; a < n_classes; ++a) row += at(cls, a);
    return row == 0 ? 0.0 : static_cast<double>(at(cls, cls)) / static_cast<double>(row);
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm) {
    out << "predicted\\actual";
    for (const auto& name : cm.class_names) out << ',' << name;
    out << '\n';
    for (std::size_t p = 0; p < cm.n_classes; ++p) {
        out << cm.class_names[p];
        for (std::size_t a = 0; a < cm.n_classes; ++a) out << ',' << cm.at(p, a);
        out << '\n';
    }
}

}  // namespace expclass
