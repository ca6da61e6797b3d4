// expclass: distances from exponentiality for inter-event-time samples,
// with limit-law simulation, GOF testing, event ingestion, the convergence
// study, and (log MedEn, log distance) classification.

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "expclass/asymptotics.hpp"
#include "expclass/classify.hpp"
#include "expclass/distributions.hpp"
#include "expclass/errors.hpp"
#include "expclass/ingest.hpp"
#include "expclass/metrics.hpp"
#include "expclass/simstudy.hpp"

namespace ec = expclass;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// All writers funnel through here so output is byte-identical run to run.
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw ec::ConfigError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void metadata(std::ostream& out, const std::string& command, const std::string& config,
              std::optional<std::uint64_t> seed = std::nullopt) {
    out << "# expclass " << kVersion << "\n";
    out << "# command: " << command << "\n";
    if (seed) out << "# seed: " << *seed << "\n";
    out << "# config: " << config << "\n";
}

// One-column PIT file: one positive value per line, no header.
ec::PitSample read_pit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ec::ParseError("cannot open input file: " + path);
    std::vector<double> values;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t a = line.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t");
        double v = 0.0;
        auto [p, err] = std::from_chars(line.data() + a, line.data() + b + 1, v);
        if (err != std::errc{} || p != line.data() + b + 1)
            throw ec::ParseError("bad PIT value '" + line + "'", lineno);
        values.push_back(v);
    }
    if (values.empty()) throw ec::EmptyDataError("PIT file is empty: " + path);
    return ec::PitSample::from_values(std::move(values));
}

struct InputOpts {
    std::string input;
    bool pit = false;
    std::string gaps;
    std::string source_id;
    std::size_t min_pit = 100;
    double energy_lo = 0.5;
    double energy_hi = 8.0;
};

void add_input_opts(CLI::App* cmd, InputOpts& io) {
    cmd->add_option("input", io.input, "events CSV (time_s,energy_kev) or one-column PIT file")
        ->required();
    cmd->add_flag("--pit", io.pit, "treat input as a raw one-column PIT file");
    cmd->add_option("--gaps", io.gaps, "gaps CSV (gap_start_s,gap_end_s)");
    cmd->add_option("--source-id", io.source_id, "source identifier (default: file stem)");
    cmd->add_option("--min-pit", io.min_pit, "minimum PIT count for events input");
    cmd->add_option("--energy-lo", io.energy_lo, "lower energy cut, keV");
    cmd->add_option("--energy-hi", io.energy_hi, "upper energy cut, keV");
}

ec::PitSample load_sample(const InputOpts& io) {
    if (io.pit) return read_pit_file(io.input);
    std::string id =
        io.source_id.empty() ? std::filesystem::path(io.input).stem().string() : io.source_id;
    auto series = ec::parse_events_file(io.input, id);
    if (!io.gaps.empty()) ec::apply_gaps(series, ec::parse_gaps_file(io.gaps));
    series = ec::filter_energy(std::move(series), io.energy_lo, io.energy_hi);
    auto pits = ec::extract_pits(series);
    if (pits.n() < io.min_pit)
        throw ec::EmptyDataError("source '" + id + "' has " + std::to_string(pits.n()) +
                                 " PITs, below the minimum of " + std::to_string(io.min_pit));
    return pits;
}

ec::RefDistribution parse_ref(const std::string& name, double shape, double mu) {
    if (name == "exp") return ec::RefDistribution::exponential(mu);
    if (name == "weibull") return ec::RefDistribution::mean_one(ec::DistKind::Weibull, shape);
    if (name == "gamma") return ec::RefDistribution::mean_one(ec::DistKind::Gamma, shape);
    throw ec::ConfigError("unknown distribution '" + name + "' (exp, weibull, gamma)");
}

int cmd_dist(const InputOpts& io, std::size_t grid_points, const std::string& output) {
    auto sample = load_sample(io);
    Output out(output);
    std::ostringstream cfg;
    cfg << "input=" << io.input << " pit=" << (io.pit ? 1 : 0)
        << " grid_points=" << grid_points;
    metadata(out.stream(), "dist", cfg.str());
    out.stream() << "# n: " << sample.n() << "\n";
    out.stream() << "# mu_hat: " << fmt17(sample.mean_hat()) << "\n";
    out.stream() << "metric,value\n";
    for (ec::Metric m : {ec::Metric::Kolmogorov, ec::Metric::Wasserstein, ec::Metric::Zolotarev2,
                         ec::Metric::NormWasserstein, ec::Metric::NormZolotarev2}) {
        auto est = ec::compute_distance(sample, m, grid_points);
        out.stream() << ec::to_string(m) << "," << fmt17(est.value) << "\n";
    }
    return 0;
}

int cmd_gof(const InputOpts& io, const std::string& metric_name, double level,
            const std::string& method_name, std::size_t reps, std::uint64_t seed,
            std::size_t bridge_grid, std::size_t grid_points, const std::string& output) {
    auto sample = load_sample(io);
    auto metric = ec::metric_from_string(metric_name);
    auto method = ec::gof_method_from_string(method_name);
    ec::BridgeConfig bridge;
    bridge.grid_subintervals = bridge_grid;
    bridge.reps = reps;
    bridge.seed = seed;
    auto res = ec::gof_exponentiality(sample, metric, level, method, bridge, grid_points);

    json j;
    j["version"] = kVersion;
    j["command"] = "gof";
    j["seed"] = seed;
    j["config"] = {{"input", io.input},          {"metric", metric_name},
                   {"level", level},             {"method", method_name},
                   {"reps", reps},               {"bridge_grid", bridge_grid},
                   {"grid_points", grid_points}};
    j["n"] = sample.n();
    j["mu_hat"] = sample.mean_hat();
    j["statistic"] = res.statistic;
    j["p_value"] = res.p_value;
    j["reject"] = res.reject;
    Output out(output);
    out.stream() << j.dump(2) << "\n";
    return 0;
}

int cmd_limit(const std::string& metric_name, const std::string& dist_name, double shape,
              double mu, std::size_t reps, std::uint64_t seed, std::size_t bridge_grid,
              double horizon, const std::string& output) {
    auto metric = ec::metric_from_string(metric_name);
    auto ref = parse_ref(dist_name, shape, mu);
    ec::BridgeConfig bridge;
    bridge.horizon_T = horizon;
    bridge.grid_subintervals = bridge_grid;
    bridge.reps = reps;
    bridge.seed = seed;
    auto draws = ec::sample_delta_infinity(metric, ref, bridge);

    Output out(output);
    std::ostringstream cfg;
    cfg << "metric=" << metric_name << " dist=" << ref.describe() << " reps=" << reps
        << " bridge_grid=" << bridge_grid;
    metadata(out.stream(), "limit", cfg.str(), seed);
    out.stream() << "replicate,value\n";
    for (std::size_t r = 0; r < draws.reps(); ++r)
        out.stream() << r << "," << fmt17(draws.draws[r]) << "\n";
    return 0;
}

int cmd_simstudy(std::size_t replicates, std::uint64_t seed, const std::string& sizes_str,
                 const std::string& metrics_str, std::size_t grid_points,
                 std::size_t bridge_grid, const std::string& output,
                 const std::string& summary) {
    ec::StudyConfig cfg;
    cfg.replicates = replicates;
    cfg.seed = seed;
    cfg.grid_points = grid_points;
    cfg.bridge.grid_subintervals = bridge_grid;
    if (!sizes_str.empty()) {
        cfg.sizes.clear();
        std::istringstream ss(sizes_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.sizes.push_back(std::stoul(tok));
        if (cfg.sizes.empty()) throw ec::ConfigError("--sizes parsed to an empty list");
    }
    if (!metrics_str.empty()) {
        cfg.metrics.clear();
        std::istringstream ss(metrics_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.metrics.push_back(ec::metric_from_string(tok));
    }
    auto rows = ec::run_study(cfg);

    Output out(output);
    std::ostringstream meta;
    meta << "replicates=" << replicates << " grid_points=" << grid_points
         << " bridge_grid=" << bridge_grid;
    metadata(out.stream(), "simstudy", meta.str(), seed);
    ec::write_study_csv(out.stream(), rows);
    if (!summary.empty()) {
        Output sum(summary);
        ec::write_summary_json(sum.stream(), ec::summarize(rows));
    }
    return 0;
}

int cmd_ingest(const InputOpts& io, std::size_t grid_points, const std::string& label,
               const std::string& output) {
    std::string id =
        io.source_id.empty() ? std::filesystem::path(io.input).stem().string() : io.source_id;
    auto series = ec::parse_events_file(io.input, id);
    if (!io.gaps.empty()) ec::apply_gaps(series, ec::parse_gaps_file(io.gaps));
    series = ec::filter_energy(std::move(series), io.energy_lo, io.energy_hi);
    auto feats = ec::build_features(series, io.min_pit, grid_points);
    if (!feats)
        throw ec::EmptyDataError("source '" + id + "' falls below the minimum of " +
                                 std::to_string(io.min_pit) + " PITs");
    if (!label.empty()) feats->class_label = label;
    Output out(output);
    ec::write_features_csv(out.stream(), {*feats});
    return 0;
}

struct LoadedFeatures {
    ec::FeatureMatrix matrix;
    std::vector<std::string> ids;
};

LoadedFeatures features_to_matrix(const std::vector<ec::SourceFeatures>& rows,
                                  const std::string& metric_name) {
    LoadedFeatures lf;
    lf.matrix.class_names = {"NM", "HO", "LO"};
    std::map<std::string, int> index{{"NM", 0}, {"HO", 1}, {"LO", 2}};
    for (const auto& r : rows) {
        double d = 0.0;
        if (metric_name == "kappa") d = r.dist_kolmogorov;
        else if (metric_name == "nw") d = r.dist_norm_wasserstein;
        else if (metric_name == "nz2") d = r.dist_norm_zolotarev2;
        else throw ec::ConfigError("classification metric must be kappa, nw or nz2");
        if (!(d > 0.0) || !(r.med_energy_kev > 0.0))
            throw ec::ParseError("source '" + r.source_id +
                                 "' has a non-positive feature; cannot take logs");
        lf.matrix.points.push_back({std::log(r.med_energy_kev), std::log(d)});
        int lab = -1;
        if (r.class_label) {
            auto it = index.find(*r.class_label);
            if (it == index.end()) {
                index[*r.class_label] = static_cast<int>(lf.matrix.class_names.size());
                lf.matrix.class_names.push_back(*r.class_label);
                it = index.find(*r.class_label);
            }
            lab = it->second;
        }
        lf.matrix.labels.push_back(lab);
        lf.ids.push_back(r.source_id);
    }
    return lf;
}

ec::FeatureMatrix labeled_subset(const ec::FeatureMatrix& all) {
    ec::FeatureMatrix out;
    out.class_names = all.class_names;
    for (std::size_t i = 0; i < all.n(); ++i) {
        if (all.labels[i] < 0) continue;
        out.points.push_back(all.points[i]);
        out.labels.push_back(all.labels[i]);
    }
    if (out.points.empty()) throw ec::EmptyDataError("no labeled rows in the feature table");
    return out;
}

int cmd_classify(const std::string& features_path, const std::string& metric_name,
                 const std::string& fit, double ridge, std::size_t k, bool do_select_k,
                 const std::string& cv_name, std::optional<std::uint64_t> seed,
                 const std::string& model_in, const std::string& model_out,
                 const std::string& confusion_out, const std::string& predict_out,
                 const std::string& output) {
    std::ifstream in(features_path);
    if (!in) throw ec::ParseError("cannot open features file: " + features_path);
    auto rows = ec::read_features_csv(in);
    if (rows.empty()) throw ec::EmptyDataError("feature table is empty: " + features_path);
    auto lf = features_to_matrix(rows, metric_name);
    auto train = labeled_subset(lf.matrix);

    json report;
    report["version"] = kVersion;
    report["command"] = "classify";
    report["config"] = {{"features", features_path}, {"metric", metric_name}, {"fit", fit}};

    if (do_select_k) {
        if (!seed) throw ec::ConfigError("--seed is required with --select-k");
        auto sel =
            ec::select_k(train, ec::default_k_grid(), ec::cv_scheme_from_string(cv_name), *seed);
        k = sel.best_k;
        report["seed"] = *seed;
        report["cv_scheme"] = cv_name;
        report["best_k"] = sel.best_k;
        json table = json::array();
        for (auto [kk, acc] : sel.accuracy) table.push_back({{"k", kk}, {"accuracy", acc}});
        report["k_accuracy"] = table;
    }

    std::optional<ec::QdaModel> qda;
    if (fit == "qda") {
        if (!model_in.empty()) {
            std::ifstream mj(model_in);
            if (!mj) throw ec::ParseError("cannot open model file: " + model_in);
            qda = ec::QdaModel::load_json(mj);
        } else {
            qda = ec::fit_qda(train, ridge);
        }
        if (!model_out.empty()) {
            Output mo(model_out);
            qda->save_json(mo.stream());
        }
    } else if (fit != "knn") {
        throw ec::ConfigError("--fit must be qda or knn");
    }

    auto predict = [&](const std::array<double, 2>& x) {
        return qda ? qda->predict(x) : ec::knn_predict(train, k, x);
    };
    auto cm = ec::evaluate(predict, lf.matrix);
    report["k"] = k;
    report["accuracy"] = cm.accuracy();
    json ppv = json::object();
    for (std::size_t c = 0; c < cm.n_classes; ++c) {
        bool seen = false;
        for (std::size_t a = 0; a < cm.n_classes; ++a)
            seen = seen || cm.at(c, a) > 0 || cm.at(a, c) > 0;
        if (seen) ppv[cm.class_names[c]] = cm.ppv(c);
    }
    report["ppv"] = ppv;
    if (!confusion_out.empty()) {
        Output co(confusion_out);
        ec::write_confusion_csv(co.stream(), cm);
    }
    if (!predict_out.empty()) {
        Output po(predict_out);
        po.stream() << "source_id,predicted";
        if (qda)
            for (const auto& name : qda->class_names()) po.stream() << ",post_" << name << "_pct";
        po.stream() << "\n";
        for (std::size_t i = 0; i < lf.matrix.n(); ++i) {
            const int pred = predict(lf.matrix.points[i]);
            po.stream() << lf.ids[i] << ","
                        << (qda ? qda->class_names() : lf.matrix.class_names)[
                               static_cast<std::size_t>(pred)];
            if (qda)
                for (double p : qda->posteriors(lf.matrix.points[i]))
                    po.stream() << "," << fmt17(100.0 * p);
            po.stream() << "\n";
        }
    }
    Output out(output);
    out.stream() << report.dump(2) << "\n";
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"distances of inter-event-time samples from the exponential family"};
    app.set_version_flag("--version", std::string("expclass ") + kVersion);
    app.require_subcommand(1);

    // dist
    auto* dist = app.add_subcommand("dist", "all five distance estimates for one sample");
    InputOpts dist_io;
    add_input_opts(dist, dist_io);
    std::size_t dist_grid = 20000;
    std::string dist_out;
    dist->add_option("--grid-points", dist_grid, "quadrature grid points");
    dist->add_option("--output", dist_out, "output path (default stdout)");

    // gof
    auto* gof = app.add_subcommand("gof", "test of exponentiality");
    InputOpts gof_io;
    add_input_opts(gof, gof_io);
    std::string gof_metric = "nz2", gof_method = "asymptotic", gof_out;
    double gof_level = 0.05;
    std::size_t gof_reps = 10000, gof_bridge = 50000, gof_grid = 20000;
    std::uint64_t gof_seed = 0;
    gof->add_option("--metric", gof_metric, "nw or nz2");
    gof->add_option("--level", gof_level, "test level");
    gof->add_option("--method", gof_method, "asymptotic or bootstrap");
    gof->add_option("--reps", gof_reps, "null-law draws / bootstrap resamples");
    gof->add_option("--seed", gof_seed, "RNG seed")->required();
    gof->add_option("--bridge-grid", gof_bridge, "bridge grid subintervals");
    gof->add_option("--grid-points", gof_grid, "quadrature grid points");
    gof->add_option("--output", gof_out, "output path (default stdout)");

    // limit
    auto* limit = app.add_subcommand("limit", "simulate the limit law of an estimator");
    std::string lim_metric, lim_dist = "exp", lim_out;
    double lim_shape = 1.0, lim_mu = 1.0, lim_horizon = 0.0;
    std::size_t lim_reps = 10000, lim_bridge = 50000;
    std::uint64_t lim_seed = 0;
    limit->add_option("--metric", lim_metric, "w, z2, nw or nz2")->required();
    limit->add_option("--dist", lim_dist, "exp, weibull or gamma");
    limit->add_option("--shape", lim_shape, "shape for weibull/gamma (unit mean)");
    limit->add_option("--mu", lim_mu, "mean for exp");
    limit->add_option("--reps", lim_reps, "number of draws");
    limit->add_option("--seed", lim_seed, "RNG seed")->required();
    limit->add_option("--bridge-grid", lim_bridge, "bridge grid subintervals");
    limit->add_option("--horizon", lim_horizon, "integration horizon (0 = auto)");
    limit->add_option("--output", lim_out, "output path (default stdout)");

    // simstudy
    auto* study = app.add_subcommand("simstudy", "convergence study of delta_n vs delta_infinity");
    std::size_t st_reps = 10000, st_grid = 20000, st_bridge = 50000;
    std::uint64_t st_seed = 0;
    std::string st_sizes, st_metrics, st_out, st_summary;
    study->add_option("--replicates", st_reps, "replicates per cell");
    study->add_option("--seed", st_seed, "RNG seed")->required();
    study->add_option("--sizes", st_sizes, "comma list of sample sizes");
    study->add_option("--metrics", st_metrics, "comma list of metrics (default nw,nz2)");
    study->add_option("--grid-points", st_grid, "quadrature grid points");
    study->add_option("--bridge-grid", st_bridge, "bridge grid subintervals");
    study->add_option("--output", st_out, "long CSV output path (default stdout)");
    study->add_option("--summary", st_summary, "boxplot summary JSON path");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "events CSV -> one-source feature row");
    InputOpts ing_io;
    add_input_opts(ingest, ing_io);
    ingest->get_option("--pit")->group("");  // not applicable; hidden
    std::size_t ing_grid = 20000;
    std::string ing_label, ing_out;
    ingest->add_option("--grid-points", ing_grid, "quadrature grid points");
    ingest->add_option("--label", ing_label, "class label to attach (NM, HO, LO)");
    ingest->add_option("--output", ing_out, "features CSV path (default stdout)");

    // classify
    auto* classify = app.add_subcommand("classify", "QDA / k-NN on (log MedEn, log distance)");
    std::string cl_features, cl_metric = "nz2", cl_fit = "qda", cl_cv = "cv10";
    std::string cl_model_in, cl_model_out, cl_confusion, cl_predict, cl_out;
    double cl_ridge = 0.0;
    std::size_t cl_k = 5;
    bool cl_select = false;
    std::uint64_t cl_seed_val = 0;
    classify->add_option("--features", cl_features, "features CSV")->required();
    classify->add_option("--metric", cl_metric, "distance feature: kappa, nw or nz2");
    classify->add_option("--fit", cl_fit, "qda or knn");
    classify->add_option("--ridge", cl_ridge, "ridge added to QDA covariances");
    classify->add_option("--k", cl_k, "k for k-NN");
    classify->add_flag("--select-k", cl_select, "pick k by cross-validation");
    classify->add_option("--cv", cl_cv, "cv10, cv5 or loo");
    auto* cl_seed_opt = classify->add_option("--seed", cl_seed_val, "RNG seed (CV folds)");
    classify->add_option("--model-in", cl_model_in, "load QDA model JSON instead of fitting");
    classify->add_option("--model-out", cl_model_out, "save QDA model JSON");
    classify->add_option("--confusion-out", cl_confusion, "confusion matrix CSV path");
    classify->add_option("--predict-out", cl_predict, "per-source predictions CSV path");
    classify->add_option("--output", cl_out, "report JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 4;  // bad flags are a config error
    }

    if (dist->parsed()) return cmd_dist(dist_io, dist_grid, dist_out);
    if (gof->parsed())
        return cmd_gof(gof_io, gof_metric, gof_level, gof_method, gof_reps, gof_seed, gof_bridge,
                       gof_grid, gof_out);
    if (limit->parsed())
        return cmd_limit(lim_metric, lim_dist, lim_shape, lim_mu, lim_reps, lim_seed, lim_bridge,
                         lim_horizon, lim_out);
    if (study->parsed())
        return cmd_simstudy(st_reps, st_seed, st_sizes, st_metrics, st_grid, st_bridge, st_out,
                            st_summary);
    if (ingest->parsed()) return cmd_ingest(ing_io, ing_grid, ing_label, ing_out);
    if (classify->parsed()) {
        std::optional<std::uint64_t> seed;
        if (cl_seed_opt->count() > 0) seed = cl_seed_val;
        return cmd_classify(cl_features, cl_metric, cl_fit, cl_ridge, cl_k, cl_select, cl_cv,
                            seed, cl_model_in, cl_model_out, cl_confusion, cl_predict, cl_out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ec::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ec::EmptyDataError& e) {
        std::cerr << "empty data: " << e.what() << "\n";
        return 3;
    } catch (const ec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
