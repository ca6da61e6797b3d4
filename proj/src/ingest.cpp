#include "expclass/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "expclass/errors.hpp"
#include "expclass/metrics.hpp"

namespace expclass {

namespace {

double parse_double(const std::string& token, long line) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("not a number: '" + token + "'", line);
    }
    return value;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        std::string field = line.substr(start, comma - start);
        // trim spaces and a trailing CR
        while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        out.push_back(field);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

EventSeries parse_events(std::istream& in, const std::string& source_id) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty events file", 1);
    ++line_no;
    auto header = split_csv(line);
    if (header.size() != 2 || header[0] != "time_s" || header[1] != "energy_kev") {
        throw ParseError("expected header 'time_s,energy_kev'", line_no);
    }

    std::vector<std::pair<double, double>> events;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv(line);
        if (fields.size() != 2) throw ParseError("expected 2 fields", line_no);
        double t = parse_double(fields[0], line_no);
        double e = parse_double(fields[1], line_no);
        if (!(e > 0.0)) throw ParseError("energy must be > 0", line_no);
        if (!std::isfinite(t)) throw ParseError("non-finite time", line_no);
        events.emplace_back(t, e);
    }
    if (events.empty()) throw EmptyDataError("no events in input");

    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    EventSeries series;
    series.source_id = source_id;
    for (const auto& [t, e] : events) {
        if (!series.arrivals.empty() && t == series.arrivals.back()) continue;  // dedup ties
        series.arrivals.push_back(t);
        series.energies.push_back(e);
    }
    series.good_intervals = {{series.arrivals.front(), series.arrivals.back()}};
    return series;
}

EventSeries parse_events_file(const std::string& path, const std::string& source_id) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_events(in, source_id);
}

std::vector<std::pair<double, double>> parse_gaps(std::istream& in) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty gaps file", 1);
    ++line_no;
    auto header = split_csv(line);
    if (header.size() != 2 || header[0] != "gap_start_s" || header[1] != "gap_end_s") {
        throw ParseError("expected header 'gap_start_s,gap_end_s'", line_no);
    }
    std::vector<std::pair<double, double>> gaps;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv(line);
        if (fields.size() != 2) throw ParseError("expected 2 fields", line_no);
        double a = parse_double(fields[0], line_no);
        double b = parse_double(fields[1], line_no);
        if (!(b > a)) throw ParseError("gap end must exceed gap start", line_no);
        gaps.emplace_back(a, b);
    }
    std::sort(gaps.begin(), gaps.end());
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        if (gaps[i].first < gaps[i - 1].second) throw ParseError("overlapping gaps");
    }
    return gaps;
}

std::vector<std::pair<double, double>> parse_gaps_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_gaps(in);
}

void apply_gaps(EventSeries& series, const std::vector<std::pair<double, double>>& gaps) {
    if (gaps.empty() || series.arrivals.empty()) return;
    auto in_gap = [&](double t) {
        for (const auto& [a, b] : gaps) {
            if (t >= a && t < b) return true;
        }
        return false;
    };
    std::vector<double> arrivals, energies;
    for (std::size_t i = 0; i < series.arrivals.size(); ++i) {
        if (!in_gap(series.arrivals[i])) {
            arrivals.push_back(series.arrivals[i]);
            energies.push_back(series.energies[i]);
        }
    }
    series.arrivals = std::move(arrivals);
    series.energies = std::move(energies);
    if (series.arrivals.empty()) {
        series.good_intervals.clear();
        return;
    }
    // Complement of the gaps within the observation span.
    series.good_intervals.clear();
    double cursor = series.arrivals.front();
    const double last = series.arrivals.back();
    for (const auto& [a, b] : gaps) {
        if (b <= cursor || a > last) continue;
        if (a > cursor) series.good_intervals.emplace_back(cursor, a);
        cursor = std::max(cursor, b);
    }
    if (cursor <= last) series.good_intervals.emplace_back(cursor, last);
}

EventSeries filter_energy(EventSeries series, double lo, double hi) {
    if (!(lo < hi)) throw ConfigError("energy band requires lo < hi");
    std::vector<double> arrivals, energies;
    for (std::size_t i = 0; i < series.arrivals.size(); ++i) {
        if (series.energies[i] >= lo && series.energies[i] <= hi) {
            arrivals.push_back(series.arrivals[i]);
            energies.push_back(series.energies[i]);
        }
    }
    series.arrivals = std::move(arrivals);
    series.energies = std::move(energies);
    return series;
}

PitSample extract_pits(const EventSeries& series) {
    if (series.arrivals.size() < 2) throw EmptyDataError("need at least 2 events");
    auto interval_of = [&](double t) -> long {
        for (std::size_t i = 0; i < series.good_intervals.size(); ++i) {
            const auto& [a, b] = series.good_intervals[i];
            if (t >= a && t <= b) return static_cast<long>(i);
        }
        return -1;
    };
    std::vector<double> pits;
    long prev_interval = -1;
    double prev_t = 0.0;
    for (double t : series.arrivals) {
        const long iv = interval_of(t);
        if (iv >= 0 && iv == prev_interval) {
            const double d = t - prev_t;
            if (d > 0.0) pits.push_back(d);  // ties produce zero differences; drop
        }
        prev_interval = iv;
        prev_t = t;
    }
    if (pits.empty()) throw EmptyDataError("no same-interval consecutive pairs");
    return PitSample::from_values(std::move(pits));
}

std::optional<SourceFeatures> build_features(const EventSeries& series, std::size_t min_pit,
                                             std::size_t grid_points) {
    PitSample pits = extract_pits(series);
    if (pits.n() < min_pit) return std::nullopt;

    std::vector<double> energies = series.energies;
    std::sort(energies.begin(), energies.end());
    const std::size_t m = energies.size();
    const double med = (m % 2 == 1) ? energies[m / 2]
                                    : 0.5 * (energies[m / 2 - 1] + energies[m / 2]);

    SourceFeatures f;
    f.source_id = series.source_id;
    f.n_pit = pits.n();
    f.med_energy_kev = med;
    f.dist_kolmogorov = kolmogorov(pits).value;
    f.dist_norm_wasserstein = normalized(pits, Metric::NormWasserstein, grid_points).value;
    f.dist_norm_zolotarev2 = normalized(pits, Metric::NormZolotarev2, grid_points).value;
    return f;
}

void write_features_csv(std::ostream& out, const std::vector<SourceFeatures>& rows) {
    out << "source_id,n_pit,med_energy_kev,kappa,nw,nz2,label\n";
    out << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.source_id << ',' << r.n_pit << ',' << r.med_energy_kev << ','
            << r.dist_kolmogorov << ',' << r.dist_norm_wasserstein << ','
            << r.dist_norm_zolotarev2 << ',' << r.class_label.value_or("") << '\n';
    }
}

std::vector<SourceFeatures> read_features_csv(std::istream& in) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty features file", 1);
    ++line_no;
    auto header = split_csv(line);
    const std::vector<std::string> expected{"source_id", "n_pit",  "med_energy_kev", "kappa",
                                            "nw",        "nz2",    "label"};
    if (std::vector<std::string>(header.begin(), header.end()) != expected) {
        throw ParseError("unexpected features header", line_no);
    }
    std::vector<SourceFeatures> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != 7) throw ParseError("expected 7 fields", line_no);
        SourceFeatures r;
        r.source_id = f[0];
        r.n_pit = static_cast<std::size_t>(parse_double(f[1], line_no));
        r.med_energy_kev = parse_double(f[2], line_no);
        r.dist_kolmogorov = parse_double(f[3], line_no);
        r.dist_norm_wasserstein = parse_double(f[4], line_no);
        r.dist_norm_zolotarev2 = parse_double(f[5], line_no);
        if (!f[6].empty()) r.class_label = f[6];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace expclass
