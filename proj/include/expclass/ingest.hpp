#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expclass/pit_sample.hpp"

namespace expclass {

// One source's event list: photon arrival times with energies, plus the
// observation windows ("good intervals") left between declared gaps.
struct EventSeries {
    std::string source_id;
    std::vector<double> arrivals;  // seconds, strictly increasing
    std::vector<double> energies;  // keV, aligned with arrivals
    std::vector<std::pair<double, double>> good_intervals;  // [start, end], disjoint, ascending
};

struct SourceFeatures {
    std::string source_id;
    std::size_t n_pit;
    double med_energy_kev;
    double dist_kolmogorov;
    double dist_norm_wasserstein;
    double dist_norm_zolotarev2;
    std::optional<std::string> class_label;
};

// Reads `time_s,energy_kev` CSV. Rows are sorted by time and exact
// duplicate timestamps deduplicated (first kept). Throws ParseError with
// the offending line number on bad rows.
EventSeries parse_events(std::istream& in, const std::string& source_id);
EventSeries parse_events_file(const std::string& path, const std::string& source_id);

// Reads `gap_start_s,gap_end_s` CSV.
std::vector<std::pair<double, double>> parse_gaps(std::istream& in);
std::vector<std::pair<double, double>> parse_gaps_file(const std::string& path);

// Drops events inside a gap [start, end) and rebuilds good_intervals as the
// complement of the gaps within [first_arrival, last_arrival].
void apply_gaps(EventSeries& series, const std::vector<std::pair<double, double>>& gaps);

// Keeps events with lo <= energy <= hi (default: the 0.5-8 keV band).
EventSeries filter_energy(EventSeries series, double lo = 0.5, double hi = 8.0);

// Differences of consecutive arrivals lying in the same good interval.
// Gap-straddling pairs are discarded (not stitched) and zero differences
// from timestamp ties are dropped. Throws EmptyDataError when nothing
// remains.
PitSample extract_pits(const EventSeries& series);

// Full per-source feature record, or nothing when the source has fewer
// than min_pit interarrival times.
std::optional<SourceFeatures> build_features(const EventSeries& series,
                                             std::size_t min_pit = 100,
                                             std::size_t grid_points = 20000);

void write_features_csv(std::ostream& out, const std::vector<SourceFeatures>& rows);
std::vector<SourceFeatures> read_features_csv(std::istream& in);

}  // namespace expclass
