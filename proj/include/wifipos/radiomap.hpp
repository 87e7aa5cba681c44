#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wifipos/grid.hpp"

namespace wifipos {

// Opaque access-point identifier (BSSID or display name). Compared by exact
// byte equality.
using ApId = std::string;

constexpr double kDefaultFloorDbm = -100.0;

// One driver reading of one AP at one grid point.
struct RawSample {
    int rssi_dbm = 0;
    int lq = 0; // link quality percent, 0..100

    bool operator==(const RawSample&) const = default;
};

struct SurveyRecord {
    GridPoint point;
    ApId ap;
    RawSample sample;
    int seq = 0; // sample ordinal within the (point, ap) stream

    bool operator==(const SurveyRecord&) const = default;
};

// The survey database, materialized twice: once keyed by AP with the list of
// points where that AP was heard, and once as a point matrix whose cells hold
// the per-AP readings. Both views store the full sample lists in ingestion
// order; check_consistency() verifies they mirror each other.
struct RadioMap {
    GridSpec grid;
    double floor_dbm = kDefaultFloorDbm;

    std::map<ApId, std::map<GridPoint, std::vector<RawSample>>> by_ap;
    std::vector<std::map<ApId, std::vector<RawSample>>> by_point; // rows*cols cells

    const std::map<ApId, std::vector<RawSample>>& cell(GridPoint p) const {
        return by_point[point_index(grid, p)];
    }

    std::size_t total_samples() const;

    bool operator==(const RadioMap&) const = default;
};

// Parses survey CSV rows `row,col,ap_id,rssi_dbm,lq` (header optional).
// Sample ordinals are assigned per (point, ap) stream in file order.
// Throws ParseError naming the offending line; an input with no data rows is
// rejected with "no survey data".
std::vector<SurveyRecord> ingest_scans(std::istream& in, double floor_dbm = kDefaultFloorDbm);

void write_survey_csv(const std::vector<SurveyRecord>& records, std::ostream& out);

// Builds both storage structures from parsed records. Records must be
// non-empty and lie inside the grid; the mirror invariant holds by
// construction.
RadioMap build_radio_map(const std::vector<SurveyRecord>& records, const GridSpec& grid,
                         double floor_dbm = kDefaultFloorDbm);

struct ConsistencyMismatch {
    ApId ap;
    GridPoint point;
    std::size_t by_ap_count = 0;
    std::size_t by_point_count = 0;
};

struct ConsistencyReport {
    std::vector<ConsistencyMismatch> mismatches;
    std::size_t by_ap_total = 0;
    std::size_t by_point_total = 0;

    bool ok() const { return mismatches.empty() && by_ap_total == by_point_total; }
};

// Report-only audit of the dual store: lists every (ap, point) whose sample
// multiset differs between the two views.
ConsistencyReport check_consistency(const RadioMap& map);

// All APs present in the map, lexicographically sorted. This ordering is the
// canonical vector axis shared by the stat table and the locator.
std::vector<ApId> visible_aps(const RadioMap& map);

} // namespace wifipos
