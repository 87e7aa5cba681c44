#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "wifipos/stats.hpp"

namespace wifipos {

// One scan from the device to be located: per-AP RSSI readings.
struct QueryVector {
    std::map<ApId, double> readings;

    bool operator==(const QueryVector&) const = default;
};

// Restricts which APs participate in matching. Bounds apply to the query-side
// RSSI: rssi_max excludes APs that are too close (too strong), rssi_min those
// too far away. APs absent from the query count as the floor sentinel.
struct ApFilter {
    std::optional<std::set<ApId>> include;
    std::optional<double> rssi_min;
    std::optional<double> rssi_max;

    void validate() const {
        if (rssi_min && rssi_max && *rssi_min > *rssi_max)
            throw Error("AP filter bounds are inverted: rssi_min > rssi_max");
    }
};

struct PositionEstimate {
    GridPoint point;
    double distance = 0.0; // Euclidean, in RSSI space
    Technique technique = Technique::Maximum;

    bool operator==(const PositionEstimate&) const = default;
};

// Instrumentation hook for the complexity contract: every fingerprint
// comparison increments distance_evaluations.
struct LocateStats {
    std::int64_t distance_evaluations = 0;
};

// Euclidean distance between a query and one point's per-AP fingerprint over
// the given axis. An AP missing from either side contributes the floor
// sentinel in its place.
double euclidean_distance(const QueryVector& query, const std::map<ApId, double>& fingerprint,
                          std::span<const ApId> axis, double floor_dbm);

// Axis restricted to APs passing the include set and whose query RSSI lies
// within [rssi_min, rssi_max]; order preserved. Throws when nothing survives.
std::vector<ApId> apply_ap_filter(std::span<const ApId> axis, const QueryVector& query,
                                  const ApFilter& filter, double floor_dbm);

// Nearest-neighbor match (k = 1): evaluates the query against every grid
// point's technique-t fingerprint and returns the argmin. Distance ties break
// to the lexicographically smallest (row, col).
PositionEstimate locate(const QueryVector& query, const StatTable& table, Technique t,
                        const std::optional<ApFilter>& filter = std::nullopt,
                        LocateStats* stats = nullptr);

std::map<Technique, PositionEstimate> locate_all(const QueryVector& query, const StatTable& table,
                                                 const std::optional<ApFilter>& filter = std::nullopt,
                                                 LocateStats* stats = nullptr);

} // namespace wifipos
