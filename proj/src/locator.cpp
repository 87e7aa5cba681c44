#include "wifipos/locator.hpp"

#include <cmath>
#include <limits>

namespace wifipos {

namespace {

double reading_or_floor(const QueryVector& query, const ApId& ap, double floor_dbm) {
    auto it = query.readings.find(ap);
    return it == query.readings.end() ? floor_dbm : it->second;
}

} // namespace

double euclidean_distance(const QueryVector& query, const std::map<ApId, double>& fingerprint,
                          std::span<const ApId> axis, double floor_dbm) {
    if (axis.empty())
        throw Error("cannot compute a distance over an empty AP axis");
    double sum = 0.0;
    for (const ApId& ap : axis) {
        const double q = reading_or_floor(query, ap, floor_dbm);
        auto it = fingerprint.find(ap);
        const double f =
            (it == fingerprint.end() || std::isnan(it->second)) ? floor_dbm : it->second;
        const double d = q - f;
        sum += d * d;
    }
    return std::sqrt(sum);
}

std::vector<ApId> apply_ap_filter(std::span<const ApId> axis, const QueryVector& query,
                                  const ApFilter& filter, double floor_dbm) {
    filter.validate();
    std::vector<ApId> kept;
    kept.reserve(axis.size());
    for (const ApId& ap : axis) {
        if (filter.include && !filter.include->contains(ap))
            continue;
        const double rssi = reading_or_floor(query, ap, floor_dbm);
        if (filter.rssi_min && rssi < *filter.rssi_min)
            continue; // too far away to be useful
        if (filter.rssi_max && rssi > *filter.rssi_max)
            continue; // too close, biases the match
        kept.push_back(ap);
    }
    if (kept.empty())
        throw Error("no usable APs after filtering");
    return kept;
}

PositionEstimate locate(const QueryVector& query, const StatTable& table, Technique t,
                        const std::optional<ApFilter>& filter, LocateStats* stats) {
    if (query.readings.empty())
        throw Error("query vector is empty");
    if (table.aps.empty())
        throw Error("stat table has no APs");
    table.grid.validate();

    const Eigen::MatrixXd& fingerprints = table.matrix(t);
    if (fingerprints.array().isNaN().all())
        throw Error("technique " + technique_name(t) + " has no values anywhere in the table");

    const std::vector<ApId> axis =
        filter ? apply_ap_filter(table.aps, query, *filter, table.floor_dbm)
               : table.aps;

    // Column indices of the (possibly reduced) axis within the table axis.
    std::vector<Eigen::Index> columns;
    columns.reserve(axis.size());
    {
        std::size_t j = 0;
        for (std::size_t i = 0; i < table.aps.size() && j < axis.size(); ++i)
            if (table.aps[i] == axis[j]) {
                columns.push_back(static_cast<Eigen::Index>(i));
                ++j;
            }
    }

    Eigen::VectorXd q(static_cast<Eigen::Index>(axis.size()));
    for (std::size_t j = 0; j < axis.size(); ++j)
        q[static_cast<Eigen::Index>(j)] = reading_or_floor(query, axis[j], table.floor_dbm);

    // One distance per grid point; raw sample counts never enter this loop.
    double best_d2 = std::numeric_limits<double>::infinity();
    Eigen::Index best_point = 0;
    for (Eigen::Index p = 0; p < fingerprints.rows(); ++p) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < columns.size(); ++j) {
            double f = fingerprints(p, columns[j]);
            if (std::isnan(f))
                f = table.floor_dbm;
            const double d = q[static_cast<Eigen::Index>(j)] - f;
            d2 += d * d;
        }
        if (stats)
            ++stats->distance_evaluations;
        if (d2 < best_d2) { // strict: ties keep the lexicographically least point
            best_d2 = d2;
            best_point = p;
        }
    }
    return PositionEstimate{point_at(table.grid, static_cast<int>(best_point)),
                            std::sqrt(best_d2), t};
}

std::map<Technique, PositionEstimate> locate_all(const QueryVector& query, const StatTable& table,
                                                 const std::optional<ApFilter>& filter,
                                                 LocateStats* stats) {
    std::map<Technique, PositionEstimate> estimates;
    for (Technique t : all_techniques())
        estimates.emplace(t, locate(query, table, t, filter, stats));
    return estimates;
}

} // namespace wifipos
