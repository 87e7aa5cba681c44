#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wifipos/radiomap.hpp"

namespace wifipos {

// The eight fingerprint summaries. Enum order matches the A..H labelling used
// in the error charts; the Quartiles* variants apply the base statistic to the
// inner-quartile restriction of the sample list.
enum class Technique : int {
    Maximum = 0,
    Minimum,
    Mode,
    QuartilesMode,
    Average,
    QuartilesAverage,
    MeanValue, // midrange, (max + min) / 2
    QuartilesMeanValue,
};

constexpr int kTechniqueCount = 8;

constexpr std::array<Technique, kTechniqueCount> all_techniques() {
    return {Technique::Maximum,          Technique::Minimum,
            Technique::Mode,             Technique::QuartilesMode,
            Technique::Average,          Technique::QuartilesAverage,
            Technique::MeanValue,        Technique::QuartilesMeanValue};
}

// Kebab-case spelling used by the CLI and report files, e.g. "quartiles-average".
std::string technique_name(Technique t);
std::optional<Technique> parse_technique(const std::string& name);

struct QuartileBounds {
    double q1 = 0.0;
    double q3 = 0.0;
};

namespace detail {

double mode_impl(Eigen::VectorXd samples);
QuartileBounds quartile_bounds_impl(Eigen::VectorXd samples);
Eigen::VectorXd inner_quartile_filter_impl(Eigen::VectorXd samples);
double summarize_impl(Eigen::VectorXd samples, Technique t);
double percentile_impl(Eigen::VectorXd values, double p);

template <typename Derived>
Eigen::VectorXd materialize(const Eigen::MatrixBase<Derived>& samples) {
    Eigen::VectorXd v(samples.size());
    for (Eigen::Index i = 0; i < samples.size(); ++i)
        v[i] = static_cast<double>(samples.derived().reshaped()[i]);
    return v;
}

} // namespace detail

// Most frequent value; frequency ties resolve to the strongest (numerically
// greatest) tied value.
template <typename Derived>
double mode(const Eigen::MatrixBase<Derived>& samples) {
    return detail::mode_impl(detail::materialize(samples));
}

// (Q1, Q3) by linear interpolation at fractional ranks 0.25*(n-1) and
// 0.75*(n-1) over the ascending-sorted samples.
template <typename Derived>
QuartileBounds quartile_bounds(const Eigen::MatrixBase<Derived>& samples) {
    return detail::quartile_bounds_impl(detail::materialize(samples));
}

// Ascending-sorted sublist of samples with q1 <= v <= q3. Falls back to the
// full (sorted) list when no sample lands inside the bounds, which can happen
// for two-point lists.
template <typename Derived>
Eigen::VectorXd inner_quartile_filter(const Eigen::MatrixBase<Derived>& samples) {
    return detail::inner_quartile_filter_impl(detail::materialize(samples));
}

template <typename Derived>
double summarize(const Eigen::MatrixBase<Derived>& samples, Technique t) {
    return detail::summarize_impl(detail::materialize(samples), t);
}

// Interpolated percentile (same rank rule as quartile_bounds), p in [0, 1].
template <typename Derived>
double percentile(const Eigen::MatrixBase<Derived>& values, double p) {
    return detail::percentile_impl(detail::materialize(values), p);
}

double mode(const std::vector<double>& samples);
QuartileBounds quartile_bounds(const std::vector<double>& samples);
double summarize(const std::vector<double>& samples, Technique t);
double percentile(const std::vector<double>& values, double p);

// Pre-computed fingerprints: one (points x APs) matrix per technique, NaN for
// (point, ap) cells with no samples. Row index is the row-major point index.
struct StatTable {
    GridSpec grid;
    std::vector<ApId> aps; // canonical axis, lexicographically sorted
    double floor_dbm = kDefaultFloorDbm;
    std::array<Eigen::MatrixXd, kTechniqueCount> values;

    const Eigen::MatrixXd& matrix(Technique t) const {
        return values[static_cast<int>(t)];
    }
    Eigen::MatrixXd& matrix(Technique t) { return values[static_cast<int>(t)]; }
};

bool stat_tables_equal(const StatTable& a, const StatTable& b);

// Offline pre-computation pass. Walks the by-AP structure and fills all eight
// matrices; afterwards a locate costs one distance per grid point regardless
// of how many raw samples were surveyed.
StatTable precompute(const RadioMap& map);

} // namespace wifipos
