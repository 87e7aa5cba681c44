#include "wifipos/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace wifipos {

std::string technique_name(Technique t) {
    switch (t) {
    case Technique::Maximum: return "maximum";
    case Technique::Minimum: return "minimum";
    case Technique::Mode: return "mode";
    case Technique::QuartilesMode: return "quartiles-mode";
    case Technique::Average: return "average";
    case Technique::QuartilesAverage: return "quartiles-average";
    case Technique::MeanValue: return "mean-value";
    case Technique::QuartilesMeanValue: return "quartiles-mean-value";
    }
    throw Error("unknown technique");
}

std::optional<Technique> parse_technique(const std::string& name) {
    for (Technique t : all_techniques())
        if (technique_name(t) == name)
            return t;
    return std::nullopt;
}

namespace detail {

namespace {

void require_nonempty(const Eigen::VectorXd& samples, const char* op) {
    if (samples.size() == 0)
        throw Error(std::string(op) + " requires a non-empty sample list");
}

Eigen::VectorXd sorted_ascending(Eigen::VectorXd v) {
    std::sort(v.data(), v.data() + v.size());
    return v;
}

// Linear interpolation at fractional rank p*(n-1) over an ascending list.
double interpolate_rank(const Eigen::VectorXd& sorted, double p) {
    const Eigen::Index n = sorted.size();
    if (n == 1)
        return sorted[0];
    const double rank = p * static_cast<double>(n - 1);
    const auto lo = static_cast<Eigen::Index>(std::floor(rank));
    const auto hi = std::min(lo + 1, n - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

double mode_impl(Eigen::VectorXd samples) {
    require_nonempty(samples, "mode");
    std::map<double, int> counts;
    for (Eigen::Index i = 0; i < samples.size(); ++i)
        ++counts[samples[i]];
    double best = counts.begin()->first;
    int best_count = 0;
    for (const auto& [value, count] : counts) {
        if (count >= best_count) { // ties resolve to the strongest value
            best = value;
            best_count = count;
        }
    }
    return best;
}

QuartileBounds quartile_bounds_impl(Eigen::VectorXd samples) {
    require_nonempty(samples, "quartile_bounds");
    const Eigen::VectorXd sorted = sorted_ascending(std::move(samples));
    return QuartileBounds{interpolate_rank(sorted, 0.25), interpolate_rank(sorted, 0.75)};
}

Eigen::VectorXd inner_quartile_filter_impl(Eigen::VectorXd samples) {
    require_nonempty(samples, "inner_quartile_filter");
    const Eigen::VectorXd sorted = sorted_ascending(std::move(samples));
    const QuartileBounds q{interpolate_rank(sorted, 0.25), interpolate_rank(sorted, 0.75)};

    std::vector<double> kept;
    kept.reserve(static_cast<std::size_t>(sorted.size()));
    for (Eigen::Index i = 0; i < sorted.size(); ++i)
        if (sorted[i] >= q.q1 && sorted[i] <= q.q3)
            kept.push_back(sorted[i]);
    if (kept.empty())
        return sorted; // degenerate spread (possible for n = 2): keep everything
    return Eigen::Map<const Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
}

double summarize_impl(Eigen::VectorXd samples, Technique t) {
    require_nonempty(samples, "summarize");
    switch (t) {
    case Technique::Maximum:
        return samples.maxCoeff();
    case Technique::Minimum:
        return samples.minCoeff();
    case Technique::Mode:
        return mode_impl(std::move(samples));
    case Technique::Average:
        return samples.mean();
    case Technique::MeanValue:
        return (samples.maxCoeff() + samples.minCoeff()) / 2.0;
    case Technique::QuartilesMode:
        return mode_impl(inner_quartile_filter_impl(std::move(samples)));
    case Technique::QuartilesAverage:
        return inner_quartile_filter_impl(std::move(samples)).mean();
    case Technique::QuartilesMeanValue: {
        const Eigen::VectorXd kept = inner_quartile_filter_impl(std::move(samples));
        return (kept.maxCoeff() + kept.minCoeff()) / 2.0;
    }
    }
    throw Error("unknown technique");
}

double percentile_impl(Eigen::VectorXd values, double p) {
    require_nonempty(values, "percentile");
    if (p < 0.0 || p > 1.0)
        throw Error("percentile fraction must lie in [0, 1]");
    return interpolate_rank(sorted_ascending(std::move(values)), p);
}

} // namespace detail

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace

double mode(const std::vector<double>& samples) { return detail::mode_impl(to_vector(samples)); }

QuartileBounds quartile_bounds(const std::vector<double>& samples) {
    return detail::quartile_bounds_impl(to_vector(samples));
}

double summarize(const std::vector<double>& samples, Technique t) {
    return detail::summarize_impl(to_vector(samples), t);
}

double percentile(const std::vector<double>& values, double p) {
    return detail::percentile_impl(to_vector(values), p);
}

bool stat_tables_equal(const StatTable& a, const StatTable& b) {
    if (a.grid != b.grid || a.aps != b.aps || a.floor_dbm != b.floor_dbm)
        return false;
    for (int t = 0; t < kTechniqueCount; ++t) {
        const auto& ma = a.values[t];
        const auto& mb = b.values[t];
        if (ma.rows() != mb.rows() || ma.cols() != mb.cols())
            return false;
        const auto equal_or_both_nan =
            (ma.array() == mb.array()) || (ma.array().isNaN() && mb.array().isNaN());
        if (!equal_or_both_nan.all())
            return false;
    }
    return true;
}

StatTable precompute(const RadioMap& map) {
    StatTable table;
    table.grid = map.grid;
    table.aps = visible_aps(map);
    table.floor_dbm = map.floor_dbm;

    const auto points = static_cast<Eigen::Index>(map.grid.point_count());
    const auto n_aps = static_cast<Eigen::Index>(table.aps.size());
    for (auto& m : table.values)
        m = Eigen::MatrixXd::Constant(points, n_aps, std::numeric_limits<double>::quiet_NaN());

    // The by-AP view exists to make this pass a straight walk per AP column.
    Eigen::Index ap_idx = 0;
    for (const auto& [ap, point_samples] : map.by_ap) {
        for (const auto& [point, samples] : point_samples) {
            Eigen::VectorXd rssi(static_cast<Eigen::Index>(samples.size()));
            for (std::size_t i = 0; i < samples.size(); ++i)
                rssi[static_cast<Eigen::Index>(i)] = samples[i].rssi_dbm;
            const Eigen::Index row = point_index(map.grid, point);
            for (Technique t : all_techniques())
                table.matrix(t)(row, ap_idx) = detail::summarize_impl(rssi, t);
        }
        ++ap_idx;
    }
    return table;
}

} // namespace wifipos
