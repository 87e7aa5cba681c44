#pragma once

// Shared fixtures for the test suites: deterministic random surveys, the
// three-corner benchmark environment, naive reference implementations of the
// statistics, and a self-cleaning temp directory.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "wifipos/radiomap.hpp"
#include "wifipos/stats.hpp"
#include "wifipos/synth.hpp"

namespace testutil {

using namespace wifipos;

// Random survey covering the full grid: every (point, ap) gets 1..max_samples
// integer readings in [floor, 0].
inline std::vector<SurveyRecord> random_records(std::mt19937& rng, const GridSpec& grid,
                                                const std::vector<ApId>& aps, int max_samples,
                                                double floor_dbm = kDefaultFloorDbm) {
    std::uniform_int_distribution<int> rssi(static_cast<int>(floor_dbm), 0);
    std::uniform_int_distribution<int> lq(0, 100);
    std::uniform_int_distribution<int> count(1, max_samples);
    std::vector<SurveyRecord> records;
    for (int idx = 0; idx < grid.point_count(); ++idx) {
        const GridPoint p = point_at(grid, idx);
        for (const ApId& ap : aps) {
            const int n = count(rng);
            for (int k = 0; k < n; ++k)
                records.push_back({p, ap, {rssi(rng), lq(rng)}, k});
        }
    }
    return records;
}

// The benchmark environment used throughout: 6x6 grid, 1 m cells, three
// corner APs. With sigma = 0 every cell has a distinct rounded fingerprint.
inline SynthEnv corner_env(double sigma_db = 0.0, std::uint64_t seed = 20260814) {
    SynthEnv env;
    env.grid = GridSpec{6, 6, 1.0};
    env.aps = {SynthAp{"ap-ne", 5.5, 0.5, -40.0, 2.5},
               SynthAp{"ap-nw", 0.5, 0.5, -40.0, 2.5},
               SynthAp{"ap-sw", 0.5, 5.5, -40.0, 2.5}};
    env.sigma_db = sigma_db;
    env.floor_dbm = kDefaultFloorDbm;
    env.seed = seed;
    return env;
}

// Noiseless per-AP readings at a point, matching what sigma = 0 generation
// would survey there.
inline QueryVector noiseless_query(const SynthEnv& env, GridPoint p) {
    QueryVector q;
    for (const SynthAp& ap : env.aps)
        q.readings[ap.id] = std::round(expected_rssi(env, ap, p));
    return q;
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("wifipos-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

// Naive reference statistics, written independently of the library: linear
// scans and explicit loops only.
namespace oracle {

inline std::vector<double> ascending(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

inline double percentile(const std::vector<double>& values, double p) {
    const auto v = ascending(values);
    if (v.size() == 1)
        return v[0];
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double mode(const std::vector<double>& v) {
    double best = v.front();
    long best_n = 0;
    for (double cand : v) {
        const long n = std::count(v.begin(), v.end(), cand);
        if (n > best_n || (n == best_n && cand > best)) {
            best = cand;
            best_n = n;
        }
    }
    return best;
}

inline std::vector<double> iq_filter(const std::vector<double>& v) {
    const double q1 = percentile(v, 0.25);
    const double q3 = percentile(v, 0.75);
    std::vector<double> kept;
    for (double x : ascending(v))
        if (x >= q1 && x <= q3)
            kept.push_back(x);
    return kept.empty() ? ascending(v) : kept;
}

inline double summarize(const std::vector<double>& v, Technique t) {
    switch (t) {
    case Technique::Maximum:
        return *std::max_element(v.begin(), v.end());
    case Technique::Minimum:
        return *std::min_element(v.begin(), v.end());
    case Technique::Mode:
        return mode(v);
    case Technique::Average: {
        double sum = 0.0;
        for (double x : v)
            sum += x;
        return sum / static_cast<double>(v.size());
    }
    case Technique::MeanValue:
        return (*std::max_element(v.begin(), v.end()) +
                *std::min_element(v.begin(), v.end())) /
               2.0;
    case Technique::QuartilesMode:
        return oracle::summarize(iq_filter(v), Technique::Mode);
    case Technique::QuartilesAverage:
        return oracle::summarize(iq_filter(v), Technique::Average);
    case Technique::QuartilesMeanValue:
        return oracle::summarize(iq_filter(v), Technique::MeanValue);
    }
    std::abort();
}

} // namespace oracle

} // namespace testutil
