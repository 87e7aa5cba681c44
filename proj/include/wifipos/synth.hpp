#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wifipos/analysis.hpp"
#include "wifipos/radiomap.hpp"

namespace wifipos {

// Simulated transmitter: position in meters within the grid plane, reference
// power at 1 m and log-distance path-loss exponent.
struct SynthAp {
    ApId id;
    double x = 0.0;
    double y = 0.0;
    double p0_dbm = -40.0;
    double n = 2.0;
};

// Synthetic RF environment: a log-distance path-loss field with Gaussian
// shadowing, fully determined by the seed.
struct SynthEnv {
    GridSpec grid;
    std::vector<SynthAp> aps;
    double sigma_db = 0.0;
    double floor_dbm = kDefaultFloorDbm;
    std::uint64_t seed = 0;

    void validate() const;
};

// Center of a grid cell in meters: x grows with column, y with row.
void cell_center(const GridSpec& grid, GridPoint p, double& x, double& y);

// Noiseless RSSI at a cell center: p0 - 10*n*log10(max(d, 1 m)), clipped
// below at the floor.
double expected_rssi(const SynthEnv& env, const SynthAp& ap, GridPoint p);

// Draws samples_per_point readings per (point, ap): expected RSSI plus
// Gaussian(0, sigma) shadowing, rounded to integer dBm and clipped to
// [floor, 0]. LQ maps [floor, 0] linearly onto [0, 100]. Each (point, ap)
// pair owns an independent sub-stream, so generation order does not affect
// the output.
std::vector<SurveyRecord> generate_survey(const SynthEnv& env, int samples_per_point);

// One scan per (truth point, query index) drawn from the same noise model.
std::vector<LabeledQuery> generate_queries(const SynthEnv& env,
                                           const std::vector<GridPoint>& truth_points,
                                           int per_point);

int lq_from_rssi(int rssi_dbm, double floor_dbm);

// Reads the human-editable environment spec (TOML subset: comments,
// `key = value` pairs and [[aps]] tables).
SynthEnv load_env(const std::string& path);
SynthEnv parse_env(std::istream& in, const std::string& origin);

} // namespace wifipos
