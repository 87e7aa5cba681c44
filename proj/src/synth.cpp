#include "wifipos/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace wifipos {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent sub-stream seed per generation site, so output never depends on
// the order in which sites are visited.
std::uint64_t substream(std::uint64_t seed, std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t w : words)
        h = mix64(h ^ w);
    return h;
}

constexpr std::uint64_t kSurveyStream = 0x5u;
constexpr std::uint64_t kQueryStream = 0x9u;

int draw_rssi(const SynthEnv& env, double expected, std::mt19937_64& rng,
              std::normal_distribution<double>& gauss) {
    const double noise = env.sigma_db > 0.0 ? gauss(rng) : 0.0;
    const double value = std::clamp(std::round(expected + noise), env.floor_dbm, 0.0);
    return static_cast<int>(value);
}

} // namespace

void SynthEnv::validate() const {
    grid.validate();
    if (sigma_db < 0.0)
        throw Error("shadowing sigma must be non-negative");
    if (!(floor_dbm < 0.0))
        throw Error("floor_dbm must be negative");
    if (aps.empty())
        throw Error("environment has no APs");
    std::set<ApId> ids;
    for (const SynthAp& ap : aps) {
        if (ap.id.empty())
            throw Error("AP id must be non-empty");
        if (!ids.insert(ap.id).second)
            throw Error("duplicate AP id '" + ap.id + "'");
        if (!(ap.n > 0.0))
            throw Error("AP '" + ap.id + "': path-loss exponent must be positive");
        if (ap.p0_dbm > 0.0)
            throw Error("AP '" + ap.id + "': reference power must be <= 0 dBm");
        if (floor_dbm > ap.p0_dbm)
            throw Error("AP '" + ap.id + "': floor_dbm exceeds reference power");
    }
}

void cell_center(const GridSpec& grid, GridPoint p, double& x, double& y) {
    x = (p.col - 0.5) * grid.cell_size_m;
    y = (p.row - 0.5) * grid.cell_size_m;
}

double expected_rssi(const SynthEnv& env, const SynthAp& ap, GridPoint p) {
    if (!contains(env.grid, p))
        throw Error("point (" + to_string(p) + ") lies outside the grid");
    double x = 0.0, y = 0.0;
    cell_center(env.grid, p, x, y);
    // Distance floored at 1 m: below the reference distance the model reports p0.
    const double d = std::max(std::hypot(x - ap.x, y - ap.y), 1.0);
    const double rssi = ap.p0_dbm - 10.0 * ap.n * std::log10(d);
    return std::max(rssi, env.floor_dbm);
}

int lq_from_rssi(int rssi_dbm, double floor_dbm) {
    const double lq = (rssi_dbm - floor_dbm) * 100.0 / (0.0 - floor_dbm);
    return static_cast<int>(std::clamp(std::round(lq), 0.0, 100.0));
}

std::vector<SurveyRecord> generate_survey(const SynthEnv& env, int samples_per_point) {
    env.validate();
    if (samples_per_point < 1)
        throw Error("samples_per_point must be at least 1");

    std::vector<SurveyRecord> records;
    records.reserve(static_cast<std::size_t>(env.grid.point_count()) * env.aps.size() *
                    static_cast<std::size_t>(samples_per_point));
    for (int idx = 0; idx < env.grid.point_count(); ++idx) {
        const GridPoint p = point_at(env.grid, idx);
        for (std::size_t a = 0; a < env.aps.size(); ++a) {
            const SynthAp& ap = env.aps[a];
            const double expected = expected_rssi(env, ap, p);
            std::mt19937_64 rng(substream(env.seed, {kSurveyStream,
                                                     static_cast<std::uint64_t>(p.row),
                                                     static_cast<std::uint64_t>(p.col), a}));
            std::normal_distribution<double> gauss(0.0, std::max(env.sigma_db, 1e-300));
            for (int s = 0; s < samples_per_point; ++s) {
                const int rssi = draw_rssi(env, expected, rng, gauss);
                records.push_back(
                    SurveyRecord{p, ap.id, RawSample{rssi, lq_from_rssi(rssi, env.floor_dbm)}, s});
            }
        }
    }
    return records;
}

std::vector<LabeledQuery> generate_queries(const SynthEnv& env,
                                           const std::vector<GridPoint>& truth_points,
                                           int per_point) {
    env.validate();
    if (per_point < 1)
        throw Error("per_point must be at least 1");

    std::vector<LabeledQuery> queries;
    queries.reserve(truth_points.size() * static_cast<std::size_t>(per_point));
    for (const GridPoint& p : truth_points) {
        if (!contains(env.grid, p))
            throw Error("truth point (" + to_string(p) + ") lies outside the grid");
        for (int k = 0; k < per_point; ++k) {
            std::mt19937_64 rng(substream(env.seed, {kQueryStream,
                                                     static_cast<std::uint64_t>(p.row),
                                                     static_cast<std::uint64_t>(p.col),
                                                     static_cast<std::uint64_t>(k)}));
            std::normal_distribution<double> gauss(0.0, std::max(env.sigma_db, 1e-300));
            QueryVector q;
            for (const SynthAp& ap : env.aps)
                q.readings[ap.id] = draw_rssi(env, expected_rssi(env, ap, p), rng, gauss);
            queries.push_back(LabeledQuery{p, std::move(q)});
        }
    }
    return queries;
}

namespace {

std::string trim(std::string s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front()))
        s.erase(s.begin());
    while (!s.empty() && is_space(s.back()))
        s.pop_back();
    return s;
}

[[noreturn]] void fail(const std::string& origin, int line_no, const std::string& msg) {
    throw ParseError(origin + ":" + std::to_string(line_no) + ": " + msg);
}

double parse_number(const std::string& origin, int line_no, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            fail(origin, line_no, "trailing characters after number '" + value + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(origin, line_no, "expected a number, got '" + value + "'");
    } catch (const std::out_of_range&) {
        fail(origin, line_no, "number out of range: '" + value + "'");
    }
}

std::string parse_string(const std::string& origin, int line_no, const std::string& value) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
        return value.substr(1, value.size() - 2);
    if (!value.empty() && value.find('"') == std::string::npos)
        return value; // bare token
    fail(origin, line_no, "malformed string value: " + value);
}

} // namespace

SynthEnv parse_env(std::istream& in, const std::string& origin) {
    SynthEnv env;
    bool in_ap = false;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line == "[[aps]]") {
            env.aps.emplace_back();
            in_ap = true;
            continue;
        }
        if (line.front() == '[')
            fail(origin, line_no, "unknown table '" + line + "' (only [[aps]] is supported)");

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(origin, line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            fail(origin, line_no, "expected 'key = value'");

        if (in_ap) {
            SynthAp& ap = env.aps.back();
            if (key == "id")
                ap.id = parse_string(origin, line_no, value);
            else if (key == "x")
                ap.x = parse_number(origin, line_no, value);
            else if (key == "y")
                ap.y = parse_number(origin, line_no, value);
            else if (key == "p0_dbm")
                ap.p0_dbm = parse_number(origin, line_no, value);
            else if (key == "n")
                ap.n = parse_number(origin, line_no, value);
            else
                fail(origin, line_no, "unknown AP key '" + key + "'");
        } else {
            if (key == "rows")
                env.grid.rows = static_cast<int>(parse_number(origin, line_no, value));
            else if (key == "cols")
                env.grid.cols = static_cast<int>(parse_number(origin, line_no, value));
            else if (key == "cell_m")
                env.grid.cell_size_m = parse_number(origin, line_no, value);
            else if (key == "sigma_db")
                env.sigma_db = parse_number(origin, line_no, value);
            else if (key == "floor_dbm")
                env.floor_dbm = parse_number(origin, line_no, value);
            else if (key == "seed")
                env.seed = static_cast<std::uint64_t>(parse_number(origin, line_no, value));
            else
                fail(origin, line_no, "unknown key '" + key + "'");
        }
    }
    env.validate();
    return env;
}

SynthEnv load_env(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open environment spec '" + path + "'");
    return parse_env(in, path);
}

} // namespace wifipos
