#include "wifipos/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "wifipos/io.hpp"
#include "wifipos/synth.hpp"

namespace wifipos::cli {

namespace {

namespace fs = std::filesystem;

GridSpec parse_grid_arg(const std::string& grid, double cell_m) {
    const auto x = grid.find('x');
    GridSpec spec;
    spec.cell_size_m = cell_m;
    auto parse = [](const std::string& s, int& out) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
    };
    if (x == std::string::npos || !parse(grid.substr(0, x), spec.rows) ||
        !parse(grid.substr(x + 1), spec.cols))
        throw Error("--grid expects RxC (e.g. 6x6), got '" + grid + "'");
    spec.validate();
    return spec;
}

std::vector<GridPoint> all_points(const GridSpec& grid) {
    std::vector<GridPoint> points;
    points.reserve(static_cast<std::size_t>(grid.point_count()));
    for (int idx = 0; idx < grid.point_count(); ++idx)
        points.push_back(point_at(grid, idx));
    return points;
}

int report_error(std::ostream& err, const std::exception& e) {
    err << "wifipos: " << e.what() << '\n';
    return kExitRuntime;
}

ReportFormat parse_format(const std::string& format) {
    if (format == "csv")
        return ReportFormat::Csv;
    if (format == "jsonl")
        return ReportFormat::Jsonl;
    throw Error("--format must be csv or jsonl, got '" + format + "'");
}

std::string simulate_survey_csv(const SynthEnv& env, int samples_per_point) {
    const auto records = generate_survey(env, samples_per_point);
    std::ostringstream out;
    write_survey_csv(records, out);
    return out.str();
}

std::string simulate_queries_csv(const SynthEnv& env, int queries_per_point) {
    const auto queries = generate_queries(env, all_points(env.grid), queries_per_point);
    std::ostringstream out;
    write_labeled_queries(queries, out);
    return out.str();
}

WfpFile build_from_file(const std::string& scans_path, const GridSpec& grid, double floor_dbm) {
    std::ifstream in(scans_path);
    if (!in)
        throw Error("cannot open scans file '" + scans_path + "'");
    const auto records = ingest_scans(in, floor_dbm);
    WfpFile file;
    file.map = build_radio_map(records, grid, floor_dbm);
    file.table = precompute(file.map);
    return file;
}

} // namespace

int run_simulate(const SimulateOptions& opt, std::ostream& err) {
    try {
        if (opt.samples_per_point < 1)
            throw Error("--samples-per-point must be at least 1");
        if (opt.queries_per_point > 0 && opt.queries_out_path.empty())
            throw Error("--queries-per-point requires --queries-out");
        const SynthEnv env = load_env(opt.env_path);
        atomic_write_file(opt.out_path, simulate_survey_csv(env, opt.samples_per_point));
        if (opt.queries_per_point > 0)
            atomic_write_file(opt.queries_out_path,
                              simulate_queries_csv(env, opt.queries_per_point));
        return kExitOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

int run_build(const BuildOptions& opt, std::ostream& err) {
    try {
        const GridSpec grid = parse_grid_arg(opt.grid, opt.cell_m);
        save_wfp(build_from_file(opt.scans_path, grid, opt.floor_dbm), opt.out_path);
        return kExitOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

int run_locate(const LocateOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const auto t = parse_technique(opt.technique);
        if (!t)
            throw Error("unknown technique '" + opt.technique + "'");
        const WfpFile file = load_wfp(opt.map_path);

        std::optional<ApFilter> filter;
        if (opt.rssi_min || opt.rssi_max || !opt.include_aps.empty()) {
            filter.emplace();
            filter->rssi_min = opt.rssi_min;
            filter->rssi_max = opt.rssi_max;
            if (!opt.include_aps.empty())
                filter->include =
                    std::set<ApId>(opt.include_aps.begin(), opt.include_aps.end());
            filter->validate();
        }

        std::ifstream in(opt.query_path);
        if (!in)
            throw Error("cannot open query file '" + opt.query_path + "'");
        // One answer line per scan, in input order.
        for (const QueryVector& q : read_queries(in, file.table.floor_dbm)) {
            const PositionEstimate est = locate(q, file.table, *t, filter);
            char distance[64];
            std::snprintf(distance, sizeof(distance), "%.10g", est.distance);
            out << est.point.row << ',' << est.point.col << ',' << distance << '\n';
        }
        return kExitOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

int run_analyze(const AnalyzeOptions& opt, std::ostream& err) {
    try {
        const ReportFormat format = parse_format(opt.format);
        const WfpFile file = load_wfp(opt.map_path);
        std::ifstream in(opt.labeled_path);
        if (!in)
            throw Error("cannot open labeled query file '" + opt.labeled_path + "'");
        const auto queries = read_labeled_queries(in, file.map.grid, file.table.floor_dbm);
        const AnalysisReport report = build_report(batch_locate(queries, file.table));
        export_report(report, opt.out_path, format);
        return kExitOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

int run_report(const ReportOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        if (opt.top < 1)
            throw Error("--top must be at least 1");
        std::ifstream in(opt.in_path);
        if (!in)
            throw Error("cannot open report file '" + opt.in_path + "'");

        std::vector<std::pair<std::string, double>> rates;
        std::string line;
        bool jsonl = false;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty())
                continue;
            if (line_no == 1)
                jsonl = line.front() == '{';
            if (jsonl) {
                const auto obj = nlohmann::json::parse(line);
                rates.emplace_back(obj.at("technique").get<std::string>(),
                                   obj.at("hit_rate_pct").get<double>());
                continue;
            }
            std::istringstream row(line);
            std::string technique, metric, region, value;
            std::getline(row, technique, ',');
            std::getline(row, metric, ',');
            std::getline(row, region, ',');
            std::getline(row, value);
            if (metric == "hit_rate_pct")
                rates.emplace_back(technique, std::stod(value));
        }
        if (rates.empty())
            throw Error("no hit_rate_pct rows in '" + opt.in_path + "'");

        std::stable_sort(rates.begin(), rates.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        out << "rank,technique,hit_rate_pct\n";
        const auto top = std::min<std::size_t>(rates.size(), static_cast<std::size_t>(opt.top));
        for (std::size_t i = 0; i < top; ++i)
            out << i + 1 << ',' << rates[i].first << ','
                << static_cast<long>(std::llround(rates[i].second)) << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

AnalysisReport run_pipeline_end_to_end(const std::string& env_path, int samples_per_point,
                                       int queries_per_point, const std::string& work_dir,
                                       ReportFormat format) {
    const SynthEnv env = load_env(env_path);
    fs::create_directories(work_dir);
    const std::string survey_path = (fs::path(work_dir) / "survey.csv").string();
    const std::string queries_path = (fs::path(work_dir) / "queries.csv").string();
    const std::string map_path = (fs::path(work_dir) / "map.wfp").string();
    const std::string report_path =
        (fs::path(work_dir) / (format == ReportFormat::Csv ? "report.csv" : "report.jsonl"))
            .string();

    atomic_write_file(survey_path, simulate_survey_csv(env, samples_per_point));
    atomic_write_file(queries_path, simulate_queries_csv(env, queries_per_point));

    save_wfp(build_from_file(survey_path, env.grid, env.floor_dbm), map_path);

    const WfpFile file = load_wfp(map_path);
    std::ifstream in(queries_path);
    if (!in)
        throw Error("cannot open labeled query file '" + queries_path + "'");
    const auto queries = read_labeled_queries(in, file.map.grid, file.table.floor_dbm);
    const AnalysisReport report = build_report(batch_locate(queries, file.table));
    export_report(report, report_path, format);
    return report;
}

} // namespace wifipos::cli
