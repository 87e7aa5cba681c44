// wifipos — fingerprint positioning toolchain.
//
// Subcommands mirror the survey workflow end to end: simulate a survey,
// build a radio map, locate live scans against it, analyze labeled
// queries, and rank the summary techniques from a report.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "wifipos/cli.hpp"
#include "wifipos/stats.hpp"

namespace {

std::vector<std::string> technique_names() {
    std::vector<std::string> names;
    for (wifipos::Technique t : wifipos::all_techniques())
        names.emplace_back(wifipos::technique_name(t));
    return names;
}

const CLI::Validator GridShape(
    [](std::string& value) -> std::string {
        const auto x = value.find('x');
        if (x == std::string::npos || value.find_first_not_of("0123456789x") != std::string::npos ||
            x == 0 || x + 1 == value.size() || value.find('x', x + 1) != std::string::npos)
            return "expected RxC (e.g. 6x6), got '" + value + "'";
        return {};
    },
    "RxC");

} // namespace

int main(int argc, char** argv) {
    using namespace wifipos::cli;

    CLI::App app{"Wi-Fi fingerprint positioning toolchain"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic survey");
    simulate->add_option("--env", sim.env_path, "Environment description (TOML)")->required();
    simulate->add_option("--samples-per-point", sim.samples_per_point,
                         "Scans to synthesize per calibration point")
        ->required()
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim.out_path, "Survey CSV to write")->required();
    simulate->add_option("--queries-per-point", sim.queries_per_point,
                         "Also synthesize labeled queries per point");
    simulate->add_option("--queries-out", sim.queries_out_path,
                         "Labeled query CSV to write");

    BuildOptions build;
    auto* build_cmd = app.add_subcommand("build", "Build a radio map from survey scans");
    build_cmd->add_option("--scans", build.scans_path, "Survey CSV")->required();
    build_cmd->add_option("--grid", build.grid, "Grid dimensions as RxC")
        ->required()
        ->check(GridShape);
    build_cmd->add_option("--cell-m", build.cell_m, "Cell size in meters")
        ->required()
        ->check(CLI::PositiveNumber);
    build_cmd->add_option("--floor-dbm", build.floor_dbm, "Sensitivity floor in dBm");
    build_cmd->add_option("--out", build.out_path, "Radio map file to write")->required();

    LocateOptions loc;
    auto* locate = app.add_subcommand("locate", "Locate query scans against a map");
    locate->add_option("--map", loc.map_path, "Radio map file")->required();
    locate->add_option("--query", loc.query_path, "Query CSV")->required();
    locate->add_option("--technique", loc.technique, "Summary technique")
        ->required()
        ->check(CLI::IsMember(technique_names()));
    locate->add_option("--rssi-min", loc.rssi_min, "Drop APs reading below this RSSI");
    locate->add_option("--rssi-max", loc.rssi_max, "Drop APs reading above this RSSI");
    locate->add_option("--include-aps", loc.include_aps, "Only consider these APs")
        ->delimiter(',');

    AnalyzeOptions ana;
    auto* analyze = app.add_subcommand("analyze", "Score labeled queries against a map");
    analyze->add_option("--map", ana.map_path, "Radio map file")->required();
    analyze->add_option("--labeled", ana.labeled_path, "Labeled query CSV")->required();
    analyze->add_option("--out", ana.out_path, "Report file to write")->required();
    analyze->add_option("--format", ana.format, "Report format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    ReportOptions rep;
    auto* report = app.add_subcommand("report", "Rank techniques from a report");
    report->add_option("--in", rep.in_path, "Report file")->required();
    report->add_option("--top", rep.top, "How many techniques to list")
        ->required()
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        std::cerr << "wifipos: " << e.what() << '\n';
        return kExitUsage;
    }

    if (simulate->parsed())
        return run_simulate(sim, std::cerr);
    if (build_cmd->parsed())
        return run_build(build, std::cerr);
    if (locate->parsed())
        return run_locate(loc, std::cout, std::cerr);
    if (analyze->parsed())
        return run_analyze(ana, std::cerr);
    return run_report(rep, std::cout, std::cerr);
}
