#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wifipos/analysis.hpp"

namespace wifipos::cli {

struct SimulateOptions {
    std::string env_path;
    int samples_per_point = 0;
    std::string out_path;
    int queries_per_point = 0;      // optional: also emit labeled queries
    std::string queries_out_path;   // required when queries_per_point > 0
};

struct BuildOptions {
    std::string scans_path;
    std::string grid;   // "RxC"
    double cell_m = 1.0;
    double floor_dbm = kDefaultFloorDbm;
    std::string out_path;
};

struct LocateOptions {
    std::string map_path;
    std::string query_path;
    std::string technique;
    std::optional<double> rssi_min;
    std::optional<double> rssi_max;
    std::vector<std::string> include_aps;
};

struct AnalyzeOptions {
    std::string map_path;
    std::string labeled_path;
    std::string out_path;
    std::string format = "csv"; // csv | jsonl
};

struct ReportOptions {
    std::string in_path;
    int top = 8;
};

// Exit codes: 0 ok, 1 runtime error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

int run_simulate(const SimulateOptions& opt, std::ostream& err);
int run_build(const BuildOptions& opt, std::ostream& err);
int run_locate(const LocateOptions& opt, std::ostream& out, std::ostream& err);
int run_analyze(const AnalyzeOptions& opt, std::ostream& err);
int run_report(const ReportOptions& opt, std::ostream& out, std::ostream& err);

// simulate -> build -> analyze chained through intermediate files in
// work_dir; the produced report equals running the stages manually.
AnalysisReport run_pipeline_end_to_end(const std::string& env_path, int samples_per_point,
                                       int queries_per_point, const std::string& work_dir,
                                       ReportFormat format = ReportFormat::Csv);

} // namespace wifipos::cli
