#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wifipos/locator.hpp"

namespace wifipos {

struct LabeledQuery {
    GridPoint truth;
    QueryVector query;
};

// Raw batch outcome: one estimate per technique per labeled query, in query
// order. Aggregations (hit rate, histograms, error percentiles) derive from
// this.
struct BatchResult {
    struct Outcome {
        GridPoint truth;
        std::array<PositionEstimate, kTechniqueCount> estimates;
    };

    GridSpec grid;
    std::vector<Outcome> outcomes;
};

enum class Region { All, Inner, Edge };

std::string region_name(Region r);

// Locates every query with every technique. Errors are annotated with the
// failing query's index.
BatchResult batch_locate(const std::vector<LabeledQuery>& queries, const StatTable& table,
                         const std::optional<ApFilter>& filter = std::nullopt);

// Percentage of estimates exactly matching the truth cell, rounded to one
// decimal.
double hit_rate(const BatchResult& result, Technique t);

// Estimate counts for the queries labeled with the given truth point.
std::map<GridPoint, int> position_histogram(const BatchResult& result, GridPoint truth,
                                            Technique t);

// Positional error in meters between two grid cells.
double error_meters(GridPoint truth, GridPoint estimate, const GridSpec& grid);

std::vector<double> error_list_meters(const BatchResult& result, Technique t, Region region);

// 95th percentile of the positional error over truth points in the region
// (interpolated with the same rank rule as the quartiles).
double p95_error(const BatchResult& result, Technique t, Region region);

double max_error(const BatchResult& result, Technique t, Region region);

// Flat per-technique summary of a batch, ready for export.
struct AnalysisReport {
    struct RegionErrors {
        int query_count = 0;
        double p95_m = 0.0;
        double max_m = 0.0;
    };
    struct TechniqueReport {
        Technique technique = Technique::Maximum;
        int queries = 0;
        int hits = 0;
        double hit_rate_pct = 0.0;
        std::array<RegionErrors, 3> regions; // indexed by Region
        std::map<GridPoint, std::map<GridPoint, int>> histograms; // truth -> estimate -> count
        std::vector<double> errors_m; // per query, in query order
    };

    GridSpec grid;
    std::array<TechniqueReport, kTechniqueCount> techniques;

    const TechniqueReport& of(Technique t) const { return techniques[static_cast<int>(t)]; }
};

AnalysisReport build_report(const BatchResult& result);

enum class ReportFormat { Csv, Jsonl };

// Deterministic flat-file export: CSV with technique,metric,region,value rows
// or JSONL with one object per technique. Re-exporting the same report is
// byte-identical.
void export_report(const AnalysisReport& report, std::ostream& out, ReportFormat format);
void export_report(const AnalysisReport& report, const std::string& path, ReportFormat format);

} // namespace wifipos
