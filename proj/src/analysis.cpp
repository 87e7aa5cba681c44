#include "wifipos/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "wifipos/io.hpp"

namespace wifipos {

std::string region_name(Region r) {
    switch (r) {
    case Region::All: return "all";
    case Region::Inner: return "inner";
    case Region::Edge: return "edge";
    }
    throw Error("unknown region");
}

namespace {

bool in_region(const GridSpec& grid, GridPoint truth, Region region) {
    switch (region) {
    case Region::All: return true;
    case Region::Inner: return !is_edge(grid, truth);
    case Region::Edge: return is_edge(grid, truth);
    }
    return false;
}

double round1(double pct) { return std::round(pct * 10.0) / 10.0; }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

BatchResult batch_locate(const std::vector<LabeledQuery>& queries, const StatTable& table,
                         const std::optional<ApFilter>& filter) {
    if (queries.empty())
        throw Error("batch contains no labeled queries");

    BatchResult result;
    result.grid = table.grid;
    result.outcomes.reserve(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const LabeledQuery& lq = queries[i];
        if (!contains(table.grid, lq.truth))
            throw Error("query " + std::to_string(i) + ": truth point (" + to_string(lq.truth) +
                        ") lies outside the grid");
        BatchResult::Outcome outcome;
        outcome.truth = lq.truth;
        try {
            for (Technique t : all_techniques())
                outcome.estimates[static_cast<int>(t)] = locate(lq.query, table, t, filter);
        } catch (const Error& e) {
            throw Error("query " + std::to_string(i) + ": " + e.what());
        }
        result.outcomes.push_back(std::move(outcome));
    }
    return result;
}

double hit_rate(const BatchResult& result, Technique t) {
    if (result.outcomes.empty())
        throw Error("no estimates for technique " + technique_name(t));
    std::size_t hits = 0;
    for (const auto& o : result.outcomes)
        if (o.estimates[static_cast<int>(t)].point == o.truth)
            ++hits;
    return round1(100.0 * static_cast<double>(hits) / static_cast<double>(result.outcomes.size()));
}

std::map<GridPoint, int> position_histogram(const BatchResult& result, GridPoint truth,
                                            Technique t) {
    std::map<GridPoint, int> histogram;
    bool seen = false;
    for (const auto& o : result.outcomes) {
        if (o.truth != truth)
            continue;
        seen = true;
        ++histogram[o.estimates[static_cast<int>(t)].point];
    }
    if (!seen)
        throw Error("no estimates at truth point (" + to_string(truth) + ")");
    return histogram;
}

double error_meters(GridPoint truth, GridPoint estimate, const GridSpec& grid) {
    const double dr = truth.row - estimate.row;
    const double dc = truth.col - estimate.col;
    return grid.cell_size_m * std::sqrt(dr * dr + dc * dc);
}

std::vector<double> error_list_meters(const BatchResult& result, Technique t, Region region) {
    std::vector<double> errors;
    for (const auto& o : result.outcomes)
        if (in_region(result.grid, o.truth, region))
            errors.push_back(
                error_meters(o.truth, o.estimates[static_cast<int>(t)].point, result.grid));
    return errors;
}

double p95_error(const BatchResult& result, Technique t, Region region) {
    const auto errors = error_list_meters(result, t, region);
    if (errors.empty())
        throw Error("no queries with truth in region '" + region_name(region) + "'");
    return percentile(errors, 0.95);
}

double max_error(const BatchResult& result, Technique t, Region region) {
    const auto errors = error_list_meters(result, t, region);
    if (errors.empty())
        throw Error("no queries with truth in region '" + region_name(region) + "'");
    return *std::max_element(errors.begin(), errors.end());
}

AnalysisReport build_report(const BatchResult& result) {
    AnalysisReport report;
    report.grid = result.grid;

    for (Technique t : all_techniques()) {
        auto& tr = report.techniques[static_cast<int>(t)];
        tr.technique = t;
        tr.queries = static_cast<int>(result.outcomes.size());
        for (const auto& o : result.outcomes) {
            const GridPoint est = o.estimates[static_cast<int>(t)].point;
            if (est == o.truth)
                ++tr.hits;
            ++tr.histograms[o.truth][est];
            tr.errors_m.push_back(error_meters(o.truth, est, result.grid));
        }
        tr.hit_rate_pct = hit_rate(result, t);
        for (Region region : {Region::All, Region::Inner, Region::Edge}) {
            auto& re = tr.regions[static_cast<int>(region)];
            const auto errors = error_list_meters(result, t, region);
            re.query_count = static_cast<int>(errors.size());
            if (!errors.empty()) {
                re.p95_m = percentile(errors, 0.95);
                re.max_m = *std::max_element(errors.begin(), errors.end());
            }
        }
    }
    return report;
}

void export_report(const AnalysisReport& report, std::ostream& out, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        out << "technique,metric,region,value\n";
        for (const auto& tr : report.techniques) {
            const std::string name = technique_name(tr.technique);
            char rate[32];
            std::snprintf(rate, sizeof(rate), "%.1f", tr.hit_rate_pct);
            out << name << ",hit_rate_pct,all," << rate << '\n';
            out << name << ",hits,all," << tr.hits << '\n';
            out << name << ",queries,all," << tr.queries << '\n';
            for (Region region : {Region::All, Region::Inner, Region::Edge}) {
                const auto& re = tr.regions[static_cast<int>(region)];
                if (re.query_count == 0)
                    continue;
                out << name << ",p95_error_m," << region_name(region) << ',' << fmt(re.p95_m)
                    << '\n';
                out << name << ",max_error_m," << region_name(region) << ',' << fmt(re.max_m)
                    << '\n';
            }
            for (const auto& [truth, counts] : tr.histograms)
                for (const auto& [est, count] : counts)
                    out << name << ",position_count[truth=" << to_string(truth) << "][est="
                        << to_string(est) << "],all," << count << '\n';
        }
        return;
    }

    // JSONL: one object per technique, keys in nlohmann's canonical order.
    for (const auto& tr : report.techniques) {
        nlohmann::json obj;
        obj["technique"] = technique_name(tr.technique);
        obj["queries"] = tr.queries;
        obj["hits"] = tr.hits;
        obj["hit_rate_pct"] = tr.hit_rate_pct;
        for (Region region : {Region::All, Region::Inner, Region::Edge}) {
            const auto& re = tr.regions[static_cast<int>(region)];
            if (re.query_count == 0)
                continue;
            obj["p95_error_m"][region_name(region)] = re.p95_m;
            obj["max_error_m"][region_name(region)] = re.max_m;
            obj["region_queries"][region_name(region)] = re.query_count;
        }
        nlohmann::json hist = nlohmann::json::object();
        for (const auto& [truth, counts] : tr.histograms) {
            nlohmann::json row = nlohmann::json::object();
            for (const auto& [est, count] : counts)
                row[to_string(est)] = count;
            hist[to_string(truth)] = std::move(row);
        }
        obj["position_counts"] = std::move(hist);
        out << obj.dump() << '\n';
    }
}

void export_report(const AnalysisReport& report, const std::string& path, ReportFormat format) {
    std::ostringstream buffer;
    export_report(report, buffer, format);
    atomic_write_file(path, buffer.str());
}

} // namespace wifipos
