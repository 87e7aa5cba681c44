#include "wifipos/radiomap.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace wifipos {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

} // namespace

std::size_t RadioMap::total_samples() const {
    std::size_t n = 0;
    for (const auto& [ap, points] : by_ap)
        for (const auto& [p, samples] : points)
            n += samples.size();
    return n;
}

std::vector<SurveyRecord> ingest_scans(std::istream& in, double floor_dbm) {
    std::vector<SurveyRecord> records;
    std::map<std::pair<GridPoint, ApId>, int> next_seq;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty())
            continue;
        auto fields = split_csv(sv);
        int row = 0;
        if (line_no == 1 && (fields.empty() || !parse_int(fields[0], row)))
            continue; // optional header
        if (fields.size() != 5)
            throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields "
                             "(row,col,ap_id,rssi_dbm,lq), got " + std::to_string(fields.size()));
        int col = 0, rssi = 0, lq = 0;
        if (!parse_int(fields[0], row) || !parse_int(fields[1], col))
            throw ParseError("line " + std::to_string(line_no) + ": non-integer grid coordinate");
        if (fields[2].empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty ap_id");
        if (!parse_int(fields[3], rssi))
            throw ParseError("line " + std::to_string(line_no) + ": non-integer RSSI");
        if (!parse_int(fields[4], lq))
            throw ParseError("line " + std::to_string(line_no) + ": non-integer LQ");
        if (rssi > 0 || rssi < static_cast<int>(floor_dbm))
            throw ParseError("line " + std::to_string(line_no) + ": RSSI " + std::to_string(rssi) +
                             " outside [" + std::to_string(static_cast<int>(floor_dbm)) + ", 0]");
        if (lq < 0 || lq > 100)
            throw ParseError("line " + std::to_string(line_no) + ": LQ " + std::to_string(lq) +
                             " outside [0, 100]");

        GridPoint p{row, col};
        ApId ap{fields[2]};
        int seq = next_seq[{p, ap}]++;
        records.push_back(SurveyRecord{p, std::move(ap), RawSample{rssi, lq}, seq});
    }
    if (records.empty())
        throw Error("no survey data");
    return records;
}

void write_survey_csv(const std::vector<SurveyRecord>& records, std::ostream& out) {
    out << "row,col,ap_id,rssi_dbm,lq\n";
    for (const auto& r : records)
        out << r.point.row << ',' << r.point.col << ',' << r.ap << ',' << r.sample.rssi_dbm << ','
            << r.sample.lq << '\n';
}

RadioMap build_radio_map(const std::vector<SurveyRecord>& records, const GridSpec& grid,
                         double floor_dbm) {
    grid.validate();
    if (records.empty())
        throw Error("cannot build a radio map from an empty record list");

    RadioMap map;
    map.grid = grid;
    map.floor_dbm = floor_dbm;
    map.by_point.resize(static_cast<std::size_t>(grid.point_count()));

    for (std::size_t i = 0; i < records.size(); ++i) {
        const SurveyRecord& r = records[i];
        if (!contains(grid, r.point))
            throw Error("record " + std::to_string(i) + " at point (" + to_string(r.point) +
                        ") lies outside the " + std::to_string(grid.rows) + "x" +
                        std::to_string(grid.cols) + " grid");
        map.by_ap[r.ap][r.point].push_back(r.sample);
        map.by_point[point_index(grid, r.point)][r.ap].push_back(r.sample);
    }
    return map;
}

ConsistencyReport check_consistency(const RadioMap& map) {
    ConsistencyReport report;

    auto as_multiset = [](std::vector<RawSample> v) {
        std::sort(v.begin(), v.end(), [](const RawSample& a, const RawSample& b) {
            return std::pair{a.rssi_dbm, a.lq} < std::pair{b.rssi_dbm, b.lq};
        });
        return v;
    };

    for (const auto& [ap, points] : map.by_ap) {
        for (const auto& [p, samples] : points) {
            report.by_ap_total += samples.size();
            const auto& cell = map.by_point[point_index(map.grid, p)];
            auto it = cell.find(ap);
            std::vector<RawSample> other = it == cell.end() ? std::vector<RawSample>{} : it->second;
            if (as_multiset(samples) != as_multiset(other))
                report.mismatches.push_back(
                    ConsistencyMismatch{ap, p, samples.size(), other.size()});
        }
    }
    // Samples reachable only through the point view are mismatches too.
    for (int idx = 0; idx < map.grid.point_count(); ++idx) {
        const GridPoint p = point_at(map.grid, idx);
        for (const auto& [ap, samples] : map.by_point[idx]) {
            report.by_point_total += samples.size();
            auto ap_it = map.by_ap.find(ap);
            if (ap_it == map.by_ap.end() || !ap_it->second.contains(p))
                report.mismatches.push_back(ConsistencyMismatch{ap, p, 0, samples.size()});
        }
    }
    return report;
}

std::vector<ApId> visible_aps(const RadioMap& map) {
    std::vector<ApId> aps;
    aps.reserve(map.by_ap.size());
    for (const auto& [ap, points] : map.by_ap)
        aps.push_back(ap);
    return aps; // already sorted: by_ap is an ordered map
}

} // namespace wifipos
