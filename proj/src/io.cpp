#include "wifipos/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace wifipos {

namespace {

using nlohmann::json;

constexpr int kWfpVersion = 1;

std::string trim(std::string s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front()))
        s.erase(s.begin());
    while (!s.empty() && is_space(s.back()))
        s.pop_back();
    return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

bool parse_int(const std::string& s, int& out) {
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty())
        return false;
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

void check_rssi_range(double rssi, double floor_dbm, int line_no) {
    if (rssi > 0.0 || rssi < floor_dbm)
        throw ParseError("line " + std::to_string(line_no) + ": RSSI " + std::to_string(rssi) +
                         " outside [" + std::to_string(floor_dbm) + ", 0]");
}

json grid_to_json(const GridSpec& grid) {
    return json{{"rows", grid.rows}, {"cols", grid.cols}, {"cell_size_m", grid.cell_size_m}};
}

GridSpec grid_from_json(const json& j) {
    GridSpec grid;
    grid.rows = j.at("rows").get<int>();
    grid.cols = j.at("cols").get<int>();
    grid.cell_size_m = j.at("cell_size_m").get<double>();
    grid.validate();
    return grid;
}

} // namespace

std::string serialize_wfp(const WfpFile& file) {
    json doc;
    doc["format"] = "wfp";
    doc["version"] = kWfpVersion;
    doc["floor_dbm"] = file.map.floor_dbm;

    json points = json::array();
    for (int idx = 0; idx < file.map.grid.point_count(); ++idx) {
        const auto& cell = file.map.by_point[static_cast<std::size_t>(idx)];
        if (cell.empty())
            continue;
        const GridPoint p = point_at(file.map.grid, idx);
        json samples = json::object();
        for (const auto& [ap, list] : cell) {
            json arr = json::array();
            for (const RawSample& s : list)
                arr.push_back(json::array({s.rssi_dbm, s.lq}));
            samples[ap] = std::move(arr);
        }
        points.push_back(json{{"row", p.row}, {"col", p.col}, {"samples", std::move(samples)}});
    }
    std::vector<ApId> ap_list;
    for (const auto& [ap, unused] : file.map.by_ap)
        ap_list.push_back(ap);
    doc["radiomap"] = json{{"grid", grid_to_json(file.map.grid)},
                           {"aps", ap_list},
                           {"points", std::move(points)}};

    json techniques = json::object();
    for (Technique t : all_techniques()) {
        const Eigen::MatrixXd& m = file.table.matrix(t);
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                if (std::isnan(m(r, c)))
                    row.push_back(nullptr);
                else
                    row.push_back(m(r, c));
            }
            rows.push_back(std::move(row));
        }
        techniques[technique_name(t)] = std::move(rows);
    }
    doc["stats"] = json{{"aps", file.table.aps}, {"techniques", std::move(techniques)}};

    return doc.dump();
}

WfpFile deserialize_wfp(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("not a valid map file: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "wfp")
            throw Error("not a wfp map file");
        if (doc.at("version").get<int>() != kWfpVersion)
            throw Error("unsupported wfp version " + doc.at("version").dump());

        WfpFile file;
        const double floor_dbm = doc.at("floor_dbm").get<double>();
        const json& rm = doc.at("radiomap");

        file.map.grid = grid_from_json(rm.at("grid"));
        file.map.floor_dbm = floor_dbm;
        file.map.by_point.resize(static_cast<std::size_t>(file.map.grid.point_count()));
        for (const json& pj : rm.at("points")) {
            const GridPoint p{pj.at("row").get<int>(), pj.at("col").get<int>()};
            if (!contains(file.map.grid, p))
                throw Error("stored point (" + to_string(p) + ") lies outside the grid");
            for (const auto& [ap, arr] : pj.at("samples").items()) {
                auto& by_ap_list = file.map.by_ap[ap][p];
                auto& by_point_list = file.map.by_point[point_index(file.map.grid, p)][ap];
                for (const json& sj : arr) {
                    const RawSample s{sj.at(0).get<int>(), sj.at(1).get<int>()};
                    by_ap_list.push_back(s);
                    by_point_list.push_back(s);
                }
            }
        }

        const json& stats = doc.at("stats");
        file.table.grid = file.map.grid;
        file.table.floor_dbm = floor_dbm;
        file.table.aps = stats.at("aps").get<std::vector<ApId>>();
        const auto points = static_cast<Eigen::Index>(file.map.grid.point_count());
        const auto n_aps = static_cast<Eigen::Index>(file.table.aps.size());
        for (Technique t : all_techniques()) {
            const json& rows = stats.at("techniques").at(technique_name(t));
            Eigen::MatrixXd m = Eigen::MatrixXd::Constant(
                points, n_aps, std::numeric_limits<double>::quiet_NaN());
            if (static_cast<Eigen::Index>(rows.size()) != points)
                throw Error("stat table for " + technique_name(t) + " has wrong row count");
            for (Eigen::Index r = 0; r < points; ++r) {
                const json& row = rows[static_cast<std::size_t>(r)];
                if (static_cast<Eigen::Index>(row.size()) != n_aps)
                    throw Error("stat table for " + technique_name(t) + " has wrong column count");
                for (Eigen::Index c = 0; c < n_aps; ++c) {
                    const json& v = row[static_cast<std::size_t>(c)];
                    if (!v.is_null())
                        m(r, c) = v.get<double>();
                }
            }
            file.table.matrix(t) = std::move(m);
        }
        return file;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed map file: ") + e.what());
    }
}

void save_wfp(const WfpFile& file, const std::string& path) {
    atomic_write_file(path, serialize_wfp(file));
}

WfpFile load_wfp(const std::string& path) {
    return deserialize_wfp(read_file(path));
}

QueryVector parse_query_line(const std::string& line, int line_no, double floor_dbm) {
    QueryVector q;
    for (const std::string& part : split(line, ';')) {
        if (part.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty ap:rssi pair");
        const auto colon = part.find(':');
        if (colon == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected ap:rssi, got '" +
                             part + "'");
        const std::string ap = trim(part.substr(0, colon));
        const std::string value = trim(part.substr(colon + 1));
        double rssi = 0.0;
        if (ap.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty ap_id");
        if (!parse_double(value, rssi))
            throw ParseError("line " + std::to_string(line_no) + ": non-numeric RSSI '" + value +
                             "'");
        check_rssi_range(rssi, floor_dbm, line_no);
        if (!q.readings.emplace(ap, rssi).second)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate AP '" + ap + "'");
    }
    if (q.readings.empty())
        throw ParseError("line " + std::to_string(line_no) + ": empty query");
    return q;
}

std::vector<QueryVector> read_queries(std::istream& in, double floor_dbm) {
    std::vector<QueryVector> queries;
    std::vector<int> seq_order;
    std::map<int, QueryVector> by_seq;

    std::string line;
    int line_no = 0;
    bool columnar = false;
    bool decided = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string data = trim(line);
        if (data.empty())
            continue;
        if (!decided) {
            columnar = data.find(':') == std::string::npos;
            decided = true;
        }
        if (!columnar) {
            queries.push_back(parse_query_line(data, line_no, floor_dbm));
            continue;
        }
        const auto fields = split(data, ',');
        int seq = 0;
        if (!parse_int(fields[0], seq)) {
            if (line_no == 1)
                continue; // header
            throw ParseError("line " + std::to_string(line_no) + ": non-integer seq");
        }
        if (fields.size() != 3)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected seq,ap_id,rssi_dbm");
        double rssi = 0.0;
        if (fields[1].empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty ap_id");
        if (!parse_double(fields[2], rssi))
            throw ParseError("line " + std::to_string(line_no) + ": non-numeric RSSI '" +
                             fields[2] + "'");
        check_rssi_range(rssi, floor_dbm, line_no);
        if (!by_seq.contains(seq))
            seq_order.push_back(seq);
        if (!by_seq[seq].readings.emplace(fields[1], rssi).second)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate AP '" + fields[1] +
                             "' in scan " + std::to_string(seq));
    }
    for (int seq : seq_order)
        queries.push_back(std::move(by_seq[seq]));
    if (queries.empty())
        throw Error("no queries");
    return queries;
}

std::vector<LabeledQuery> read_labeled_queries(std::istream& in, const GridSpec& grid,
                                               double floor_dbm) {
    std::vector<LabeledQuery> queries;
    std::map<std::tuple<int, int, int>, std::size_t> index_of;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string data = trim(line);
        if (data.empty())
            continue;
        const auto fields = split(data, ',');
        int row = 0;
        if (!parse_int(fields[0], row)) {
            if (line_no == 1)
                continue; // header
            throw ParseError("line " + std::to_string(line_no) + ": non-integer truth_row");
        }
        if (fields.size() != 5)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected truth_row,truth_col,seq,ap_id,rssi_dbm");
        int col = 0, seq = 0;
        double rssi = 0.0;
        if (!parse_int(fields[1], col) || !parse_int(fields[2], seq))
            throw ParseError("line " + std::to_string(line_no) +
                             ": non-integer truth_col or seq");
        if (fields[3].empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty ap_id");
        if (!parse_double(fields[4], rssi))
            throw ParseError("line " + std::to_string(line_no) + ": non-numeric RSSI '" +
                             fields[4] + "'");
        check_rssi_range(rssi, floor_dbm, line_no);
        const GridPoint truth{row, col};
        if (!contains(grid, truth))
            throw ParseError("line " + std::to_string(line_no) + ": truth point (" +
                             to_string(truth) + ") lies outside the grid");

        const auto key = std::make_tuple(row, col, seq);
        auto it = index_of.find(key);
        if (it == index_of.end()) {
            it = index_of.emplace(key, queries.size()).first;
            queries.push_back(LabeledQuery{truth, {}});
        }
        if (!queries[it->second].query.readings.emplace(fields[3], rssi).second)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate AP '" + fields[3] +
                             "' in scan " + std::to_string(seq));
    }
    if (queries.empty())
        throw Error("no labeled queries");
    return queries;
}

void write_labeled_queries(const std::vector<LabeledQuery>& queries, std::ostream& out) {
    out << "truth_row,truth_col,seq,ap_id,rssi_dbm\n";
    for (std::size_t i = 0; i < queries.size(); ++i) {
        for (const auto& [ap, rssi] : queries[i].query.readings) {
            char value[64];
            std::snprintf(value, sizeof(value), "%.10g", rssi);
            out << queries[i].truth.row << ',' << queries[i].truth.col << ',' << i << ',' << ap
                << ',' << value << '\n';
        }
    }
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write '" + path + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("failed while writing '" + path + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot replace '" + path + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace wifipos
