#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wifipos/analysis.hpp"
#include "wifipos/radiomap.hpp"
#include "wifipos/stats.hpp"

namespace wifipos {

// The .wfp container: radio map plus pre-computed stat table in one
// versioned, self-describing JSON document with canonical (byte-stable)
// serialization.
struct WfpFile {
    RadioMap map;
    StatTable table;
};

std::string serialize_wfp(const WfpFile& file);
WfpFile deserialize_wfp(const std::string& text);

void save_wfp(const WfpFile& file, const std::string& path);
WfpFile load_wfp(const std::string& path);

// Query scans for `locate`: either one scan per line in the compact
// `ap:rssi;ap:rssi` form, or columnar `seq,ap_id,rssi_dbm` rows grouped by
// seq. The format is sniffed from the first data line.
std::vector<QueryVector> read_queries(std::istream& in, double floor_dbm);
QueryVector parse_query_line(const std::string& line, int line_no, double floor_dbm);

// Labeled queries for `analyze`: `truth_row,truth_col,seq,ap_id,rssi_dbm`
// rows, grouped by (truth, seq) in order of first appearance.
std::vector<LabeledQuery> read_labeled_queries(std::istream& in, const GridSpec& grid,
                                               double floor_dbm);

void write_labeled_queries(const std::vector<LabeledQuery>& queries, std::ostream& out);

// Writes content to path via a temp file and rename, so failures never leave
// a partial artifact behind.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

} // namespace wifipos
