#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topicdyn/dynamics.hpp"

namespace topicdyn {

/// Shortest text that reads back to the same double.
std::string format_double(double value);

nlohmann::json to_json(const WindowPairReport& report);

/// Columns: from_start,from_end,to_start,to_end,MI,SI,NI,births,deaths
void write_indexes_csv(const std::vector<WindowPairReport>& reports, std::ostream& out);
std::string indexes_csv_header();
std::string indexes_csv_row(const WindowPairReport& report);

/// Bipartite network plus both 1-mode projections, Graphviz syntax.
void write_network_dot(const WindowPairReport& report, std::ostream& out);
/// Columns: source,target,weight,label. Bipartite edges carry their
/// transition label; projection edges are labeled merging-projection or
/// splitting-projection.
void write_edge_list_csv(const WindowPairReport& report, std::ostream& out);

/// "<from.start>-<from.end>_<to.start>-<to.end>", used in file names.
std::string pair_file_stem(const WindowPairReport& report);

}  // namespace topicdyn
