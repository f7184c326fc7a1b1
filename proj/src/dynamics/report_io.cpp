#include "topicdyn/report_io.hpp"

#include <array>
#include <charconv>

namespace topicdyn {
using nlohmann::json;

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

namespace {

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json window_json(const WindowInfo& w) { return {{"start", w.start}, {"end", w.end}, {"id", w.id}}; }

std::string node_name(const std::vector<std::string>& labels, int index) {
  return labels.at(static_cast<std::size_t>(index));
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

json to_json(const WindowPairReport& report) {
  json doc;
  doc["from"] = window_json(report.from);
  doc["to"] = window_json(report.to);
  doc["label"] = report.label();
  doc["MI"] = report.merging_index;
  doc["SI"] = report.splitting_index;
  doc["NI"] = report.novelty_index;
  doc["per_topic_novelty"] = report.per_topic_novelty;
  doc["births"] = report.births;
  doc["deaths"] = report.deaths;
  doc["merging_zero_mass"] = report.merging_zero_mass;
  doc["splitting_zero_mass"] = report.splitting_zero_mass;
  json transitions = json::array();
  for (const Transition& t : report.transitions) {
    transitions.push_back({{"from", t.from}, {"to", t.to}, {"weight", t.weight},
                           {"label", std::string(to_string(t.label))}});
  }
  doc["transitions"] = std::move(transitions);
  doc["similarity"] = {{"rows", report.similarity.row_labels},
                       {"cols", report.similarity.col_labels},
                       {"values", matrix_json(report.similarity.values)}};
  doc["merging_projection"] = matrix_json(report.merging_projection.values);
  doc["splitting_projection"] = matrix_json(report.splitting_projection.values);
  return doc;
}

std::string indexes_csv_header() { return "from_start,from_end,to_start,to_end,MI,SI,NI,births,deaths"; }

std::string indexes_csv_row(const WindowPairReport& r) {
  return std::to_string(r.from.start) + "," + std::to_string(r.from.end) + "," +
         std::to_string(r.to.start) + "," + std::to_string(r.to.end) + "," +
         format_double(r.merging_index) + "," + format_double(r.splitting_index) + "," +
         format_double(r.novelty_index) + "," + std::to_string(r.births) + "," +
         std::to_string(r.deaths);
}

void write_indexes_csv(const std::vector<WindowPairReport>& reports, std::ostream& out) {
  out << indexes_csv_header() << '\n';
  for (const WindowPairReport& r : reports) out << indexes_csv_row(r) << '\n';
}

std::string pair_file_stem(const WindowPairReport& r) {
  return std::to_string(r.from.start) + "-" + std::to_string(r.from.end) + "_" +
         std::to_string(r.to.start) + "-" + std::to_string(r.to.end);
}

void write_network_dot(const WindowPairReport& report, std::ostream& out) {
  const auto& rows = report.similarity.row_labels;
  const auto& cols = report.similarity.col_labels;
  const std::string stem = pair_file_stem(report);

  out << "graph " << quoted("bipartite_" + stem) << " {\n  rankdir=LR;\n";
  out << "  subgraph cluster_t { label=" << quoted(report.from.id) << ";\n";
  for (const auto& name : rows) out << "    " << quoted(name) << ";\n";
  out << "  }\n  subgraph cluster_t1 { label=" << quoted(report.to.id) << ";\n";
  for (const auto& name : cols) out << "    " << quoted(name) << " [style=filled, fillcolor=gray];\n";
  out << "  }\n";
  for (const Transition& t : report.transitions) {
    if (t.from < 0 || t.to < 0) continue;
    out << "  " << quoted(node_name(rows, t.from)) << " -- " << quoted(node_name(cols, t.to))
        << " [weight=" << format_double(t.weight) << ", label=" << quoted(std::string(to_string(t.label)))
        << "];\n";
  }
  out << "}\n";

  const auto projection = [&out, &stem](const char* kind, const ProjectionMatrix& p,
                                        const std::vector<std::string>& names) {
    out << "graph " << quoted(std::string(kind) + "_" + stem) << " {\n";
    for (const auto& name : names) out << "  " << quoted(name) << ";\n";
    for (std::size_t i = 0; i < p.dim(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (p(i, j) > 0.0) {
          out << "  " << quoted(names[i]) << " -- " << quoted(names[j])
              << " [weight=" << format_double(p(i, j)) << "];\n";
        }
      }
    }
    out << "}\n";
  };
  if (report.merging_projection.dim() == rows.size()) {
    projection("merging", report.merging_projection, rows);
  }
  if (report.splitting_projection.dim() == cols.size()) {
    projection("splitting", report.splitting_projection, cols);
  }
}

void write_edge_list_csv(const WindowPairReport& report, std::ostream& out) {
  const auto& rows = report.similarity.row_labels;
  const auto& cols = report.similarity.col_labels;
  out << "source,target,weight,label\n";
  for (const Transition& t : report.transitions) {
    const std::string source = t.from < 0 ? "" : node_name(rows, t.from);
    const std::string target = t.to < 0 ? "" : node_name(cols, t.to);
    out << source << ',' << target << ',' << format_double(t.weight) << ',' << to_string(t.label)
        << '\n';
  }
  const auto projection = [&out](const char* label, const ProjectionMatrix& p,
                                 const std::vector<std::string>& names) {
    if (p.dim() != names.size()) return;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (p(i, j) > 0.0) {
          out << names[i] << ',' << names[j] << ',' << format_double(p(i, j)) << ',' << label << '\n';
        }
      }
    }
  };
  projection("merging-projection", report.merging_projection, rows);
  projection("splitting-projection", report.splitting_projection, cols);
}

}  // namespace topicdyn
