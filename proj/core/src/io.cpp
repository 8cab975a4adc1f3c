#include "bct/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace bct::io {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("line " + std::to_string(line) + ": not a number: '" + t + "'");
  }
  return v;
}

json parse_line(const std::string& text, std::size_t line) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("line " + std::to_string(line) + ": " + e.what());
  }
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

bool is_csv(const std::filesystem::path& path) { return path.extension() == ".csv"; }

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

PointSet read_points_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(parse_real(field, number));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("no points in CSV input");
  return PointSet::from_rows(rows);
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  for (PointId i = 0; i < points.size(); ++i) {
    const auto row = points[i];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << format_double(row[k]);
    }
    out << '\n';
  }
}

PointSet read_points_ndjson(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::vector<bool> filled;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const json j = parse_line(line, number);
    if (!j.contains("id") || !j.contains("vec")) {
      throw std::invalid_argument("line " + std::to_string(number) + ": needs \"id\" and \"vec\"");
    }
    std::size_t id = 0;
    std::vector<double> vec;
    try {
      id = j.at("id").get<std::size_t>();
      vec = j.at("vec").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw std::invalid_argument("line " + std::to_string(number) + ": " + e.what());
    }
    if (id >= rows.size()) {
      rows.resize(id + 1);
      filled.resize(id + 1, false);
    }
    if (filled[id]) throw std::invalid_argument("duplicate point id " + std::to_string(id));
    rows[id] = std::move(vec);
    filled[id] = true;
  }
  if (rows.empty()) throw std::invalid_argument("no points in NDJSON input");
  for (std::size_t i = 0; i < filled.size(); ++i) {
    if (!filled[i]) throw std::invalid_argument("missing point id " + std::to_string(i));
  }
  return PointSet::from_rows(rows);
}

void write_points_ndjson(std::ostream& out, const PointSet& points) {
  for (PointId i = 0; i < points.size(); ++i) {
    const auto row = points[i];
    out << "{\"id\":" << i << ",\"vec\":[";
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << format_double(row[k]);
    }
    out << "]}\n";
  }
}

PointSet load_points(const std::filesystem::path& path) {
  auto in = open_in(path);
  return is_csv(path) ? read_points_csv(in) : read_points_ndjson(in);
}

void save_points(const std::filesystem::path& path, const PointSet& points) {
  auto out = open_out(path);
  if (is_csv(path)) {
    write_points_csv(out, points);
  } else {
    write_points_ndjson(out, points);
  }
}

void write_tree(std::ostream& out, const CoverTree& tree) {
  const TreeHeader h = tree.header();
  ordered_json header = {{"schema", 1}, {"i_top", h.i_top}, {"i_bottom", h.i_bottom}, {"n", h.n}};
  header["root"] = h.root ? ordered_json(*h.root) : ordered_json(nullptr);
  out << header.dump() << '\n';
  for (const NodeRecord& r : tree.records()) {
    ordered_json rec = {{"id", r.id}, {"top_level", r.top_level}};
    rec["parent"] = r.parent ? ordered_json(*r.parent) : ordered_json(nullptr);
    out << rec.dump() << '\n';
  }
}

CoverTree read_tree(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  std::optional<TreeHeader> header;
  std::vector<NodeRecord> records;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const json j = parse_line(line, number);
    try {
      if (!header) {
        if (j.value("schema", 0) != 1) throw std::invalid_argument("unsupported tree schema");
        TreeHeader h;
        h.i_top = j.at("i_top").get<Level>();
        h.i_bottom = j.at("i_bottom").get<Level>();
        h.n = j.at("n").get<std::size_t>();
        if (!j.at("root").is_null()) h.root = j.at("root").get<PointId>();
        header = h;
        continue;
      }
      NodeRecord r;
      r.id = j.at("id").get<PointId>();
      r.top_level = j.at("top_level").get<Level>();
      if (!j.at("parent").is_null()) r.parent = j.at("parent").get<PointId>();
      records.push_back(r);
    } catch (const json::exception& e) {
      throw std::invalid_argument("line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (!header) throw std::invalid_argument("tree file has no header");
  return CoverTree::from_records(*header, records);
}

void save_tree(const std::filesystem::path& path, const CoverTree& tree) {
  auto out = open_out(path);
  write_tree(out, tree);
}

CoverTree load_tree(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_tree(in);
}

void write_graph_ndjson(std::ostream& out, const NNGraph& graph) {
  for (const auto& [src, dst] : graph.edges) {
    out << "{\"src\":" << src << ",\"dst\":" << dst << "}\n";
  }
}

void write_graph_csv(std::ostream& out, const NNGraph& graph) {
  out << "src,dst\n";
  for (const auto& [src, dst] : graph.edges) out << src << ',' << dst << '\n';
}

NNGraph read_graph_ndjson(std::istream& in) {
  NNGraph g;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const json j = parse_line(line, number);
    try {
      g.edges[j.at("src").get<PointId>()] = j.at("dst").get<PointId>();
    } catch (const json::exception& e) {
      throw std::invalid_argument("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return g;
}

}  // namespace bct::io
