#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bct/cover_tree.hpp"
#include "bct/nn_graph.hpp"
#include "bct/point_set.hpp"

namespace bct::io {

// CSV: one point per row, comma-separated reals, no header.
PointSet read_points_csv(std::istream& in);
void write_points_csv(std::ostream& out, const PointSet& points);

// NDJSON: {"id": k, "vec": [...]} per line; ids must be exactly 0..n-1
// (any order).
PointSet read_points_ndjson(std::istream& in);
void write_points_ndjson(std::ostream& out, const PointSet& points);

// Dispatches on the extension: .csv, otherwise NDJSON (.ndjson / .jsonl).
PointSet load_points(const std::filesystem::path& path);
void save_points(const std::filesystem::path& path, const PointSet& points);

// First line {"schema":1,"i_top":..,"i_bottom":..,"root":..,"n":..}, then
// one {"id":..,"top_level":..,"parent":..|null} per point in id order.
void write_tree(std::ostream& out, const CoverTree& tree);
CoverTree read_tree(std::istream& in);
void save_tree(const std::filesystem::path& path, const CoverTree& tree);
CoverTree load_tree(const std::filesystem::path& path);

// {"src":..,"dst":..} per line, or "src,dst" rows with a header.
void write_graph_ndjson(std::ostream& out, const NNGraph& graph);
void write_graph_csv(std::ostream& out, const NNGraph& graph);
NNGraph read_graph_ndjson(std::istream& in);

// Shortest round-trippable decimal form.
std::string format_double(double value);

}  // namespace bct::io
