#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bct/bandits.hpp"
#include "bct/cover_tree.hpp"
#include "bct/oracle.hpp"
#include "bct/report.hpp"

namespace bct {

// Directed graph sending every point to its nearest other point.
struct NNGraph {
  std::map<PointId, PointId> edges;

  friend bool operator==(const NNGraph&, const NNGraph&) = default;
};

struct NNGraphResult {
  NNGraph graph;
  CoverTree tree;
  RunReport report;
  std::uint64_t build_calls = 0;
  std::uint64_t query_calls = 0;
  std::vector<std::uint64_t> per_point_calls;
};

struct NNGraphOptions {
  std::optional<double> expansion_bound;
  bool lt_variant = false;
  std::uint64_t t_max = kDefaultPullCap;
};

// Builds a cover tree at delta / 2, then finds each point's neighbor with a
// self-excluding search at delta / (2n). Requires at least two points.
NNGraphResult build_nn_graph(std::span<const PointId> points, double delta,
                             StochasticOracle& oracle, const NNGraphOptions& options = {});

NNGraphResult build_nn_graph(std::size_t n, double delta, StochasticOracle& oracle,
                             const NNGraphOptions& options = {});

}  // namespace bct
