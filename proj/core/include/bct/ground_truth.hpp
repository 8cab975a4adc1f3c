#pragma once

#include <span>

#include "bct/metric.hpp"
#include "bct/nn_graph.hpp"
#include "bct/point_set.hpp"
#include "bct/types.hpp"

namespace bct {

// Exact nearest neighbor of `query` among `candidates` by full scan; ties go
// to the lowest id. `query` itself is skipped if present. Throws
// std::invalid_argument when no candidate remains.
PointId brute_force_nn(const Metric& metric, std::span<const PointId> candidates, PointId query);

NNGraph brute_force_nn_graph(const Metric& metric, std::span<const PointId> points);

// Smallest c >= 2 with |B(x, 2r)| <= c |B(x, r)| over every x in the set and
// every radius r drawn from the pairwise distances, with open balls
// B(x, r) = {y : d(x, y) < r}. A single point gives 2.
double estimate_expansion_constant(const Metric& metric, std::span<const PointId> points);
double estimate_expansion_constant(const PointSet& points);

}  // namespace bct
