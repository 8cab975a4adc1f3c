#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "bct/metric.hpp"
#include "bct/oracle.hpp"
#include "bct/point_set.hpp"

namespace bct::testing {

inline std::shared_ptr<const PointSet> line(const std::vector<double>& xs) {
  std::vector<std::vector<double>> rows;
  for (const double x : xs) rows.push_back({x});
  return std::make_shared<const PointSet>(PointSet::from_rows(rows));
}

// Anchor 0 at the hub of a star; arm k (index k + 1) sits at distance d[k].
// Arm-to-arm distances go through the hub, which keeps the table a metric.
inline std::shared_ptr<const Metric> star(const std::vector<double>& d) {
  const std::size_t n = d.size() + 1;
  std::vector<std::vector<double>> t(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 1; a < n; ++a) {
    t[0][a] = t[a][0] = d[a - 1];
    for (std::size_t b = 1; b < n; ++b) {
      if (a != b) t[a][b] = d[a - 1] + d[b - 1];
    }
  }
  return std::make_shared<const MatrixMetric>(std::move(t));
}

inline std::vector<PointId> arms(std::size_t count) {
  std::vector<PointId> ids;
  for (std::size_t k = 1; k <= count; ++k) ids.push_back(static_cast<PointId>(k));
  return ids;
}

inline std::vector<PointId> iota(std::size_t n, PointId from = 0) {
  std::vector<PointId> ids;
  for (std::size_t k = 0; k < n; ++k) ids.push_back(static_cast<PointId>(from + k));
  return ids;
}

}  // namespace bct::testing
