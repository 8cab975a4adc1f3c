#include "bct/ground_truth.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bct {

PointId brute_force_nn(const Metric& metric, std::span<const PointId> candidates, PointId query) {
  std::optional<PointId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const PointId c : candidates) {
    if (c == query) continue;
    const double d = metric.distance(query, c);
    if (!best || d < best_d || (d == best_d && c < *best)) {
      best = c;
      best_d = d;
    }
  }
  if (!best) throw std::invalid_argument("brute-force search over an empty candidate set");
  return *best;
}

NNGraph brute_force_nn_graph(const Metric& metric, std::span<const PointId> points) {
  NNGraph g;
  for (const PointId x : points) g.edges[x] = brute_force_nn(metric, points, x);
  return g;
}

double estimate_expansion_constant(const Metric& metric, std::span<const PointId> points) {
  const std::size_t n = points.size();
  if (n < 2) return 2.0;

  std::vector<double> radii;
  radii.reserve(n * (n - 1) / 2);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = metric.distance(points[a], points[b]);
      rows[a][b] = rows[b][a] = d;
      radii.push_back(d);
    }
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  radii.erase(std::remove(radii.begin(), radii.end(), 0.0), radii.end());

  // For one center the ratio |B(2r)| / |B(r)| only changes when r crosses
  // some d or d/2, so it is enough to test one radius per interval between
  // consecutive breakpoints, provided some candidate radius lands there.
  double c = 2.0;
  std::vector<double> sorted;
  std::vector<double> breaks;
  for (std::size_t a = 0; a < n; ++a) {
    sorted = rows[a];
    std::sort(sorted.begin(), sorted.end());
    breaks.clear();
    for (const double d : sorted) {
      breaks.push_back(d);
      breaks.push_back(d / 2.0);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.push_back(std::numeric_limits<double>::infinity());

    const auto count_below = [&](double r) {
      return static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), r) -
                                 sorted.begin());
    };
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      // Radii in (breaks[k], breaks[k+1]] all give the same open-ball counts.
      const auto it = std::upper_bound(radii.begin(), radii.end(), breaks[k]);
      if (it == radii.end() || *it > breaks[k + 1]) continue;
      const double r = *it;
      const double inner = count_below(r);
      if (inner > 0.0) c = std::max(c, count_below(2.0 * r) / inner);
    }
  }
  return c;
}

double estimate_expansion_constant(const PointSet& points) {
  auto shared = std::make_shared<const PointSet>(points);
  const EuclideanMetric metric(shared);
  std::vector<PointId> ids(points.size());
  std::iota(ids.begin(), ids.end(), PointId{0});
  return estimate_expansion_constant(metric, ids);
}

}  // namespace bct
