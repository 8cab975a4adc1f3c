#include "bct/nn_graph.hpp"

#include <chrono>
#include <numeric>

#include "bct/insert.hpp"
#include "bct/search.hpp"

namespace bct {

NNGraphResult build_nn_graph(std::span<const PointId> points, double delta,
                             StochasticOracle& oracle, const NNGraphOptions& options) {
  if (points.size() < 2) throw ContractViolation("a neighbor graph needs at least two points");
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("delta must lie in (0, 1)");

  const auto started = std::chrono::steady_clock::now();
  const std::uint64_t calls_before = oracle.calls();
  const BanditOptions bandit{options.t_max, options.lt_variant, {}};

  auto built = build(points, delta / 2.0, oracle, bandit);
  NNGraphResult out{{}, std::move(built.tree), {}, 0, 0, {}};
  out.build_calls = oracle.calls() - calls_before;
  bool capped = built.report.outcome == Outcome::capped;

  SearchConfig config;
  config.delta = delta / (2.0 * static_cast<double>(points.size()));
  config.expansion_bound = options.expansion_bound;
  config.lt_variant = options.lt_variant;
  config.t_max = options.t_max;

  out.per_point_calls.reserve(points.size());
  for (const PointId x : points) {
    const auto found = find_nearest_excluding_self(out.tree, x, config, oracle);
    out.graph.edges[x] = found.nn;
    out.per_point_calls.push_back(found.report.total_oracle_calls);
    capped = capped || found.report.outcome == Outcome::capped;
  }
  out.query_calls = oracle.calls() - calls_before - out.build_calls;

  out.report.total_oracle_calls = oracle.calls() - calls_before;
  out.report.mark_capped(capped);
  out.report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return out;
}

NNGraphResult build_nn_graph(std::size_t n, double delta, StochasticOracle& oracle,
                             const NNGraphOptions& options) {
  std::vector<PointId> ids(n);
  std::iota(ids.begin(), ids.end(), PointId{0});
  return build_nn_graph(ids, delta, oracle, options);
}

}  // namespace bct
