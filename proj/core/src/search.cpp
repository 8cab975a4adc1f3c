#include "bct/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace bct {
namespace {

// Every descendant of a node in C_i lies within 2^(i+1) of it, so the set
// kept at level i must include every candidate within d(q, Q) + 2^(i+1).
double keep_radius(Level level) { return std::ldexp(1.0, level + 1); }

enum class Mode { exact, approx, exclude_self };

SearchResult descend(const CoverTree& tree, PointId query, const SearchConfig& config,
                     StochasticOracle& oracle, Mode mode) {
  const auto started = std::chrono::steady_clock::now();
  if (tree.empty()) throw ContractViolation("search on an empty cover tree");
  if (!(config.delta > 0.0 && config.delta <= 0.5)) {
    throw ContractViolation("search delta must lie in (0, 1/2]");
  }
  if (query >= oracle.size()) throw IndexError("query index outside the oracle universe");
  if (mode == Mode::exclude_self) {
    if (!tree.contains(query)) throw ContractViolation("self-excluding search needs a tree point");
    if (tree.size() < 2) throw ContractViolation("self-excluding search needs two points");
  } else if (tree.contains(query)) {
    throw ContractViolation("query point is stored in the tree");
  }
  double approx_factor = 0.0;
  if (mode == Mode::approx) {
    if (!config.epsilon_approx || !(*config.epsilon_approx > 0.0)) {
      throw ContractViolation("approximate search needs epsilon > 0");
    }
    approx_factor = 1.0 + 1.0 / *config.epsilon_approx;
  }

  const std::size_t n = tree.size();
  const double step_delta =
      config.delta / static_cast<double>(search_union_size(n, config.expansion_bound));
  const BanditOptions options = config.bandit_options();
  const std::uint64_t calls_before = oracle.calls();

  SearchResult result;
  bool capped = false;
  const bool self_kept = mode == Mode::exclude_self;

  std::vector<PointId> cover{tree.root()};
  std::vector<PointId> expanded;
  // Samples drawn at the current level. The widths are anytime-valid, so
  // the exit check and the final elimination may start from them.
  SampleLedger level_ledger;
  std::vector<PointId> candidates;
  for (Level level = tree.top_level(); level > tree.bottom_level(); --level) {
    const std::uint64_t level_start = oracle.calls();
    const Level child_level = level - 1;

    expanded = cover;
    for (const PointId id : cover) {
      const auto children = tree.children_at(id, child_level);
      expanded.insert(expanded.end(), children.begin(), children.end());
    }
    std::sort(expanded.begin(), expanded.end());

    candidates = expanded;
    if (self_kept) std::erase(candidates, query);

    std::vector<PointId> next;
    level_ledger.clear();
    if (!candidates.empty()) {
      const CoverQuery cq{query,
                          candidates,
                          keep_radius(child_level),
                          keep_radius(child_level) / 2.0,
                          step_delta,
                          candidates.size()};
      auto out = identify_cover(cq, oracle, level_ledger, options);
      capped = capped || out.capped;
      next = std::move(out.selected);
    }
    if (self_kept && tree.level_of(query) >= child_level) {
      next.insert(std::lower_bound(next.begin(), next.end(), query), query);
    }
    cover = std::move(next);

    LevelTrace trace{child_level, expanded.size(), cover.size(), 0};
    if (mode == Mode::approx) {
      // Some member of the cover is within 2^(i+1) of the nearest neighbor;
      // if all of them are at least 2^(i+1)(1 + 1/eps) away, the closest is
      // already a (1 + eps)-approximation.
      ThresholdQuery tq;
      tq.anchor = query;
      tq.candidates = cover;
      tq.theta = keep_radius(child_level) * approx_factor;
      tq.delta = config.delta;
      tq.union_denominator = n;
      tq.stop_at_first_below = true;
      // No fresh pulls: skipping an exit only costs the exact descent, while
      // resolving a member that sits near theta can cost more than every
      // remaining level together.
      tq.pull_budget = 0;
      const auto check = threshold_partition(tq, oracle, level_ledger, options);
      capped = capped || check.capped;
      if (check.below.empty() && check.undecided.empty()) {
        trace.oracle_calls = oracle.calls() - level_start;
        result.report.per_level.push_back(trace);
        result.exit_level = child_level;
        break;
      }
    }
    trace.oracle_calls = oracle.calls() - level_start;
    result.report.per_level.push_back(trace);
  }

  candidates = cover;
  if (self_kept) std::erase(candidates, query);
  if (candidates.empty()) throw std::logic_error("self-excluding search lost every candidate");

  {
    const std::uint64_t level_start = oracle.calls();
    const SmallestQuery sq{query, candidates, step_delta, candidates.size()};
    const auto out = find_smallest_in_set(sq, oracle, level_ledger, options);
    capped = capped || out.capped;
    result.nn = out.best;
    const Level final_level = result.exit_level.value_or(tree.bottom_level());
    result.report.per_level.push_back(
        {final_level, candidates.size(), 1, oracle.calls() - level_start});
  }

  result.report.total_oracle_calls = oracle.calls() - calls_before;
  result.report.mark_capped(capped);
  result.report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace

std::uint64_t search_union_size(std::size_t n, std::optional<double> expansion_bound) {
  const auto count = static_cast<std::uint64_t>(n);
  if (!expansion_bound) return count + 1;
  const double c = *expansion_bound;
  if (!(c >= 2.0)) throw ContractViolation("expansion bound must be at least 2");
  const double height = std::ceil(std::log(static_cast<double>(n)) / std::log1p(1.0 / (c * c)));
  const auto levels = static_cast<std::uint64_t>(height) + 1;
  return std::min(levels, count) + 1;
}

SearchResult find_nearest(const CoverTree& tree, PointId query, const SearchConfig& config,
                          StochasticOracle& oracle) {
  return descend(tree, query, config, oracle, Mode::exact);
}

SearchResult find_nearest_approx(const CoverTree& tree, PointId query,
                                 const SearchConfig& config, StochasticOracle& oracle) {
  return descend(tree, query, config, oracle, Mode::approx);
}

SearchResult find_nearest_excluding_self(const CoverTree& tree, PointId point,
                                         const SearchConfig& config, StochasticOracle& oracle) {
  return descend(tree, point, config, oracle, Mode::exclude_self);
}

}  // namespace bct
