#pragma once

#include <cstdint>
#include <optional>

#include "bct/bandits.hpp"
#include "bct/cover_tree.hpp"
#include "bct/oracle.hpp"
#include "bct/report.hpp"

namespace bct {

struct SearchConfig {
  double delta = 0.1;
  // Known bound c~ >= 2 on the expansion constant; shortens the union bound.
  std::optional<double> expansion_bound;
  // Set for approximate search: return a (1 + epsilon)-approximate neighbor.
  std::optional<double> epsilon_approx;
  bool lt_variant = false;
  std::uint64_t t_max = kDefaultPullCap;
  std::function<void(const PullTrace&)> trace;

  BanditOptions bandit_options() const { return {t_max, lt_variant, trace}; }
};

struct SearchResult {
  PointId nn = 0;
  RunReport report;
  // Approximate search only: level at which the early exit fired.
  std::optional<Level> exit_level;
};

// Number of bandit calls the failure probability is split across:
// n + 1 without a bound, otherwise min(ceil(ln n / ln(1 + 1/c~^2)) + 1, n) + 1.
std::uint64_t search_union_size(std::size_t n, std::optional<double> expansion_bound);

// Descends from i_top to i_bottom keeping, at every level, the children
// that may still have the nearest neighbor as a descendant, then resolves
// the bottom set with successive elimination.
//
// Throws ContractViolation for an empty tree, delta outside (0, 1/2], or a
// query index the oracle cannot measure.
SearchResult find_nearest(const CoverTree& tree, PointId query, const SearchConfig& config,
                          StochasticOracle& oracle);

// As find_nearest, but after each level checks whether every kept node is
// confidently farther than 2^(i+1) (1 + 1/eps) from the query; if so the
// closest kept node is a (1 + eps)-approximate neighbor and is returned.
// Requires config.epsilon_approx > 0.
SearchResult find_nearest_approx(const CoverTree& tree, PointId query,
                                 const SearchConfig& config, StochasticOracle& oracle);

// Search for the nearest neighbor of a tree point among the other tree
// points: the point itself is kept for traversal but never offered to the
// bandits. Requires tree.size() >= 2 and tree.contains(point).
SearchResult find_nearest_excluding_self(const CoverTree& tree, PointId point,
                                         const SearchConfig& config, StochasticOracle& oracle);

}  // namespace bct
