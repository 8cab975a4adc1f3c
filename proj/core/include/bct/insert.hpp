#pragma once

#include <cstdint>
#include <span>

#include "bct/bandits.hpp"
#include "bct/cover_tree.hpp"
#include "bct/ledger.hpp"
#include "bct/oracle.hpp"
#include "bct/report.hpp"

namespace bct {

struct InsertResult {
  Level level = 0;
  std::optional<PointId> parent;
  std::uint64_t oracle_calls = 0;
  bool capped = false;
};

// Adds `point` to the tree. Threshold tests at each level use widths at
// delta / n, where n is the tree size after insertion, and share `ledger`
// across levels.
//
// Throws DuplicatePointError (tree unchanged) when the descent reaches the
// level floor, and ContractViolation if `point` is already in the tree.
InsertResult insert(CoverTree& tree, PointId point, double delta, StochasticOracle& oracle,
                    SampleLedger& ledger, const BanditOptions& options = {});

struct BuildResult {
  CoverTree tree;
  RunReport report;
};

// Inserts the points one at a time, each at failure probability delta / n
// with a fresh ledger. Throws DuplicatePointError naming the offending id.
BuildResult build(std::span<const PointId> points, double delta, StochasticOracle& oracle,
                  const BanditOptions& options = {}, Level level_floor = kDefaultLevelFloor);

// Points 0..n-1.
BuildResult build(std::size_t n, double delta, StochasticOracle& oracle,
                  const BanditOptions& options = {}, Level level_floor = kDefaultLevelFloor);

}  // namespace bct
