#pragma once

#include <cstdint>

#include "bct/bandits.hpp"
#include "bct/cover_tree.hpp"
#include "bct/ledger.hpp"
#include "bct/oracle.hpp"

namespace bct {

struct RemoveResult {
  std::uint64_t oracle_calls = 0;
  bool capped = false;
  // Orphans that had to be promoted to a higher level.
  std::size_t promotions = 0;
  // Set when the root was removed.
  std::optional<PointId> new_root;
};

// Removes `point` and finds new parents for its children, searching upward
// from each child's level. All threshold tests use widths at delta / n^2
// and share `ledger`.
//
// Removing the root promotes one of its top-level children (the one with
// the smallest upper confidence bound on its farthest sibling) to be the
// new root.
//
// Throws NotFoundError when `point` is not in the tree and
// ContractViolation when the tree has fewer than two points.
RemoveResult remove(CoverTree& tree, PointId point, double delta, StochasticOracle& oracle,
                    SampleLedger& ledger, const BanditOptions& options = {});

}  // namespace bct
