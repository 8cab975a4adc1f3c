#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bct/ledger.hpp"
#include "bct/oracle.hpp"
#include "bct/types.hpp"

namespace bct {

inline constexpr std::uint64_t kDefaultPullCap = 1'000'000;

// One oracle pull inside a bandit loop, for diagnostics.
struct PullTrace {
  std::uint64_t round;
  PointId anchor;
  PointId arm;
  double mean;
  double width;
};

struct BanditOptions {
  // Per-pair pull cap. An arm that reaches it is classified by its
  // empirical mean and the outcome is flagged as capped.
  std::uint64_t t_max = kDefaultPullCap;
  // Identify-cover lower threshold without the slack term:
  // L_t = min(mean - width) + epsilon instead of ... + epsilon + gamma.
  bool lt_variant = false;
  std::function<void(const PullTrace&)> trace;
};

// Bookkeeping shared by every bandit outcome.
struct BanditStats {
  std::uint64_t oracle_calls = 0;
  bool capped = false;
  // Samples drawn by this call only.
  SampleLedger ledger_delta;
};

struct CoverQuery {
  PointId anchor = 0;
  std::span<const PointId> candidates;
  double epsilon = 1.0;
  double gamma = 0.5;
  double delta = 0.1;
  // Union-bound denominator applied to delta for the per-arm widths.
  std::size_t union_denominator = 1;
};

struct CoverOutcome : BanditStats {
  // Sorted by id.
  std::vector<PointId> selected;
};

// Returns G with, with probability >= 1 - delta,
//   {j : d(a,j) <= d(a,Q) + eps} ⊆ G ⊆ {j : d(a,j) <= d(a,Q) + eps + gamma}.
// Reuses any samples already in `ledger` and records new ones into it.
CoverOutcome identify_cover(const CoverQuery& query, StochasticOracle& oracle,
                            SampleLedger& ledger, const BanditOptions& options = {});

struct ThresholdQuery {
  PointId anchor = 0;
  std::span<const PointId> candidates;
  double theta = 1.0;
  double delta = 0.1;
  std::size_t union_denominator = 1;
  // Stop as soon as one arm is confidently below theta. `above` is then
  // incomplete; only the emptiness of `below` is meaningful.
  bool stop_at_first_below = false;
  // Cap on fresh pulls, initialization included. Arms whose interval still
  // straddles theta when it runs out are reported as undecided.
  std::optional<std::uint64_t> pull_budget;
};

struct ThresholdOutcome : BanditStats {
  // All sorted by id.
  std::vector<PointId> below;  // d <= theta
  std::vector<PointId> above;  // d > theta
  // Only with a pull budget: not resolved either way.
  std::vector<PointId> undecided;
};

ThresholdOutcome threshold_partition(const ThresholdQuery& query, StochasticOracle& oracle,
                                     SampleLedger& ledger, const BanditOptions& options = {});

struct SmallestQuery {
  PointId anchor = 0;
  std::span<const PointId> candidates;
  double delta = 0.1;
  std::size_t union_denominator = 1;
};

struct SmallestOutcome : BanditStats {
  PointId best = 0;
};

// Successive elimination over the candidates; returns argmin_j d(anchor, j)
// with probability >= 1 - delta. A singleton set costs no oracle calls.
SmallestOutcome find_smallest_in_set(const SmallestQuery& query, StochasticOracle& oracle,
                                     SampleLedger& ledger, const BanditOptions& options = {});

}  // namespace bct
