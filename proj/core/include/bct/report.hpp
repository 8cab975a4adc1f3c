#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "bct/types.hpp"

namespace bct {

enum class Outcome { success, capped, error };

std::string_view to_string(Outcome outcome);

// Per-level search trace: the candidate set Q, the kept set, and the
// oracle calls spent at that level.
struct LevelTrace {
  Level level = 0;
  std::size_t candidates = 0;
  std::size_t kept = 0;
  std::uint64_t oracle_calls = 0;

  friend bool operator==(const LevelTrace&, const LevelTrace&) = default;
};

struct RunReport {
  std::uint64_t total_oracle_calls = 0;
  std::vector<LevelTrace> per_level;
  double wall_time_ms = 0.0;
  Outcome outcome = Outcome::success;
  std::uint64_t seed = 0;

  void mark_capped(bool capped) {
    if (capped && outcome == Outcome::success) outcome = Outcome::capped;
  }
};

}  // namespace bct
