#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>

#include "bct/types.hpp"

namespace bct {

struct PairStats {
  double sum = 0.0;
  std::uint64_t count = 0;

  // Requires count >= 1.
  double mean() const { return sum / static_cast<double>(count); }
};

// Running sums and pull counts per unordered point pair. Shared across the
// recursive calls of insert and remove so that samples collected at one
// level are reused at the next.
class SampleLedger {
 public:
  // Throws ContractViolation for a non-finite sample.
  void record(PointId a, PointId b, double sample);

  // Adds a batch of samples (sum and count) for one pair.
  void add(PointId a, PointId b, const PairStats& delta);

  void merge(const SampleLedger& other);

  // Throws NoDataError when the pair has no samples.
  double mean(PointId a, PointId b) const;
  std::uint64_t count(PointId a, PointId b) const;

  // Zero-count stats for unseen pairs.
  PairStats stats(PointId a, PointId b) const;

  std::uint64_t total_count() const noexcept { return total_; }
  std::size_t pairs() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  void clear();

 private:
  static std::uint64_t key(PointId a, PointId b) noexcept;

  std::unordered_map<std::uint64_t, PairStats> entries_;
  std::uint64_t total_ = 0;
};

}  // namespace bct
