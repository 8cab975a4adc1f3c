#include "bct/ledger.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace bct {

std::uint64_t SampleLedger::key(PointId a, PointId b) noexcept {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void SampleLedger::record(PointId a, PointId b, double sample) {
  if (!std::isfinite(sample)) throw ContractViolation("non-finite sample");
  auto& e = entries_[key(a, b)];
  e.sum += sample;
  ++e.count;
  ++total_;
}

void SampleLedger::add(PointId a, PointId b, const PairStats& delta) {
  if (delta.count == 0) return;
  auto& e = entries_[key(a, b)];
  e.sum += delta.sum;
  e.count += delta.count;
  total_ += delta.count;
}

void SampleLedger::merge(const SampleLedger& other) {
  for (const auto& [k, s] : other.entries_) {
    auto& e = entries_[k];
    e.sum += s.sum;
    e.count += s.count;
  }
  total_ += other.total_;
}

double SampleLedger::mean(PointId a, PointId b) const {
  const auto it = entries_.find(key(a, b));
  if (it == entries_.end() || it->second.count == 0) {
    throw NoDataError("no samples for pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  return it->second.mean();
}

std::uint64_t SampleLedger::count(PointId a, PointId b) const {
  const auto it = entries_.find(key(a, b));
  return it == entries_.end() ? 0 : it->second.count;
}

PairStats SampleLedger::stats(PointId a, PointId b) const {
  const auto it = entries_.find(key(a, b));
  return it == entries_.end() ? PairStats{} : it->second;
}

void SampleLedger::clear() {
  entries_.clear();
  total_ = 0;
}

}  // namespace bct
