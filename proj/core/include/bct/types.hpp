#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bct {

// Dense index into the oracle's point universe.
using PointId = std::uint32_t;

// Cover-tree level; level i is a cover at resolution 2^i.
using Level = int;

// An algorithm was called outside its documented preconditions.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A point index outside the universe.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A statistic was requested for a pair that has never been sampled.
class NoDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  NotFoundError(PointId id, const std::string& what)
      : std::runtime_error(what), id_(id) {}
  PointId point() const noexcept { return id_; }

 private:
  PointId id_;
};

// Insertion descended to the level floor: the point coincides with one
// already in the tree.
class DuplicatePointError : public std::runtime_error {
 public:
  DuplicatePointError(PointId id, const std::string& what)
      : std::runtime_error(what), id_(id) {}
  PointId point() const noexcept { return id_; }

 private:
  PointId id_;
};

}  // namespace bct
