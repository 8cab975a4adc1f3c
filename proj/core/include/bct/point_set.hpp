#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bct/types.hpp"

namespace bct {

// Row-major collection of equal-dimension real vectors, indexed 0..n-1.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim);

  // Throws std::invalid_argument on ragged rows or zero dimension.
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  PointId add(std::span<const double> coords);
  void append(const PointSet& other);

  // First `count` points, in order.
  PointSet prefix(std::size_t count) const;

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](PointId i) const;
  std::span<const double> at(PointId i) const;

  const std::vector<double>& raw() const noexcept { return coords_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double squared_euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace bct
