#include "bct/point_set.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bct {

PointSet::PointSet(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("point dimension must be positive");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  PointSet set(rows.front().size());
  for (const auto& row : rows) set.add(row);
  return set;
}

PointId PointSet::add(std::span<const double> coords) {
  if (dim_ == 0) {
    if (coords.empty()) throw std::invalid_argument("point dimension must be positive");
    dim_ = coords.size();
  }
  if (coords.size() != dim_) {
    throw std::invalid_argument("point has dimension " + std::to_string(coords.size()) +
                                ", expected " + std::to_string(dim_));
  }
  const auto id = static_cast<PointId>(size());
  coords_.insert(coords_.end(), coords.begin(), coords.end());
  return id;
}

void PointSet::append(const PointSet& other) {
  if (other.empty()) return;
  if (dim_ == 0) dim_ = other.dim_;
  if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch in append");
  coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
}

PointSet PointSet::prefix(std::size_t count) const {
  if (count > size()) throw std::invalid_argument("prefix longer than point set");
  PointSet out;
  out.dim_ = dim_;
  out.coords_.assign(coords_.begin(), coords_.begin() + static_cast<std::ptrdiff_t>(count * dim_));
  return out;
}

std::span<const double> PointSet::operator[](PointId i) const {
  return {coords_.data() + static_cast<std::size_t>(i) * dim_, dim_};
}

std::span<const double> PointSet::at(PointId i) const {
  if (i >= size()) throw IndexError("point index " + std::to_string(i) + " out of range");
  return (*this)[i];
}

double squared_euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_euclidean_distance(a, b));
}

}  // namespace bct
