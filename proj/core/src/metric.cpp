#include "bct/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace bct {

EuclideanMetric::EuclideanMetric(std::shared_ptr<const PointSet> points)
    : points_(std::move(points)) {
  if (!points_) throw std::invalid_argument("null point set");
}

double EuclideanMetric::distance(PointId i, PointId j) const {
  return euclidean_distance(points_->at(i), points_->at(j));
}

SquaredEuclideanMetric::SquaredEuclideanMetric(std::shared_ptr<const PointSet> points)
    : points_(std::move(points)) {
  if (!points_) throw std::invalid_argument("null point set");
}

double SquaredEuclideanMetric::distance(PointId i, PointId j) const {
  return squared_euclidean_distance(points_->at(i), points_->at(j));
}

MatrixMetric::MatrixMetric(std::vector<std::vector<double>> rows) : n_(rows.size()) {
  table_.reserve(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != n_) throw std::invalid_argument("distance matrix must be square");
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = rows[i][j];
      if (!std::isfinite(d) || d < 0.0) throw std::invalid_argument("invalid distance entry");
      if (i == j && d != 0.0) throw std::invalid_argument("nonzero diagonal entry");
      if (j < i && d != rows[j][i]) throw std::invalid_argument("distance matrix not symmetric");
      table_.push_back(d);
    }
  }
}

double MatrixMetric::distance(PointId i, PointId j) const {
  if (i >= n_ || j >= n_) throw IndexError("point index out of range");
  return table_[static_cast<std::size_t>(i) * n_ + j];
}

}  // namespace bct
