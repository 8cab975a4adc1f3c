#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "bct/point_set.hpp"
#include "bct/types.hpp"

namespace bct {

// Exact dissimilarity over a point universe. Only oracles and the harness
// hold one; tree algorithms never see it.
class Metric {
 public:
  virtual ~Metric() = default;
  virtual double distance(PointId i, PointId j) const = 0;
  virtual std::size_t size() const = 0;
};

class EuclideanMetric final : public Metric {
 public:
  explicit EuclideanMetric(std::shared_ptr<const PointSet> points);
  double distance(PointId i, PointId j) const override;
  std::size_t size() const override { return points_->size(); }
  const PointSet& points() const { return *points_; }

 private:
  std::shared_ptr<const PointSet> points_;
};

// Surrogate used with the subsampling oracle, whose samples are unbiased
// for the squared distance.
class SquaredEuclideanMetric final : public Metric {
 public:
  explicit SquaredEuclideanMetric(std::shared_ptr<const PointSet> points);
  double distance(PointId i, PointId j) const override;
  std::size_t size() const override { return points_->size(); }

 private:
  std::shared_ptr<const PointSet> points_;
};

// Opaque index universe with an explicit symmetric distance table.
class MatrixMetric final : public Metric {
 public:
  // `rows` must be square and symmetric with a zero diagonal.
  explicit MatrixMetric(std::vector<std::vector<double>> rows);
  double distance(PointId i, PointId j) const override;
  std::size_t size() const override { return n_; }

 private:
  std::size_t n_;
  std::vector<double> table_;
};

}  // namespace bct
