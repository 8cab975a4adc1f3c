#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>

#include "bct/metric.hpp"
#include "bct/point_set.hpp"
#include "bct/types.hpp"

namespace bct {

enum class OracleKind { exact, gaussian, subsample };

std::string_view to_string(OracleKind kind);
// Throws std::invalid_argument for unknown names.
OracleKind parse_oracle_kind(std::string_view name);

struct OracleConfig {
  OracleKind kind = OracleKind::exact;
  // Sub-Gaussian scale, in distance units. For the subsample oracle this is
  // the caller-declared effective scale of its estimates.
  double sigma = 1.0;
  // Coordinates drawn per subsample query; 0 means "all coordinates".
  std::size_t subsample_len = 0;
  std::uint64_t seed = 0;
};

// Source of noisy, unbiased distance samples: query(i, j) yields
// d(i, j) + eta with E[eta] = 0. This is the only distance channel the
// tree algorithms use.
//
// Not thread-safe. Concurrent use requires one instance per thread.
class StochasticOracle {
 public:
  virtual ~StochasticOracle() = default;

  // Throws IndexError for an index outside the universe and
  // ContractViolation when i == j. Samples are not clamped and may be
  // negative.
  double query(PointId i, PointId j);

  std::uint64_t calls() const noexcept { return calls_; }
  virtual std::size_t size() const = 0;

  // Noise scale used to size confidence widths.
  virtual double sigma() const = 0;

  // True when every sample equals the underlying distance.
  virtual bool noiseless() const = 0;

  virtual void reseed(std::uint64_t seed) = 0;

 protected:
  virtual double draw(PointId i, PointId j) = 0;

 private:
  std::uint64_t calls_ = 0;
};

class ExactOracle final : public StochasticOracle {
 public:
  explicit ExactOracle(std::shared_ptr<const Metric> metric);

  std::size_t size() const override { return metric_->size(); }
  double sigma() const override { return 0.0; }
  bool noiseless() const override { return true; }
  void reseed(std::uint64_t) override {}

 protected:
  double draw(PointId i, PointId j) override;

 private:
  std::shared_ptr<const Metric> metric_;
};

// Additive N(0, sigma^2) noise on top of an exact metric.
class GaussianOracle final : public StochasticOracle {
 public:
  GaussianOracle(std::shared_ptr<const Metric> metric, double sigma, std::uint64_t seed);

  std::size_t size() const override { return metric_->size(); }
  double sigma() const override { return sigma_; }
  bool noiseless() const override { return sigma_ == 0.0; }
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }

 protected:
  double draw(PointId i, PointId j) override;

 private:
  std::shared_ptr<const Metric> metric_;
  double sigma_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
};

// Coordinate-subsampling estimator of the squared Euclidean distance:
// draws `len` coordinates uniformly with replacement and returns
// (L / len) * sum (x_k - y_k)^2. With len >= L every coordinate is used and
// the estimate is exact.
class SubsampleOracle final : public StochasticOracle {
 public:
  SubsampleOracle(std::shared_ptr<const PointSet> points, std::size_t len,
                  double effective_sigma, std::uint64_t seed);

  std::size_t size() const override { return points_->size(); }
  double sigma() const override { return noiseless() ? 0.0 : sigma_; }
  bool noiseless() const override { return len_ >= points_->dim(); }
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }

 protected:
  double draw(PointId i, PointId j) override;

 private:
  std::shared_ptr<const PointSet> points_;
  std::size_t len_;
  double sigma_;
  std::mt19937_64 rng_;
};

std::unique_ptr<StochasticOracle> make_oracle(const OracleConfig& config,
                                              std::shared_ptr<const PointSet> points);

// The exact dissimilarity whose noisy samples `config` produces.
std::shared_ptr<const Metric> surrogate_metric(const OracleConfig& config,
                                               std::shared_ptr<const PointSet> points);

}  // namespace bct
