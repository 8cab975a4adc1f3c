#include "bct/oracle.hpp"

#include <stdexcept>
#include <string>

namespace bct {

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::exact: return "exact";
    case OracleKind::gaussian: return "gaussian";
    case OracleKind::subsample: return "subsample";
  }
  return "unknown";
}

OracleKind parse_oracle_kind(std::string_view name) {
  if (name == "exact") return OracleKind::exact;
  if (name == "gaussian") return OracleKind::gaussian;
  if (name == "subsample") return OracleKind::subsample;
  throw std::invalid_argument("unknown oracle kind '" + std::string(name) + "'");
}

double StochasticOracle::query(PointId i, PointId j) {
  const auto n = size();
  if (i >= n || j >= n) {
    throw IndexError("oracle query (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") outside universe of size " + std::to_string(n));
  }
  if (i == j) throw ContractViolation("oracle queried for a self-distance");
  ++calls_;
  return draw(i, j);
}

ExactOracle::ExactOracle(std::shared_ptr<const Metric> metric) : metric_(std::move(metric)) {
  if (!metric_) throw std::invalid_argument("null metric");
}

double ExactOracle::draw(PointId i, PointId j) { return metric_->distance(i, j); }

GaussianOracle::GaussianOracle(std::shared_ptr<const Metric> metric, double sigma,
                               std::uint64_t seed)
    : metric_(std::move(metric)), sigma_(sigma), rng_(seed) {
  if (!metric_) throw std::invalid_argument("null metric");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
}

double GaussianOracle::draw(PointId i, PointId j) {
  const double d = metric_->distance(i, j);
  if (sigma_ == 0.0) return d;
  return d + sigma_ * noise_(rng_);
}

SubsampleOracle::SubsampleOracle(std::shared_ptr<const PointSet> points, std::size_t len,
                                 double effective_sigma, std::uint64_t seed)
    : points_(std::move(points)), len_(len), sigma_(effective_sigma), rng_(seed) {
  if (!points_) throw std::invalid_argument("null point set");
  if (len_ == 0) len_ = points_->dim();
  if (!(sigma_ >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
}

double SubsampleOracle::draw(PointId i, PointId j) {
  const auto a = (*points_)[i];
  const auto b = (*points_)[j];
  const std::size_t dim = points_->dim();
  if (len_ >= dim) return squared_euclidean_distance(a, b);

  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
  double s = 0.0;
  for (std::size_t k = 0; k < len_; ++k) {
    const std::size_t c = pick(rng_);
    const double diff = a[c] - b[c];
    s += diff * diff;
  }
  return s * static_cast<double>(dim) / static_cast<double>(len_);
}

std::unique_ptr<StochasticOracle> make_oracle(const OracleConfig& config,
                                              std::shared_ptr<const PointSet> points) {
  switch (config.kind) {
    case OracleKind::exact:
      return std::make_unique<ExactOracle>(surrogate_metric(config, points));
    case OracleKind::gaussian:
      return std::make_unique<GaussianOracle>(surrogate_metric(config, points), config.sigma,
                                              config.seed);
    case OracleKind::subsample:
      return std::make_unique<SubsampleOracle>(std::move(points), config.subsample_len,
                                               config.sigma, config.seed);
  }
  throw std::invalid_argument("unknown oracle kind");
}

std::shared_ptr<const Metric> surrogate_metric(const OracleConfig& config,
                                               std::shared_ptr<const PointSet> points) {
  if (config.kind == OracleKind::subsample) {
    return std::make_shared<SquaredEuclideanMetric>(std::move(points));
  }
  return std::make_shared<EuclideanMetric>(std::move(points));
}

}  // namespace bct
