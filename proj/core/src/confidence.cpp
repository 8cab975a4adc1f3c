#include "bct/confidence.hpp"

#include <cmath>

#include "bct/types.hpp"

namespace bct {

ConfidenceSchedule::ConfidenceSchedule(double delta, double sigma)
    : delta_(delta), sigma_(sigma) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ContractViolation("confidence delta must lie in (0, 1)");
  }
  if (!(sigma >= 0.0)) throw ContractViolation("confidence sigma must be nonnegative");
}

double ConfidenceSchedule::width(std::uint64_t t) const {
  if (t == 0) throw ContractViolation("confidence width needs at least one sample");
  const double tt = static_cast<double>(t);
  return sigma_ * std::sqrt(4.0 * std::log(std::log2(2.0 * tt) / delta_) / tt);
}

std::uint64_t ConfidenceSchedule::sufficient_samples(double gap) const {
  if (!(gap > 0.0)) throw ContractViolation("gap must be positive");
  if (sigma_ == 0.0) return 1;
  const double g = gap / sigma_;
  const double t = (4.0 / (g * g)) * std::log((2.0 / delta_) * std::log2(12.0 / (delta_ * g * g)));
  return t <= 1.0 ? 1 : static_cast<std::uint64_t>(std::ceil(t));
}

}  // namespace bct
