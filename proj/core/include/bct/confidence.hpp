#pragma once

#include <cstdint>

namespace bct {

// Anytime confidence width
//
//   C(t) = sigma * sqrt(4 ln(log2(2t) / delta) / t),
//
// valid simultaneously for every sample count t >= 1 with probability at
// least 1 - delta for 1-sub-Gaussian noise rescaled by sigma.
class ConfidenceSchedule {
 public:
  // Throws ContractViolation unless 0 < delta < 1 and sigma >= 0.
  explicit ConfidenceSchedule(double delta, double sigma = 1.0);

  // Throws ContractViolation for t == 0.
  double width(std::uint64_t t) const;

  // Smallest t given by the closed-form inversion
  //   t = ceil((4 / g^2) ln((2 / delta) log2(12 / (delta g^2)))),  g = gap / sigma,
  // after which width(t) <= gap. Requires delta < 2 e^{-e/2} and g <= 2.
  std::uint64_t sufficient_samples(double gap) const;

  double delta() const noexcept { return delta_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double delta_;
  double sigma_;
};

}  // namespace bct
