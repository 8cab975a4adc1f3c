#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "bct/point_set.hpp"

namespace bct {

enum class DatasetKind { uniform_cube, gaussian_mixture, line, two_clusters, low_dim_subspace };

std::string_view to_string(DatasetKind kind);
// Accepts the hyphenated names ("uniform-cube", ...). Throws
// std::invalid_argument otherwise.
DatasetKind parse_dataset_kind(std::string_view name);

struct DatasetParams {
  // uniform-cube and low-dim-subspace: side of the (latent) cube.
  double scale = 10.0;
  // line: distance between consecutive points.
  double spacing = 1.0;
  // gaussian-mixture
  std::size_t components = 8;
  double center_spread = 20.0;
  double component_std = 2.0;
  // two-clusters: centers `separation` apart along the first axis, points
  // uniform in balls of `radius`.
  double separation = 100.0;
  double radius = 0.1;
  // low-dim-subspace
  std::size_t intrinsic_dim = 2;
};

// Deterministic in (kind, n, dim, params, seed). Points are pairwise
// distinct; colliding draws are resampled. Throws std::invalid_argument for
// n == 0 or dim == 0.
PointSet generate_dataset(DatasetKind kind, std::size_t n, std::size_t dim,
                          const DatasetParams& params, std::uint64_t seed);

// splitmix64 finalizer of root + golden_gamma * (index + 1); used for every
// per-trial and per-point seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

}  // namespace bct
