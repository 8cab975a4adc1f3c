#include "bct/datasets.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace bct {
namespace {

using Rng = std::mt19937_64;

std::vector<double> uniform_ball(Rng& rng, std::size_t dim, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : v) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  const double scale = radius * std::pow(unit(rng), 1.0 / static_cast<double>(dim)) / std::sqrt(norm);
  for (double& x : v) x *= scale;
  return v;
}

// Columns of a random dim x k matrix with orthonormal columns.
std::vector<std::vector<double>> random_frame(Rng& rng, std::size_t dim, std::size_t k) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> cols;
  while (cols.size() < k) {
    std::vector<double> v(dim);
    for (double& x : v) x = normal(rng);
    for (const auto& c : cols) {
      double dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += v[i] * c[i];
      for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * c[i];
    }
    double norm = 0.0;
    for (const double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-9) continue;
    for (double& x : v) x /= norm;
    cols.push_back(std::move(v));
  }
  return cols;
}

}  // namespace

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::uniform_cube: return "uniform-cube";
    case DatasetKind::gaussian_mixture: return "gaussian-mixture";
    case DatasetKind::line: return "line";
    case DatasetKind::two_clusters: return "two-clusters";
    case DatasetKind::low_dim_subspace: return "low-dim-subspace";
  }
  return "unknown";
}

DatasetKind parse_dataset_kind(std::string_view name) {
  for (const auto kind : {DatasetKind::uniform_cube, DatasetKind::gaussian_mixture,
                          DatasetKind::line, DatasetKind::two_clusters,
                          DatasetKind::low_dim_subspace}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown dataset kind '" + std::string(name) + "'");
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PointSet generate_dataset(DatasetKind kind, std::size_t n, std::size_t dim,
                          const DatasetParams& params, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("dataset needs at least one point");
  if (dim == 0) throw std::invalid_argument("dataset needs at least one dimension");

  Rng rng(seed);
  PointSet out(dim);

  if (kind == DatasetKind::line) {
    if (!(params.spacing > 0.0)) throw std::invalid_argument("line spacing must be positive");
    std::vector<double> v(dim, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      v[0] = static_cast<double>(k) * params.spacing;
      out.add(v);
    }
    return out;
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> centers;
  std::vector<std::vector<double>> frame;
  if (kind == DatasetKind::gaussian_mixture) {
    if (params.components == 0) throw std::invalid_argument("mixture needs a component");
    for (std::size_t c = 0; c < params.components; ++c) {
      std::vector<double> center(dim);
      for (double& x : center) x = params.center_spread * unit(rng);
      centers.push_back(std::move(center));
    }
  } else if (kind == DatasetKind::low_dim_subspace) {
    if (params.intrinsic_dim == 0 || params.intrinsic_dim > dim) {
      throw std::invalid_argument("intrinsic dimension must lie in [1, dim]");
    }
    frame = random_frame(rng, dim, params.intrinsic_dim);
  }

  std::set<std::vector<double>> seen;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, centers.empty() ? 0 : centers.size() - 1);
  while (out.size() < n) {
    std::vector<double> v(dim, 0.0);
    switch (kind) {
      case DatasetKind::uniform_cube:
        for (double& x : v) x = params.scale * unit(rng);
        break;
      case DatasetKind::gaussian_mixture: {
        const auto& center = centers[pick(rng)];
        for (std::size_t i = 0; i < dim; ++i) v[i] = center[i] + params.component_std * normal(rng);
        break;
      }
      case DatasetKind::two_clusters: {
        v = uniform_ball(rng, dim, params.radius);
        if (out.size() % 2 == 1) v[0] += params.separation;
        break;
      }
      case DatasetKind::low_dim_subspace:
        for (const auto& col : frame) {
          const double t = params.scale * unit(rng);
          for (std::size_t i = 0; i < dim; ++i) v[i] += t * col[i];
        }
        break;
      case DatasetKind::line:
        break;
    }
    if (seen.insert(v).second) out.add(v);
  }
  return out;
}

}  // namespace bct
