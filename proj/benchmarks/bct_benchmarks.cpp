#include <benchmark/benchmark.h>

#include <memory>

#include "bct/bandits.hpp"
#include "bct/datasets.hpp"
#include "bct/insert.hpp"
#include "bct/nn_graph.hpp"
#include "bct/search.hpp"

namespace {

using namespace bct;

struct Fixture {
  std::shared_ptr<const Metric> metric;
  std::size_t n = 0;
  std::size_t queries = 0;
};

// n data points followed by `queries` held-out points.
Fixture make_fixture(std::size_t n, std::size_t queries, std::size_t dim) {
  auto points = std::make_shared<const PointSet>(
      generate_dataset(DatasetKind::gaussian_mixture, n + queries, dim, {}, 17));
  return {std::make_shared<EuclideanMetric>(points), n, queries};
}

void BM_BuildNoisy(benchmark::State& state) {
  const auto fx = make_fixture(static_cast<std::size_t>(state.range(0)), 0, 4);
  std::uint64_t calls = 0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    GaussianOracle oracle(fx.metric, 1.0, ++seed);
    const auto built = build(fx.n, 0.1, oracle);
    calls += built.report.total_oracle_calls;
    benchmark::DoNotOptimize(built.tree.size());
  }
  state.counters["oracle_calls"] =
      benchmark::Counter(static_cast<double>(calls), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_BuildNoisy)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void query_benchmark(benchmark::State& state, bool noisy, std::optional<double> epsilon) {
  const auto fx = make_fixture(static_cast<std::size_t>(state.range(0)), 64, 4);
  ExactOracle exact(fx.metric);
  const CoverTree tree = build(fx.n, 0.1, exact).tree;
  GaussianOracle gaussian(fx.metric, 1.0, 5);
  StochasticOracle& oracle = noisy ? static_cast<StochasticOracle&>(gaussian) : exact;
  SearchConfig config;
  config.epsilon_approx = epsilon;
  std::uint64_t calls = 0;
  std::size_t k = 0;
  for (auto _ : state) {
    const auto q = static_cast<PointId>(fx.n + k++ % fx.queries);
    const auto r = epsilon ? find_nearest_approx(tree, q, config, oracle)
                           : find_nearest(tree, q, config, oracle);
    calls += r.report.total_oracle_calls;
    benchmark::DoNotOptimize(r.nn);
  }
  state.counters["oracle_calls"] =
      benchmark::Counter(static_cast<double>(calls), benchmark::Counter::kAvgIterations);
}

void BM_QueryExact(benchmark::State& state) { query_benchmark(state, false, std::nullopt); }
void BM_QueryNoisy(benchmark::State& state) { query_benchmark(state, true, std::nullopt); }
void BM_QueryApprox(benchmark::State& state) { query_benchmark(state, true, 1.0); }
BENCHMARK(BM_QueryExact)->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(BM_QueryNoisy)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QueryApprox)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

// Identify-cover with and without the gamma slack in the lower threshold.
// Arm 5 sits exactly at d* + eps, so without the slack only the pull cap
// settles it.
void BM_IdentifyCover(benchmark::State& state) {
  const bool variant = state.range(0) != 0;
  const std::size_t arms = 12;
  std::vector<std::vector<double>> table(arms + 1, std::vector<double>(arms + 1, 0.0));
  for (std::size_t a = 1; a <= arms; ++a) {
    const double d = 1.0 + 0.25 * static_cast<double>(a);
    table[0][a] = table[a][0] = d;
    for (std::size_t b = 1; b <= arms; ++b) {
      if (a != b) table[a][b] = d + 1.0 + 0.25 * static_cast<double>(b);
    }
  }
  const auto metric = std::make_shared<MatrixMetric>(std::move(table));
  std::vector<PointId> ids;
  for (std::size_t a = 1; a <= arms; ++a) ids.push_back(static_cast<PointId>(a));
  BanditOptions options;
  options.lt_variant = variant;
  options.t_max = 20000;
  std::uint64_t calls = 0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    GaussianOracle oracle(metric, 1.0, ++seed);
    SampleLedger ledger;
    const auto out = identify_cover({0, ids, 1.0, 0.5, 0.1, ids.size()}, oracle, ledger, options);
    calls += out.oracle_calls;
    benchmark::DoNotOptimize(out.selected.size());
  }
  state.SetLabel(variant ? "lt_variant" : "default");
  state.counters["oracle_calls"] =
      benchmark::Counter(static_cast<double>(calls), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_IdentifyCover)->Arg(0)->Arg(1);

void BM_NNGraphExact(benchmark::State& state) {
  const auto fx = make_fixture(static_cast<std::size_t>(state.range(0)), 0, 4);
  for (auto _ : state) {
    ExactOracle oracle(fx.metric);
    benchmark::DoNotOptimize(build_nn_graph(fx.n, 0.1, oracle).graph.edges.size());
  }
}
BENCHMARK(BM_NNGraphExact)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
