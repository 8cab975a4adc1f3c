// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bct/bandits.hpp"
#include "bct/confidence.hpp"
#include "bct/datasets.hpp"
#include "bct/experiment.hpp"
#include "bct/ground_truth.hpp"
#include "bct/insert.hpp"
#include "bct/invariants.hpp"
#include "bct/nn_graph.hpp"
#include "bct/remove.hpp"
#include "bct/search.hpp"

namespace {

using namespace bct;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::shared_ptr<const Metric> euclid(const PointSet& points) {
  return std::make_shared<EuclideanMetric>(std::make_shared<const PointSet>(points));
}

std::vector<PointId> iota(std::size_t n) {
  std::vector<PointId> ids(n);
  for (std::size_t k = 0; k < n; ++k) ids[k] = static_cast<PointId>(k);
  return ids;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

// 1. Exact oracle: search returns the brute-force neighbor every time.
Verdict exact_equivalence() {
  const DatasetKind kinds[] = {DatasetKind::uniform_cube, DatasetKind::gaussian_mixture,
                               DatasetKind::line, DatasetKind::two_clusters,
                               DatasetKind::low_dim_subspace};
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> size(2, 512);
  std::uniform_int_distribution<std::size_t> dims(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int instances = 0;
  int right = 0;
  for (const auto kind : kinds) {
    for (int k = 0; k < 100; ++k, ++instances) {
      const std::size_t n = size(rng);
      std::size_t dim = dims(rng);
      DatasetParams params;
      if (kind == DatasetKind::low_dim_subspace) {
        dim = std::max<std::size_t>(dim, 2);
        params.intrinsic_dim = 1 + rng() % dim;
      }
      PointSet all = generate_dataset(kind, n + 1, dim, params, rng());
      if (kind == DatasetKind::line) {
        // The held-out line point sits on the lattice; use an off-lattice query.
        PointSet data = all.prefix(n);
        std::vector<double> q(dim, 0.0);
        q[0] = unit(rng) * static_cast<double>(n + 1) - 1.0;
        data.add(q);
        all = std::move(data);
      }
      const auto metric = euclid(all);
      ExactOracle oracle(metric);
      const auto tree = build(n, 0.1, oracle).tree;
      const auto q = static_cast<PointId>(n);
      right += find_nearest(tree, q, {}, oracle).nn == brute_force_nn(*metric, iota(n), q);
    }
  }
  return {right == instances, fmt("%.0f/%.0f instances matched brute force", right, instances)};
}

// 2. Noisy search accuracy at delta = 0.1.
Verdict search_accuracy() {
  ExperimentSpec spec;
  spec.dataset.kind = DatasetKind::gaussian_mixture;
  spec.dataset.n = 256;
  spec.dataset.dim = 8;
  spec.dataset.seed = 2;
  spec.oracle = {OracleKind::gaussian, 1.0, 0, 22};
  spec.operation = Operation::query;
  spec.delta = 0.1;
  spec.trials = 200;
  spec.seed = 202;
  const auto result = run_experiment(spec);
  const double bar = 0.9 - 3.0 * std::sqrt(0.9 * 0.1 / 200.0);
  return {result.summary.success_rate >= bar,
          fmt("success %.3f (bar %.3f), median calls %.0f", result.summary.success_rate, bar,
              result.summary.median_calls)};
}

// 3. Invariants after noisy and exact builds.
Verdict construction_validity() {
  DatasetParams params;
  params.scale = 10.0;
  int noisy_ok = 0;
  int exact_ok = 0;
  for (std::uint64_t run = 0; run < 50; ++run) {
    const auto metric =
        euclid(generate_dataset(DatasetKind::uniform_cube, 32, 2, params, derive_seed(303, run)));
    GaussianOracle noisy(metric, 1.0, derive_seed(304, run));
    noisy_ok += check_invariants(build(32, 0.1, noisy).tree, *metric).ok;
    ExactOracle exact(metric);
    exact_ok += check_invariants(build(32, 0.1, exact).tree, *metric).ok;
  }
  return {noisy_ok >= 41 && exact_ok == 50,
          fmt("noisy %.0f/50 (need 41), exact %.0f/50", noisy_ok, exact_ok)};
}

// 4. One explicit node per point after builds and under insert/remove churn.
Verdict memory() {
  DatasetParams params;
  params.scale = 20.0;
  int checks = 0;
  int failures = 0;
  for (std::uint64_t run = 0; run < 10; ++run) {
    const std::size_t universe = 80;
    const auto metric = euclid(
        generate_dataset(DatasetKind::uniform_cube, universe, 2, params, derive_seed(404, run)));
    GaussianOracle oracle(metric, 1.0, derive_seed(405, run));
    const std::size_t start = 40;
    CoverTree tree = build(start, 0.1, oracle).tree;
    ++checks;
    failures += tree.explicit_node_count() != start;

    std::mt19937_64 rng(derive_seed(406, run));
    std::vector<PointId> in = iota(start);
    std::vector<PointId> out;
    for (std::size_t k = start; k < universe; ++k) out.push_back(static_cast<PointId>(k));
    for (int step = 0; step < 100; ++step) {
      SampleLedger ledger;
      const bool grow = in.size() < 2 || (!out.empty() && rng() % 2 == 0);
      if (grow) {
        const std::size_t k = rng() % out.size();
        insert(tree, out[k], 0.1 / static_cast<double>(tree.size() + 1), oracle, ledger);
        in.push_back(out[k]);
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        const std::size_t k = rng() % in.size();
        remove(tree, in[k], 0.1, oracle, ledger);
        out.push_back(in[k]);
        in.erase(in.begin() + static_cast<std::ptrdiff_t>(k));
      }
      ++checks;
      failures += tree.explicit_node_count() != in.size() || tree.size() != in.size();
    }
  }
  return {failures == 0, fmt("%.0f/%.0f checks with node count == point count", checks - failures,
                             checks)};
}

// 5. Identify-cover keeps every eps-good arm and nothing beyond eps + gamma.
Verdict cover_sandwich() {
  const double delta = 0.1;
  const int runs = 500;
  std::mt19937_64 gen(505);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_real_distribution<double> dist(0.0, 4.0), eps(0.25, 1.5), frac(0.25, 1.0);
  int held = 0;
  for (int r = 0; r < runs; ++r) {
    const std::size_t m = size(gen);
    std::vector<std::vector<double>> table(m + 1, std::vector<double>(m + 1, 0.0));
    std::vector<double> d(m);
    for (double& x : d) x = dist(gen);
    for (std::size_t a = 1; a <= m; ++a) {
      table[0][a] = table[a][0] = d[a - 1];
      for (std::size_t b = 1; b <= m; ++b) {
        if (a != b) table[a][b] = d[a - 1] + d[b - 1];
      }
    }
    const double e = eps(gen);
    const double g = e * frac(gen);
    GaussianOracle oracle(std::make_shared<MatrixMetric>(std::move(table)), 1.0,
                          derive_seed(506, static_cast<std::uint64_t>(r)));
    std::vector<PointId> ids;
    for (std::size_t a = 1; a <= m; ++a) ids.push_back(static_cast<PointId>(a));
    SampleLedger ledger;
    const auto out = identify_cover({0, ids, e, g, delta, ids.size()}, oracle, ledger);

    const double best = *std::min_element(d.begin(), d.end());
    const std::set<PointId> got(out.selected.begin(), out.selected.end());
    bool ok = true;
    for (std::size_t a = 1; a <= m; ++a) {
      const bool kept = got.count(static_cast<PointId>(a)) > 0;
      if (d[a - 1] <= best + e && !kept) ok = false;
      if (d[a - 1] > best + e + g && kept) ok = false;
    }
    held += ok;
  }
  const double bar = 1.0 - delta - 3.0 * std::sqrt(delta * (1.0 - delta) / runs);
  return {held >= bar * runs, fmt("%.0f/%.0f runs contained (bar %.3f)", held, runs, bar)};
}

ExperimentSpec two_cluster_spec(Operation op) {
  ExperimentSpec spec;
  spec.dataset.kind = DatasetKind::two_clusters;
  spec.dataset.n = 64;
  spec.dataset.dim = 2;
  spec.dataset.params.separation = 100.0;
  spec.dataset.params.radius = 10.0;
  spec.dataset.seed = 6;
  spec.oracle = {OracleKind::gaussian, 1.0, 0, 66};
  spec.operation = op;
  spec.delta = 0.1;
  if (op == Operation::approx) spec.epsilon = 1.0;
  spec.trials = 500;
  spec.seed = 606;
  return spec;
}

// 6. Approximate search: within (1 + eps) often enough, and cheaper than
// exact search on the same trees and trial seeds.
Verdict approximate_search() {
  const auto approx = run_experiment(two_cluster_spec(Operation::approx));
  const auto exact = run_experiment(two_cluster_spec(Operation::query));
  std::vector<double> approx_calls;
  std::vector<double> exact_calls;
  for (const auto& r : approx.reports) approx_calls.push_back(static_cast<double>(r.run.total_oracle_calls));
  for (const auto& r : exact.reports) exact_calls.push_back(static_cast<double>(r.run.total_oracle_calls));
  const double ma = median(approx_calls);
  const double me = median(exact_calls);
  const double rate = approx.summary.success_rate;
  return {rate >= 0.86 && ma < me,
          fmt("within 2x in %.3f of runs (need 0.86); median calls approx %.0f vs exact %.0f", rate,
              ma, me)};
}

// 7. Nearest-neighbor graph matches brute force.
Verdict nn_graph() {
  DatasetParams params;
  params.scale = 100.0;
  int noisy = 0;
  int exact = 0;
  for (std::uint64_t run = 0; run < 20; ++run) {
    const auto metric =
        euclid(generate_dataset(DatasetKind::uniform_cube, 128, 2, params, derive_seed(707, run)));
    const auto truth = brute_force_nn_graph(*metric, iota(128));
    GaussianOracle oracle(metric, 1.0, derive_seed(708, run));
    noisy += build_nn_graph(128, 0.1, oracle).graph == truth;
    ExactOracle exact_oracle(metric);
    exact += build_nn_graph(128, 0.1, exact_oracle).graph == truth;
  }
  return {noisy >= 16 && exact == 20, fmt("noisy %.0f/20 (need 16), exact %.0f/20", noisy, exact)};
}

// 8. Query cost grows sublinearly in n.
Verdict scaling() {
  ExperimentSpec spec;
  spec.dataset.kind = DatasetKind::uniform_cube;
  spec.dataset.dim = 3;
  spec.dataset.seed = 8;
  spec.oracle = {OracleKind::exact, 0.0, 0, 0};
  spec.operation = Operation::query;
  spec.sweep_n = {64, 128, 256, 512, 1024};
  spec.trials = 50;
  spec.seed = 808;
  const auto result = run_experiment(spec);
  const auto& rows = result.summary.scaling;
  bool monotone = rows.size() == 5;
  std::string means;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k > 0 && rows[k].mean_calls < rows[k - 1].mean_calls) monotone = false;
    means += (k ? " " : "") + fmt("%.1f", rows[k].mean_calls);
  }
  const double ratio = rows.size() == 5 ? rows[4].mean_calls / rows[0].mean_calls : INFINITY;
  return {monotone && ratio < 16.0,
          "mean calls " + means + fmt("; ratio 1024/64 = %.2f (need < 16)", ratio)};
}

// 9. Confidence widths: the sample-count inversion and anytime coverage.
Verdict confidence_schedule() {
  bool inversion = true;
  for (const double gap : {0.1, 0.5, 1.0}) {
    for (const double delta : {0.01, 0.05}) {
      const ConfidenceSchedule s(delta);
      const double t = std::ceil((4.0 / (gap * gap)) *
                                 std::log((2.0 / delta) * std::log2(12.0 / (delta * gap * gap))));
      const auto t0 = static_cast<std::uint64_t>(t);
      for (std::uint64_t u = t0; u < 64 * t0; u = u + 1 + u / 16) {
        inversion = inversion && s.width(u) <= gap;
      }
      inversion = inversion && s.sufficient_samples(gap) <= t0;
    }
  }

  const double delta = 0.1;
  const int runs = 500;
  auto metric = std::make_shared<MatrixMetric>(
      std::vector<std::vector<double>>{{0.0, 2.5}, {2.5, 0.0}});
  const ConfidenceSchedule schedule(delta);
  int violated = 0;
  for (int r = 0; r < runs; ++r) {
    GaussianOracle oracle(metric, 1.0, derive_seed(909, static_cast<std::uint64_t>(r)));
    double sum = 0.0;
    for (std::uint64_t t = 1; t <= 2000; ++t) {
      sum += oracle.query(0, 1);
      if (std::abs(sum / static_cast<double>(t) - 2.5) > schedule.width(t)) {
        ++violated;
        break;
      }
    }
  }
  const bool coverage = violated <= delta * runs;
  return {inversion && coverage,
          std::string(inversion ? "inversion grid holds" : "inversion grid FAILS") +
              fmt("; coverage %.0f/%.0f runs (need >= %.0f)", runs - violated, runs,
                  (1.0 - delta) * runs)};
}

// 10. Reruns give byte-identical NDJSON.
Verdict determinism() {
  int identical = 0;
  int total = 0;
  for (const auto op : {Operation::query, Operation::approx, Operation::build,
                        Operation::insert, Operation::remove, Operation::nngraph}) {
    ExperimentSpec spec;
    spec.dataset.kind = DatasetKind::gaussian_mixture;
    spec.dataset.n = 40;
    spec.dataset.dim = 3;
    spec.oracle = {OracleKind::gaussian, 1.0, 0, 10};
    spec.operation = op;
    if (op == Operation::approx) spec.epsilon = 1.0;
    spec.trials = 5;
    spec.seed = 1010;
    const auto a = reports_to_ndjson(run_experiment(spec).reports, spec);
    const auto b = reports_to_ndjson(run_experiment(spec).reports, spec);
    ++total;
    identical += !a.empty() && a == b;
  }
  return {identical == total, fmt("%.0f/%.0f operations rerun byte-identically", identical, total)};
}

}  // namespace

// With arguments, runs only the listed criterion numbers.
int main(int argc, char** argv) {
  std::set<int> only;
  for (int a = 1; a < argc; ++a) only.insert(std::atoi(argv[a]));
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"exact-oracle equivalence", exact_equivalence},
      {"search accuracy", search_accuracy},
      {"construction validity", construction_validity},
      {"memory", memory},
      {"identify-cover sandwich", cover_sandwich},
      {"approximate search", approximate_search},
      {"nn-graph correctness", nn_graph},
      {"scaling", scaling},
      {"confidence schedule", confidence_schedule},
      {"determinism", determinism},
  };
  int failed = 0;
  int number = 0;
  for (const auto& [name, run] : criteria) {
    ++number;
    if (!only.empty() && !only.count(number)) continue;
    const auto started = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("[%s] %d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", number, name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
