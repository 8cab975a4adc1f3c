#include "bct/insert.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "bct/confidence.hpp"

namespace bct {
namespace {

double cover_radius(Level level) { return std::ldexp(1.0, level); }

struct Frame {
  Level level;                  // call level i; candidates Q live in C_{i-1}
  std::vector<PointId> cover;   // Q_i
  std::vector<PointId> within;  // Q_{i-1} = {j in Q : d(p, j) <= 2^i}
};

}  // namespace

InsertResult insert(CoverTree& tree, PointId point, double delta, StochasticOracle& oracle,
                    SampleLedger& ledger, const BanditOptions& options) {
  if (point >= oracle.size()) throw IndexError("insert point outside the oracle universe");
  if (tree.contains(point)) {
    throw ContractViolation("point " + std::to_string(point) + " is already in the tree");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("delta must lie in (0, 1)");

  InsertResult result;
  if (tree.empty()) {
    tree.set_root(point, 0);
    result.level = 0;
    return result;
  }

  const std::uint64_t calls_before = oracle.calls();
  const std::size_t n = tree.size() + 1;
  const PointId root = tree.root();
  const Level saved_top = tree.top_level();

  // The descent starts from C_{i_top} = {root}, which must cover p: lift the
  // root until 2^{i_top} clears the upper confidence bound on d(p, root).
  {
    if (ledger.count(point, root) == 0) ledger.record(point, root, oracle.query(point, root));
    const PairStats s = ledger.stats(point, root);
    const double width = oracle.noiseless()
                             ? 0.0
                             : ConfidenceSchedule(delta / static_cast<double>(n), oracle.sigma())
                                   .width(s.count);
    const double bound = s.mean() + width;
    if (bound > cover_radius(tree.top_level())) {
      tree.set_root_level(static_cast<Level>(std::ceil(std::log2(bound))));
    }
  }

  std::vector<Frame> frames;
  std::vector<PointId> cover{root};
  std::vector<PointId> expanded;
  Level level = tree.top_level();
  for (;;) {
    if (level <= tree.level_floor()) {
      tree.set_root_level(saved_top);
      throw DuplicatePointError(point, "point " + std::to_string(point) +
                                           " duplicates a tree point (descent reached level " +
                                           std::to_string(tree.level_floor()) + ")");
    }

    expanded = cover;
    for (const PointId id : cover) {
      const auto children = tree.children_at(id, level - 1);
      expanded.insert(expanded.end(), children.begin(), children.end());
    }
    std::sort(expanded.begin(), expanded.end());

    ThresholdQuery tq;
    tq.anchor = point;
    tq.candidates = expanded;
    tq.theta = cover_radius(level);
    tq.delta = delta;
    tq.union_denominator = n;
    auto part = threshold_partition(tq, oracle, ledger, options);
    result.capped = result.capped || part.capped;
    if (part.below.empty()) break;  // "no parent found" at this level

    frames.push_back({level, cover, part.below});
    cover = std::move(part.below);
    --level;
  }

  // Unwind: the deepest level whose own cover set has a member within 2^i
  // adopts p one level below it.
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
    std::vector<PointId> both;
    std::set_intersection(it->cover.begin(), it->cover.end(), it->within.begin(),
                          it->within.end(), std::back_inserter(both));
    if (both.empty()) continue;
    PointId parent = both.front();
    double best = ledger.mean(point, parent);
    for (const PointId id : both) {
      const double m = ledger.mean(point, id);
      if (m < best) {
        best = m;
        parent = id;
      }
    }
    tree.attach(point, parent, it->level - 1);
    result.level = it->level - 1;
    result.parent = parent;
    result.oracle_calls = oracle.calls() - calls_before;
    return result;
  }

  // The root was confirmed within 2^{i_top} above, so the top frame always
  // offers it as a parent.
  throw std::logic_error("insert found no parent for point " + std::to_string(point));
}

BuildResult build(std::span<const PointId> points, double delta, StochasticOracle& oracle,
                  const BanditOptions& options, Level level_floor) {
  if (points.empty()) throw ContractViolation("build needs at least one point");
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("delta must lie in (0, 1)");

  const auto started = std::chrono::steady_clock::now();
  const std::uint64_t calls_before = oracle.calls();
  BuildResult out{CoverTree(level_floor), {}};
  const double per_insert = delta / static_cast<double>(points.size());
  bool capped = false;
  for (const PointId p : points) {
    SampleLedger ledger;
    const auto r = insert(out.tree, p, per_insert, oracle, ledger, options);
    capped = capped || r.capped;
  }
  out.report.total_oracle_calls = oracle.calls() - calls_before;
  out.report.mark_capped(capped);
  out.report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return out;
}

BuildResult build(std::size_t n, double delta, StochasticOracle& oracle,
                  const BanditOptions& options, Level level_floor) {
  std::vector<PointId> ids(n);
  std::iota(ids.begin(), ids.end(), PointId{0});
  return build(ids, delta, oracle, options, level_floor);
}

}  // namespace bct
