#include "bct/remove.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "bct/confidence.hpp"

namespace bct {
namespace {

double cover_radius(Level level) { return std::ldexp(1.0, level); }

void insert_sorted(std::vector<PointId>& v, PointId id) {
  const auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) v.insert(it, id);
}

PointId closest_by_mean(const SampleLedger& ledger, PointId anchor,
                        const std::vector<PointId>& ids) {
  PointId best = ids.front();
  double best_mean = ledger.mean(anchor, best);
  for (const PointId id : ids) {
    const double m = ledger.mean(anchor, id);
    if (m < best_mean) {
      best_mean = m;
      best = id;
    }
  }
  return best;
}

}  // namespace

RemoveResult remove(CoverTree& tree, PointId point, double delta, StochasticOracle& oracle,
                    SampleLedger& ledger, const BanditOptions& options) {
  if (!tree.contains(point)) {
    throw NotFoundError(point, "point " + std::to_string(point) + " is not in the tree");
  }
  if (tree.size() < 2) throw ContractViolation("remove needs a tree with at least two points");
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("delta must lie in (0, 1)");

  RemoveResult result;
  const std::uint64_t calls_before = oracle.calls();
  const std::size_t n = tree.size();
  const std::size_t union_denominator = n * n;
  const bool removing_root = point == tree.root();
  const Level point_level = tree.level_of(point);

  std::vector<std::pair<Level, PointId>> orphans;
  for (const auto& [level, ids] : tree.children_by_level(point)) {
    for (const PointId id : ids) orphans.emplace_back(level, id);
  }
  if (orphans.empty()) {
    tree.erase(point);
    return result;
  }
  const Level lowest_orphan = orphans.front().first;

  // Cover sets relative to the removed point: covers[i] holds the members
  // of C_i within 2^{i+1} of it, which includes every possible parent at
  // level i for its orphans. The point itself is carried structurally so
  // that its own children are expanded.
  std::map<Level, std::vector<PointId>> covers;
  {
    std::vector<PointId> cover{tree.root()};
    covers[tree.top_level()] = cover;
    std::vector<PointId> expanded;
    for (Level level = tree.top_level(); level - 1 > lowest_orphan; --level) {
      expanded = cover;
      for (const PointId id : cover) {
        const auto children = tree.children_at(id, level - 1);
        expanded.insert(expanded.end(), children.begin(), children.end());
      }
      std::sort(expanded.begin(), expanded.end());
      std::erase(expanded, point);

      ThresholdQuery tq;
      tq.anchor = point;
      tq.candidates = expanded;
      tq.theta = cover_radius(level);
      tq.delta = delta;
      tq.union_denominator = union_denominator;
      auto part = threshold_partition(tq, oracle, ledger, options);
      result.capped = result.capped || part.capped;

      cover = std::move(part.below);
      if (point_level >= level - 1) insert_sorted(cover, point);
      covers[level - 1] = cover;
    }
    for (auto& [level, ids] : covers) std::erase(ids, point);
  }

  if (removing_root) {
    const Level top_orphan = orphans.back().first;
    std::vector<PointId> tops(tree.children_at(point, top_orphan).begin(),
                              tree.children_at(point, top_orphan).end());
    PointId successor = tops.front();
    if (tops.size() > 1) {
      // Prefer the top-level child whose farthest sibling is confidently
      // closest, keeping the new root low.
      const ConfidenceSchedule schedule(delta / static_cast<double>(union_denominator),
                                        oracle.sigma());
      double best_spread = 0.0;
      for (std::size_t a = 0; a < tops.size(); ++a) {
        double spread = 0.0;
        for (std::size_t b = 0; b < tops.size(); ++b) {
          if (a == b) continue;
          if (ledger.count(tops[a], tops[b]) == 0) {
            ledger.record(tops[a], tops[b], oracle.query(tops[a], tops[b]));
          }
          const PairStats s = ledger.stats(tops[a], tops[b]);
          const double width = oracle.noiseless() ? 0.0 : schedule.width(s.count);
          spread = std::max(spread, s.mean() + width);
        }
        if (a == 0 || spread < best_spread) {
          best_spread = spread;
          successor = tops[a];
        }
      }
    }
    tree.promote_to_root(successor, top_orphan + 1);
    std::erase(orphans, std::make_pair(top_orphan, successor));
    for (auto it = covers.begin(); it != covers.end();) {
      it = it->first > top_orphan ? covers.erase(it) : std::next(it);
    }
    covers[top_orphan + 1] = {successor};
    result.new_root = successor;
  }

  tree.erase(point);

  const auto cover_at = [&](Level level) -> std::vector<PointId>& {
    auto it = covers.find(level);
    if (it == covers.end()) it = covers.emplace(level, std::vector<PointId>{tree.root()}).first;
    return it->second;
  };

  // Lower levels first; each orphan climbs until some cover member lies
  // within 2^{level}, joining C_level at every level where none does.
  for (const auto& [orphan_level, orphan] : orphans) {
    Level level = orphan_level + 1;
    for (;;) {
      std::vector<PointId> candidates = cover_at(level);
      std::erase(candidates, orphan);

      ThresholdQuery tq;
      tq.anchor = orphan;
      tq.candidates = candidates;
      tq.theta = cover_radius(level);
      tq.delta = delta;
      tq.union_denominator = union_denominator;
      const auto part = threshold_partition(tq, oracle, ledger, options);
      result.capped = result.capped || part.capped;

      if (!part.below.empty()) {
        tree.reattach(orphan, closest_by_mean(ledger, orphan, part.below), level - 1);
        break;
      }
      insert_sorted(cover_at(level), orphan);
      ++result.promotions;
      if (level >= tree.top_level()) {
        tree.set_root_level(level + 1);
        insert_sorted(cover_at(level + 1), tree.root());
      }
      ++level;
    }
  }

  result.oracle_calls = oracle.calls() - calls_before;
  return result;
}

}  // namespace bct
