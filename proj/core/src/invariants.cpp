#include "bct/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace bct {

std::string_view to_string(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::structure: return "structure";
    case InvariantKind::nesting: return "nesting";
    case InvariantKind::covering: return "covering";
    case InvariantKind::separation: return "separation";
    case InvariantKind::memory: return "memory";
  }
  return "unknown";
}

bool InvariantReport::has(InvariantKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

InvariantReport check_invariants(const CoverTree& tree, const Metric& metric) {
  InvariantReport report;
  const auto flag = [&](InvariantKind kind, PointId a, PointId b, Level level, std::string detail) {
    report.ok = false;
    report.violations.push_back({kind, a, b, level, std::move(detail)});
  };

  const std::vector<NodeRecord> records = tree.records();
  const TreeHeader header = tree.header();

  // memory: one record per point, and the header count agrees.
  std::map<PointId, NodeRecord> by_id;
  for (const NodeRecord& r : records) {
    if (!by_id.emplace(r.id, r).second) {
      flag(InvariantKind::memory, r.id, r.id, r.top_level,
           "point " + std::to_string(r.id) + " has more than one explicit record");
    }
  }
  if (header.n != by_id.size() || records.size() != by_id.size()) {
    flag(InvariantKind::memory, 0, 0, 0,
         std::to_string(records.size()) + " records for " + std::to_string(header.n) + " points");
  }
  if (records.empty()) return report;

  // structure: a single root, every parent known, child lists consistent.
  if (!header.root || !by_id.contains(*header.root)) {
    flag(InvariantKind::structure, 0, 0, header.i_top, "tree has no stored root");
    return report;
  }
  const PointId root = *header.root;
  for (const auto& [id, r] : by_id) {
    if (id >= metric.size()) {
      flag(InvariantKind::structure, id, id, r.top_level, "point outside the metric");
      return report;
    }
    if (!r.parent) {
      if (id != root) {
        flag(InvariantKind::structure, id, id, r.top_level, "second parentless node");
      }
      continue;
    }
    if (!by_id.contains(*r.parent)) {
      flag(InvariantKind::structure, id, *r.parent, r.top_level, "parent is not in the tree");
      continue;
    }
    const auto listed = tree.children_at(*r.parent, r.top_level);
    if (std::count(listed.begin(), listed.end(), id) != 1) {
      flag(InvariantKind::memory, id, *r.parent, r.top_level,
           "point is not listed exactly once under its parent");
    }
  }

  // nesting: levels strictly decrease along parent links; the root alone
  // occupies i_top.
  if (by_id.at(root).top_level != header.i_top) {
    flag(InvariantKind::nesting, root, root, header.i_top, "root is not at the top level");
  }
  for (const auto& [id, r] : by_id) {
    if (id != root && r.top_level >= header.i_top) {
      flag(InvariantKind::nesting, id, root, r.top_level, "non-root point at or above i_top");
    }
    if (r.top_level < header.i_bottom) {
      flag(InvariantKind::nesting, id, id, r.top_level, "point below i_bottom");
    }
    if (r.parent && by_id.contains(*r.parent) && by_id.at(*r.parent).top_level <= r.top_level) {
      flag(InvariantKind::nesting, id, *r.parent, r.top_level, "parent does not sit above child");
    }
  }

  // covering: each child of a node in C_{i+1} lies within 2^{i+1}.
  for (const auto& [id, r] : by_id) {
    if (!r.parent || !by_id.contains(*r.parent)) continue;
    const double d = metric.distance(id, *r.parent);
    const double bound = std::ldexp(1.0, r.top_level + 1);
    if (d > bound) {
      flag(InvariantKind::covering, id, *r.parent, r.top_level,
           "distance " + std::to_string(d) + " to parent exceeds " + std::to_string(bound));
    }
  }

  // separation: two points that share C_i are more than 2^i apart, and the
  // tightest such level is the lower of their top levels.
  std::vector<const NodeRecord*> flat;
  for (const auto& [id, r] : by_id) flat.push_back(&r);
  for (std::size_t a = 0; a < flat.size(); ++a) {
    for (std::size_t b = a + 1; b < flat.size(); ++b) {
      const Level shared = std::min(flat[a]->top_level, flat[b]->top_level);
      const double d = metric.distance(flat[a]->id, flat[b]->id);
      if (!(d > std::ldexp(1.0, shared))) {
        flag(InvariantKind::separation, flat[a]->id, flat[b]->id, shared,
             "distance " + std::to_string(d) + " within 2^" + std::to_string(shared));
      }
    }
  }
  return report;
}

}  // namespace bct
