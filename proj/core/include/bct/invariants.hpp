#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bct/cover_tree.hpp"
#include "bct/metric.hpp"

namespace bct {

enum class InvariantKind { structure, nesting, covering, separation, memory };

std::string_view to_string(InvariantKind kind);

struct Violation {
  InvariantKind kind;
  PointId a = 0;
  PointId b = 0;
  Level level = 0;
  std::string detail;
};

struct InvariantReport {
  bool ok = true;
  std::vector<Violation> violations;

  bool has(InvariantKind kind) const;
};

// Harness-side check with exact distances:
//   nesting     parent sits strictly above its child, root is unique at i_top
//   covering    d(p, parent(p)) <= 2^(top_level(p) + 1)
//   separation  d(p, q) > 2^i for distinct p, q in C_i
//   memory      exactly one explicit record per point
InvariantReport check_invariants(const CoverTree& tree, const Metric& metric);

}  // namespace bct
