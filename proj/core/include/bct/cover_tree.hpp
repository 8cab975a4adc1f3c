#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "bct/types.hpp"

namespace bct {

inline constexpr Level kDefaultLevelFloor = -52;

// One explicit node: the level where the point first appears and its parent
// one or more levels above. Implicit copies at lower levels are not stored.
struct NodeRecord {
  PointId id = 0;
  Level top_level = 0;
  std::optional<PointId> parent;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct TreeHeader {
  Level i_top = 0;
  Level i_bottom = 0;
  std::optional<PointId> root;
  std::size_t n = 0;

  friend bool operator==(const TreeHeader&, const TreeHeader&) = default;
};

// Leveled cover tree over oracle point ids with one explicit record per
// point. Level membership is implicit: C_i = {p : top_level(p) >= i}.
//
// The root is the unique point at i_top; i_bottom is the lowest explicit
// level. The structure knows nothing about distances; the noisy operations
// live in search.hpp, insert.hpp and remove.hpp.
class CoverTree {
 public:
  explicit CoverTree(Level level_floor = kDefaultLevelFloor);

  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t size() const noexcept { return slot_.size(); }
  // Number of stored records; equals size() for any well-formed tree.
  std::size_t explicit_node_count() const noexcept { return nodes_.size(); }

  bool contains(PointId id) const { return slot_.contains(id); }

  // Throws ContractViolation on an empty tree.
  PointId root() const;
  Level top_level() const;
  Level bottom_level() const;
  Level level_floor() const noexcept { return level_floor_; }

  // Throw NotFoundError for ids not in the tree.
  Level level_of(PointId id) const;
  std::optional<PointId> parent_of(PointId id) const;

  // Children first appearing at `level` (sorted by id).
  std::span<const PointId> children_at(PointId id, Level level) const;
  // All explicit children, keyed by level.
  const std::map<Level, std::vector<PointId>>& children_by_level(PointId id) const;
  std::size_t child_count(PointId id) const;

  // Sorted ids.
  std::vector<PointId> points() const;
  // Sorted by id; one entry per stored record (duplicates included).
  std::vector<NodeRecord> records() const;
  TreeHeader header() const;

  // --- Structural edits used by the noisy operations. ---

  // Tree must be empty.
  void set_root(PointId id, Level level);
  // Moves the root to `level`, which must stay above all of its children.
  void set_root_level(Level level);
  // Adds `id` explicitly at `level` under `parent`, which must be in the
  // tree at a higher level.
  void attach(PointId id, PointId parent, Level level);
  // Re-links an existing non-root point under `parent` at `level`.
  void reattach(PointId id, PointId parent, Level level);
  // Makes an existing child the new root at `level`, detaching it from its
  // parent. The old root keeps its record until erased.
  void promote_to_root(PointId id, Level level);
  // Drops the record for `id` and unlinks it from its parent. Children of
  // `id` are left pointing at it and must be reattached by the caller.
  void erase(PointId id);

  // Rebuilds from records. Throws std::invalid_argument when the records do
  // not describe a single rooted tree with strictly decreasing levels.
  static CoverTree from_records(const TreeHeader& header, std::span<const NodeRecord> records,
                                Level level_floor = kDefaultLevelFloor);
  // Keeps the records as given, duplicates included, for exercising the
  // invariant checker.
  static CoverTree from_records_unchecked(const TreeHeader& header,
                                          std::span<const NodeRecord> records,
                                          Level level_floor = kDefaultLevelFloor);

  friend bool operator==(const CoverTree& a, const CoverTree& b);

 private:
  struct Node {
    PointId id = 0;
    Level top_level = 0;
    std::optional<PointId> parent;
    std::map<Level, std::vector<PointId>> children;
  };

  const Node& node(PointId id) const;
  Node& node(PointId id);
  void link_child(PointId parent, PointId child, Level level);
  void unlink_child(PointId parent, PointId child, Level level);
  void refresh_bounds();

  Level level_floor_;
  std::optional<PointId> root_;
  Level i_top_ = 0;
  Level i_bottom_ = 0;
  std::vector<Node> nodes_;
  std::unordered_map<PointId, std::size_t> slot_;
};

}  // namespace bct
