#include "bct/cover_tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bct {
namespace {

const std::map<Level, std::vector<PointId>> kNoChildren;

std::string id_str(PointId id) { return std::to_string(id); }

}  // namespace

CoverTree::CoverTree(Level level_floor) : level_floor_(level_floor) {}

const CoverTree::Node& CoverTree::node(PointId id) const {
  const auto it = slot_.find(id);
  if (it == slot_.end()) throw NotFoundError(id, "point " + id_str(id) + " is not in the tree");
  return nodes_[it->second];
}

CoverTree::Node& CoverTree::node(PointId id) {
  return const_cast<Node&>(std::as_const(*this).node(id));
}

PointId CoverTree::root() const {
  if (!root_) throw ContractViolation("empty cover tree has no root");
  return *root_;
}

Level CoverTree::top_level() const {
  if (!root_) throw ContractViolation("empty cover tree has no levels");
  return i_top_;
}

Level CoverTree::bottom_level() const {
  if (!root_) throw ContractViolation("empty cover tree has no levels");
  return i_bottom_;
}

Level CoverTree::level_of(PointId id) const { return node(id).top_level; }

std::optional<PointId> CoverTree::parent_of(PointId id) const { return node(id).parent; }

std::span<const PointId> CoverTree::children_at(PointId id, Level level) const {
  const auto& children = node(id).children;
  const auto it = children.find(level);
  if (it == children.end()) return {};
  return it->second;
}

const std::map<Level, std::vector<PointId>>& CoverTree::children_by_level(PointId id) const {
  const auto it = slot_.find(id);
  return it == slot_.end() ? kNoChildren : nodes_[it->second].children;
}

std::size_t CoverTree::child_count(PointId id) const {
  std::size_t total = 0;
  for (const auto& [level, ids] : node(id).children) total += ids.size();
  return total;
}

std::vector<PointId> CoverTree::points() const {
  std::vector<PointId> out;
  out.reserve(slot_.size());
  for (const auto& [id, slot] : slot_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeRecord> CoverTree::records() const {
  std::vector<NodeRecord> out;
  out.reserve(nodes_.size());
  for (const Node& n : nodes_) out.push_back({n.id, n.top_level, n.parent});
  std::stable_sort(out.begin(), out.end(),
                   [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
  return out;
}

TreeHeader CoverTree::header() const {
  TreeHeader h;
  h.root = root_;
  h.n = size();
  if (root_) {
    h.i_top = i_top_;
    h.i_bottom = i_bottom_;
  }
  return h;
}

void CoverTree::link_child(PointId parent, PointId child, Level level) {
  auto& list = node(parent).children[level];
  list.insert(std::lower_bound(list.begin(), list.end(), child), child);
}

void CoverTree::unlink_child(PointId parent, PointId child, Level level) {
  auto& children = node(parent).children;
  const auto it = children.find(level);
  if (it == children.end()) return;
  std::erase(it->second, child);
  if (it->second.empty()) children.erase(it);
}

void CoverTree::refresh_bounds() {
  if (!root_) {
    i_top_ = i_bottom_ = 0;
    return;
  }
  i_top_ = node(*root_).top_level;
  i_bottom_ = i_top_;
  for (const Node& n : nodes_) i_bottom_ = std::min(i_bottom_, n.top_level);
}

void CoverTree::set_root(PointId id, Level level) {
  if (!empty()) throw ContractViolation("set_root on a non-empty tree");
  nodes_.push_back({id, level, std::nullopt, {}});
  slot_.emplace(id, 0);
  root_ = id;
  refresh_bounds();
}

void CoverTree::set_root_level(Level level) {
  Node& r = node(root());
  if (!r.children.empty() && r.children.rbegin()->first >= level) {
    throw ContractViolation("root must sit above its children");
  }
  r.top_level = level;
  refresh_bounds();
}

void CoverTree::attach(PointId id, PointId parent, Level level) {
  if (contains(id)) throw ContractViolation("point " + id_str(id) + " is already in the tree");
  if (node(parent).top_level <= level) {
    throw ContractViolation("parent must sit above its child");
  }
  slot_.emplace(id, nodes_.size());
  nodes_.push_back({id, level, parent, {}});
  link_child(parent, id, level);
  i_bottom_ = std::min(i_bottom_, level);
}

void CoverTree::reattach(PointId id, PointId parent, Level level) {
  Node& n = node(id);
  if (!n.parent) throw ContractViolation("reattach on the root");
  if (node(parent).top_level <= level) throw ContractViolation("parent must sit above its child");
  if (!n.children.empty() && n.children.rbegin()->first >= level) {
    throw ContractViolation("point must sit above its own children");
  }
  const PointId old_parent = *n.parent;
  if (contains(old_parent)) unlink_child(old_parent, id, n.top_level);
  n.top_level = level;
  n.parent = parent;
  link_child(parent, id, level);
  refresh_bounds();
}

void CoverTree::promote_to_root(PointId id, Level level) {
  Node& n = node(id);
  if (!n.parent) throw ContractViolation("point is already the root");
  const PointId old_parent = *n.parent;
  if (contains(old_parent)) unlink_child(old_parent, id, n.top_level);
  n.top_level = std::max(n.top_level, level);
  n.parent.reset();
  root_ = id;
  i_top_ = n.top_level;
}

void CoverTree::erase(PointId id) {
  const auto it = slot_.find(id);
  if (it == slot_.end()) throw NotFoundError(id, "point " + id_str(id) + " is not in the tree");
  const std::size_t slot = it->second;
  const Node& n = nodes_[slot];
  if (n.parent && contains(*n.parent)) unlink_child(*n.parent, id, n.top_level);
  if (root_ == id) root_.reset();

  slot_.erase(it);
  if (slot + 1 != nodes_.size()) {
    nodes_[slot] = std::move(nodes_.back());
    slot_[nodes_[slot].id] = slot;
  }
  nodes_.pop_back();
  if (!root_ && !nodes_.empty()) {
    throw ContractViolation("erased the root of a non-empty tree without promoting a new one");
  }
  refresh_bounds();
}

CoverTree CoverTree::from_records_unchecked(const TreeHeader& header,
                                            std::span<const NodeRecord> records,
                                            Level level_floor) {
  CoverTree tree(level_floor);
  for (const NodeRecord& r : records) {
    tree.slot_.try_emplace(r.id, tree.nodes_.size());
    tree.nodes_.push_back({r.id, r.top_level, r.parent, {}});
  }
  for (const Node& n : std::vector<Node>(tree.nodes_)) {
    if (n.parent && tree.contains(*n.parent)) {
      auto& list = tree.node(*n.parent).children[n.top_level];
      list.insert(std::lower_bound(list.begin(), list.end(), n.id), n.id);
    }
  }
  tree.root_ = header.root;
  tree.i_top_ = header.i_top;
  tree.i_bottom_ = header.i_bottom;
  return tree;
}

CoverTree CoverTree::from_records(const TreeHeader& header, std::span<const NodeRecord> records,
                                  Level level_floor) {
  if (records.size() != header.n) throw std::invalid_argument("record count does not match header");
  if (records.empty()) {
    if (header.root) throw std::invalid_argument("empty tree with a root");
    return CoverTree(level_floor);
  }
  if (!header.root) throw std::invalid_argument("non-empty tree without a root");

  CoverTree tree = from_records_unchecked(header, records, level_floor);
  if (tree.slot_.size() != records.size()) throw std::invalid_argument("duplicate node id");

  std::size_t roots = 0;
  for (const Node& n : tree.nodes_) {
    if (!n.parent) {
      ++roots;
      if (n.id != *header.root) throw std::invalid_argument("parentless node is not the root");
      continue;
    }
    if (!tree.contains(*n.parent)) {
      throw std::invalid_argument("node " + id_str(n.id) + " has unknown parent");
    }
    if (tree.node(*n.parent).top_level <= n.top_level) {
      throw std::invalid_argument("node " + id_str(n.id) + " is not below its parent");
    }
  }
  if (roots != 1) throw std::invalid_argument("tree must have exactly one root");
  tree.refresh_bounds();
  if (tree.i_top_ != header.i_top || tree.i_bottom_ != header.i_bottom) {
    throw std::invalid_argument("header levels do not match the records");
  }
  return tree;
}

bool operator==(const CoverTree& a, const CoverTree& b) {
  return a.header() == b.header() && a.records() == b.records();
}

}  // namespace bct
