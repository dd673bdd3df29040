#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wscj/core/adjacency.hpp"

namespace wscj {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct TreeNode {
  std::string name;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  double branch_length = 0.0;  // length of the edge to the parent
};

// Rooted tree with named nodes. Multifurcations are allowed. Immutable once
// built; node ids are dense in [0, size()).
class Tree {
 public:
  Tree() = default;
  // Validates: exactly one root, parent/children agreement, acyclic, every
  // node reachable from the root, unique non-empty names.
  explicit Tree(std::vector<TreeNode> nodes);

  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return root_; }
  const TreeNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::string& name(NodeId id) const { return node(id).name; }
  NodeId parent(NodeId id) const { return node(id).parent; }
  const std::vector<NodeId>& children(NodeId id) const { return node(id).children; }
  bool is_leaf(NodeId id) const { return node(id).children.empty(); }
  int depth(NodeId id) const { return depth_.at(static_cast<std::size_t>(id)); }

  const std::vector<NodeId>& post_order() const { return post_order_; }
  // Reverse post-order; every parent precedes its children.
  const std::vector<NodeId>& pre_order() const { return pre_order_; }
  // Internal nodes in post-order.
  const std::vector<NodeId>& internal_nodes() const { return internal_; }
  // Leaves in post-order.
  const std::vector<NodeId>& leaves() const { return leaves_; }
  std::optional<NodeId> find(std::string_view name) const;

 private:
  std::vector<TreeNode> nodes_;
  NodeId root_ = kNoNode;
  std::vector<int> depth_;
  std::vector<NodeId> post_order_;
  std::vector<NodeId> pre_order_;
  std::vector<NodeId> internal_;
  std::vector<NodeId> leaves_;
  std::unordered_map<std::string, NodeId> by_name_;
};

// Tree plus the fixed adjacency sets at its leaves. All leaf genomes share
// one marker universe and are consistent.
class Phylogeny {
 public:
  Phylogeny() = default;
  // `leaf_genomes` is indexed by node id; entries for internal nodes are
  // ignored. Throws InputError on inconsistent genomes or a universe mismatch.
  Phylogeny(Tree tree, std::vector<AdjacencySet> leaf_genomes);

  const Tree& tree() const { return tree_; }
  const MarkerUniverse& universe() const { return universe_; }
  const AdjacencySet& leaf_genome(NodeId leaf) const;

 private:
  Tree tree_;
  MarkerUniverse universe_;
  std::vector<AdjacencySet> genomes_;
};

// An adjacency set for every node of a tree (leaves carry their genomes).
using Labeling = std::vector<AdjacencySet>;

}  // namespace wscj
