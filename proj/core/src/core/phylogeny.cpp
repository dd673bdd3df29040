#include "wscj/core/phylogeny.hpp"

#include <algorithm>

#include "wscj/core/errors.hpp"

namespace wscj {

Tree::Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  const auto n = static_cast<NodeId>(nodes_.size());
  if (n == 0) throw InputError("tree has no nodes");
  for (NodeId id = 0; id < n; ++id) {
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    if (node.parent == kNoNode) {
      if (root_ != kNoNode) throw InputError("tree has more than one root");
      root_ = id;
    } else if (node.parent < 0 || node.parent >= n) {
      throw InputError("node '" + node.name + "' has an invalid parent");
    } else {
      const auto& siblings = nodes_[static_cast<std::size_t>(node.parent)].children;
      if (std::count(siblings.begin(), siblings.end(), id) != 1) {
        throw InputError("node '" + node.name + "' is not listed exactly once by its parent");
      }
    }
    for (NodeId child : node.children) {
      if (child < 0 || child >= n || nodes_[static_cast<std::size_t>(child)].parent != id) {
        throw InputError("node '" + node.name + "' lists a child that does not point back");
      }
    }
    if (node.name.empty()) throw InputError("tree node without a name");
    if (!by_name_.emplace(node.name, id).second) {
      throw InputError("duplicate node name '" + node.name + "'");
    }
  }
  if (root_ == kNoNode) throw InputError("tree has no root");

  depth_.assign(nodes_.size(), -1);
  std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
  depth_[static_cast<std::size_t>(root_)] = 0;
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& kids = nodes_[static_cast<std::size_t>(id)].children;
    if (next < kids.size()) {
      const NodeId child = kids[next++];
      if (depth_[static_cast<std::size_t>(child)] != -1) throw InputError("tree contains a cycle");
      depth_[static_cast<std::size_t>(child)] = depth_[static_cast<std::size_t>(id)] + 1;
      stack.emplace_back(child, 0);
    } else {
      post_order_.push_back(id);
      stack.pop_back();
    }
  }
  if (post_order_.size() != nodes_.size()) throw InputError("tree is not connected");
  pre_order_.assign(post_order_.rbegin(), post_order_.rend());
  for (NodeId id : post_order_) {
    (is_leaf(id) ? leaves_ : internal_).push_back(id);
  }
}

std::optional<NodeId> Tree::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

Phylogeny::Phylogeny(Tree tree, std::vector<AdjacencySet> leaf_genomes)
    : tree_(std::move(tree)), genomes_(std::move(leaf_genomes)) {
  if (genomes_.size() != tree_.size()) {
    throw InputError("leaf genome table does not match the tree size");
  }
  for (NodeId leaf : tree_.leaves()) {
    const auto& genome = genomes_[static_cast<std::size_t>(leaf)];
    if (!universe_) {
      universe_ = genome.universe();
    } else if (!same_universe(universe_, genome.universe())) {
      throw InputError("leaf '" + tree_.name(leaf) + "' has a different marker content");
    }
    const auto report = check_consistency(genome.adjacencies());
    if (!report.consistent) {
      throw InputError("leaf genome '" + tree_.name(leaf) + "' is inconsistent at " +
                       report.conflicts.front().to_string());
    }
  }
  for (NodeId id : tree_.internal_nodes()) {
    genomes_[static_cast<std::size_t>(id)] = AdjacencySet({}, universe_);
  }
}

const AdjacencySet& Phylogeny::leaf_genome(NodeId leaf) const {
  if (!tree_.is_leaf(leaf)) {
    throw InputError("node '" + tree_.name(leaf) + "' is not a leaf");
  }
  return genomes_.at(static_cast<std::size_t>(leaf));
}

}  // namespace wscj
