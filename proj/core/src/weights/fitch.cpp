#include "wscj/weights/fitch.hpp"

#include <algorithm>
#include <array>

#include "wscj/core/errors.hpp"
#include "wscj/graph/adjacency_graph.hpp"

namespace wscj::weights {

PresenceHistory fitch_scj(const Phylogeny& phylogeny, const Adjacency& adjacency) {
  const auto& tree = phylogeny.tree();
  constexpr std::int64_t kInf = std::int64_t{1} << 40;
  std::vector<std::array<std::int64_t, 2>> cost(tree.size());
  for (NodeId v : tree.post_order()) {
    auto& c = cost[static_cast<std::size_t>(v)];
    if (tree.is_leaf(v)) {
      const bool has = phylogeny.leaf_genome(v).contains(adjacency);
      c = {has ? kInf : 0, has ? 0 : kInf};
      continue;
    }
    c = {0, 0};
    for (NodeId ch : tree.children(v)) {
      const auto& k = cost[static_cast<std::size_t>(ch)];
      c[0] += std::min(k[0], k[1] + 1);
      c[1] += std::min(k[1], k[0] + 1);
    }
  }

  PresenceHistory out;
  out.present.assign(tree.size(), 0);
  const auto& rc = cost[static_cast<std::size_t>(tree.root())];
  out.present[static_cast<std::size_t>(tree.root())] = rc[1] < rc[0] ? 1 : 0;
  out.changes = std::min(rc[0], rc[1]);
  for (NodeId v : tree.pre_order()) {
    const NodeId u = tree.parent(v);
    if (u == kNoNode) continue;
    const int s = out.present[static_cast<std::size_t>(u)];
    const auto& c = cost[static_cast<std::size_t>(v)];
    // Parent's state if it is in the child's optimal set.
    const bool keep = c[static_cast<std::size_t>(s)] <= c[static_cast<std::size_t>(1 - s)];
    out.present[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(keep ? s : 1 - s);
  }
  return out;
}

FitchLabeling fitch_scj_labeling(const Phylogeny& phylogeny) {
  const auto& tree = phylogeny.tree();
  std::vector<std::vector<Adjacency>> chosen(tree.size());
  FitchLabeling out;
  const auto candidates = graph::candidate_adjacencies(phylogeny);
  for (const auto& adj : candidates.all()) {
    const auto history = fitch_scj(phylogeny, adj);
    out.total_changes += history.changes;
    for (NodeId v : tree.internal_nodes()) {
      if (history.present[static_cast<std::size_t>(v)]) chosen[static_cast<std::size_t>(v)].push_back(adj);
    }
  }
  out.labeling.resize(tree.size());
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const auto id = static_cast<NodeId>(v);
    if (tree.is_leaf(id)) {
      out.labeling[v] = phylogeny.leaf_genome(id);
      continue;
    }
    out.labeling[v] = AdjacencySet(std::move(chosen[v]), phylogeny.universe());
    const auto report = check_consistency(out.labeling[v].adjacencies());
    if (!report.consistent) {
      throw InternalError("Fitch labeling is inconsistent at node '" + tree.name(id) + "' (" +
                          report.conflicts.front().to_string() + ")");
    }
  }
  return out;
}

}  // namespace wscj::weights
