#pragma once

#include <cstdint>
#include <vector>

#include "wscj/core/phylogeny.hpp"
#include "wscj/core/scaled.hpp"
#include "wscj/core/weight_table.hpp"
#include "wscj/graph/adjacency_graph.hpp"

namespace wscj::weights {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  std::int64_t weight = 0;
};

// Maximum-weight (not maximum-cardinality) matching on a general graph by
// the primal-dual blossom method, O(n^3). Returns mate[v] or -1. Edges with
// non-positive weight are never needed and may be passed.
std::vector<int> max_weight_matching(int n_vertices, const std::vector<WeightedEdge>& edges);

struct MatchingLabeling {
  Labeling labeling;           // leaves carry their genomes
  std::vector<MicroWeight> kept;  // per node id, weight of the matching
  MicroWeight total_kept = 0;
};

// Per internal node, a maximum-weight matching over the node's weight-table
// entries with positive weight.
MatchingLabeling max_weight_matching_labeling(const Phylogeny& phylogeny, const WeightTable& weights);

// Same, restricted to the edges of `graph` annotated with each node.
MatchingLabeling max_weight_matching_labeling(const Phylogeny& phylogeny, const WeightTable& weights,
                                              const graph::GlobalAdjacencyGraph& graph);

}  // namespace wscj::weights
