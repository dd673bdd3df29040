#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wscj/core/adjacency.hpp"
#include "wscj/core/phylogeny.hpp"
#include "wscj/core/random.hpp"
#include "wscj/core/scaled.hpp"
#include "wscj/core/weight_table.hpp"
#include "wscj/graph/adjacency_graph.hpp"

namespace wscj::dp {

inline constexpr std::uint64_t kDefaultExplosionCap = 10'000'000;

// Per-extremity choice of one incident component edge (or none) at a node.
// Invalid combinations are representable; is_valid() reports them.
struct JointLabel {
  std::vector<int> choice;  // indexed by local vertex, edge index or -1

  // Induced edge indices (each chosen edge once), sorted.
  std::vector<int> induced_edges(const graph::Component& component) const;
  friend bool operator==(const JointLabel&, const JointLabel&) = default;
};

// Mutual agreement at both ends of every chosen edge, and every chosen edge
// annotated with `node`.
bool is_valid(const JointLabel& label, const graph::Component& component, NodeId node);

// All valid joint labels of `node`, empty label first, then in lexicographic
// order of per-vertex choices. Throws CapacityExceeded when the component's
// squared label-space bound exceeds `cap`.
std::vector<JointLabel> enumerate_labels(const graph::Component& component, NodeId node,
                                         std::uint64_t cap = kDefaultExplosionCap);

// d(a,b) for tree edge (u,v): (1-alpha)|a xor b| + alpha * (weight of
// candidates annotated at v and absent from b). Leaves carry no weight term.
// kInfiniteCost if either label is invalid.
Cost branch_cost(const graph::Component& component, const Phylogeny& phylogeny,
                 const WeightTable& weights, const Alpha& alpha, NodeId u, const JointLabel& label_u,
                 NodeId v, const JointLabel& label_v);

// One labeling of a component: the chosen adjacencies per node id (leaves
// stay empty).
struct ComponentSolution {
  std::vector<std::vector<Adjacency>> per_node;
  Cost objective = 0;
  std::optional<BigCount> cooptimal;  // unset when the solver cannot count
  std::optional<std::uint64_t> sample_index;
  std::optional<std::uint64_t> seed;
};

// Objective of a component labeling evaluated directly from its definition:
// SCJ changes on every tree edge restricted to component edges, plus the
// weight of annotated edges absent at internal nodes.
Cost component_objective(const graph::Component& component, const Phylogeny& phylogeny,
                         const WeightTable& weights, const Alpha& alpha,
                         const std::vector<std::vector<Adjacency>>& per_node);

// Bottom-up Sankoff table with co-optimal counts.
class DpTable {
 public:
  struct NodeRow {
    std::size_t n_labels = 0;
    std::vector<std::uint64_t> masks;  // n_labels * words, bit e = edge e kept
    std::vector<Cost> own;             // alpha-weighted discarded weight at this node
    std::vector<Cost> cost;            // c(a,v): optimum of the subtree below v
    std::vector<BigCount> count;       // optimal subtree labelings under a
  };

  const graph::Component& component() const { return *component_; }
  const Tree& tree() const { return *tree_; }
  const Alpha& alpha() const { return alpha_; }
  std::size_t words() const { return words_; }
  const NodeRow& row(NodeId v) const { return rows_[static_cast<std::size_t>(v)]; }
  Cost optimum() const { return optimum_; }
  const BigCount& cooptimal() const { return cooptimal_; }

 private:
  friend DpTable build_table(const graph::Component&, const Phylogeny&, const WeightTable&,
                             const Alpha&, std::uint64_t);
  const graph::Component* component_ = nullptr;
  const Tree* tree_ = nullptr;
  Alpha alpha_;
  std::size_t words_ = 1;
  std::vector<NodeRow> rows_;
  Cost optimum_ = 0;
  BigCount cooptimal_ = 0;
};

// The table references `component` and the phylogeny's tree; both must
// outlive it.
DpTable build_table(const graph::Component& component, const Phylogeny& phylogeny,
                    const WeightTable& weights, const Alpha& alpha,
                    std::uint64_t cap = kDefaultExplosionCap);

struct SolvedComponent {
  ComponentSolution solution;
  DpTable table;
};

// Optimal labeling by deterministic backtracking: first minimum in label
// order at the root and at every child.
SolvedComponent solve_component(const graph::Component& component, const Phylogeny& phylogeny,
                                const WeightTable& weights, const Alpha& alpha,
                                std::uint64_t cap = kDefaultExplosionCap);

ComponentSolution backtrack_first(const DpTable& table);

BigCount count_cooptimal(const DpTable& table);

// Uniform samples from the co-optimal set. Sample i draws from its own stream
// derive_seed(seed, i), so any prefix of a run is reproducible.
std::vector<ComponentSolution> sample_component(const DpTable& table, std::size_t n_samples,
                                                std::uint64_t seed);

}  // namespace wscj::dp
