#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wscj/core/adjacency.hpp"
#include "wscj/core/phylogeny.hpp"
#include "wscj/core/scaled.hpp"
#include "wscj/core/weight_table.hpp"

namespace wscj::graph {

// Candidate ancestral adjacencies: every adjacency of at least one leaf.
// The same set applies at every internal node.
class CandidateSets {
 public:
  CandidateSets() = default;
  explicit CandidateSets(std::vector<Adjacency> shared) : shared_(std::move(shared)) {}

  const std::vector<Adjacency>& at(NodeId /*node*/) const { return shared_; }
  const std::vector<Adjacency>& all() const { return shared_; }

 private:
  std::vector<Adjacency> shared_;
};

CandidateSets candidate_adjacencies(const Phylogeny& phylogeny);

// Edge annotation: the internal nodes (sorted) whose adjacency graph holds
// the edge.
struct GlobalAdjacencyGraph {
  std::vector<Extremity> vertices;                  // sorted
  std::map<Adjacency, std::vector<NodeId>> edges;   // non-empty annotations only
};

// Annotates adjacency a with internal node v iff a is a candidate at v and
// w_{v,a} >= threshold.
GlobalAdjacencyGraph build_global_graph(const Phylogeny& phylogeny, const CandidateSets& candidates,
                                        const WeightTable& weights, MicroWeight threshold);

struct AnnotatedEdge {
  Adjacency adjacency;
  int u = 0;  // local vertex index of adjacency.first()
  int v = 0;  // local vertex index of adjacency.second()
  std::vector<NodeId> nodes;
};

struct ComponentStats {
  int vertex_count = 0;  // m_C
  int max_degree = 0;    // d_C
  // prod over vertices of (1 + degree), saturating at UINT64_MAX.
  std::uint64_t label_space_bound = 1;
};

// A connected piece of the global adjacency graph.
class Component {
 public:
  Component() = default;
  Component(std::vector<Extremity> vertices, std::vector<AnnotatedEdge> edges);

  const std::vector<Extremity>& vertices() const { return vertices_; }
  const std::vector<AnnotatedEdge>& edges() const { return edges_; }
  // Edge indices incident to local vertex i, in edge order.
  const std::vector<int>& incident(int i) const { return incident_[static_cast<std::size_t>(i)]; }
  // Local index of `x`, or -1.
  int index_of(const Extremity& x) const;
  // Index of the edge for `adj`, or -1.
  int edge_index(const Adjacency& adj) const;
  bool annotated(int edge, NodeId node) const;

  const ComponentStats& stats() const { return stats_; }
  static ComponentStats compute_stats(const std::vector<Extremity>& vertices,
                                      const std::vector<AnnotatedEdge>& edges);

 private:
  std::vector<Extremity> vertices_;
  std::vector<AnnotatedEdge> edges_;
  std::vector<std::vector<int>> incident_;
  ComponentStats stats_;
};

// Connected components ordered by their smallest extremity.
std::vector<Component> connected_components(const GlobalAdjacencyGraph& graph);

bool is_conflict_free(const Component& component);

// Saturating square of the label-space bound, the work estimate of the DP.
std::uint64_t dp_work_estimate(const Component& component);

}  // namespace wscj::graph
