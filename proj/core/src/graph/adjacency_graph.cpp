#include "wscj/graph/adjacency_graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace wscj::graph {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

CandidateSets candidate_adjacencies(const Phylogeny& phylogeny) {
  std::vector<Adjacency> all;
  for (NodeId leaf : phylogeny.tree().leaves()) {
    const auto& g = phylogeny.leaf_genome(leaf);
    all.insert(all.end(), g.begin(), g.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return CandidateSets(std::move(all));
}

GlobalAdjacencyGraph build_global_graph(const Phylogeny& phylogeny, const CandidateSets& candidates,
                                        const WeightTable& weights, MicroWeight threshold) {
  GlobalAdjacencyGraph graph;
  // internal_nodes() is post-order; annotations are kept sorted by id.
  for (NodeId v : phylogeny.tree().internal_nodes()) {
    for (const auto& adj : candidates.at(v)) {
      if (weights.get(v, adj) >= threshold) graph.edges[adj].push_back(v);
    }
  }
  for (auto& [adj, nodes] : graph.edges) {
    std::sort(nodes.begin(), nodes.end());
    graph.vertices.push_back(adj.first());
    graph.vertices.push_back(adj.second());
  }
  std::sort(graph.vertices.begin(), graph.vertices.end());
  graph.vertices.erase(std::unique(graph.vertices.begin(), graph.vertices.end()),
                       graph.vertices.end());
  return graph;
}

Component::Component(std::vector<Extremity> vertices, std::vector<AnnotatedEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::sort(vertices_.begin(), vertices_.end());
  std::sort(edges_.begin(), edges_.end(),
            [](const AnnotatedEdge& a, const AnnotatedEdge& b) { return a.adjacency < b.adjacency; });
  incident_.assign(vertices_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto& edge = edges_[e];
    edge.u = index_of(edge.adjacency.first());
    edge.v = index_of(edge.adjacency.second());
    incident_[static_cast<std::size_t>(edge.u)].push_back(static_cast<int>(e));
    incident_[static_cast<std::size_t>(edge.v)].push_back(static_cast<int>(e));
  }
  stats_ = compute_stats(vertices_, edges_);
}

int Component::index_of(const Extremity& x) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), x);
  if (it == vertices_.end() || *it != x) return -1;
  return static_cast<int>(it - vertices_.begin());
}

int Component::edge_index(const Adjacency& adj) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), adj,
                             [](const AnnotatedEdge& e, const Adjacency& a) { return e.adjacency < a; });
  if (it == edges_.end() || it->adjacency != adj) return -1;
  return static_cast<int>(it - edges_.begin());
}

bool Component::annotated(int edge, NodeId node) const {
  const auto& nodes = edges_[static_cast<std::size_t>(edge)].nodes;
  return std::binary_search(nodes.begin(), nodes.end(), node);
}

ComponentStats Component::compute_stats(const std::vector<Extremity>& vertices,
                                        const std::vector<AnnotatedEdge>& edges) {
  std::vector<int> degree(vertices.size(), 0);
  for (const auto& e : edges) {
    for (const auto& x : {e.adjacency.first(), e.adjacency.second()}) {
      auto it = std::lower_bound(vertices.begin(), vertices.end(), x);
      ++degree[static_cast<std::size_t>(it - vertices.begin())];
    }
  }
  ComponentStats s;
  s.vertex_count = static_cast<int>(vertices.size());
  for (int d : degree) {
    s.max_degree = std::max(s.max_degree, d);
    s.label_space_bound = saturating_mul(s.label_space_bound, static_cast<std::uint64_t>(1 + d));
  }
  return s;
}

std::vector<Component> connected_components(const GlobalAdjacencyGraph& graph) {
  const auto& verts = graph.vertices;
  auto index = [&](const Extremity& x) {
    return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), x) - verts.begin());
  };
  DisjointSets sets(verts.size());
  for (const auto& [adj, nodes] : graph.edges) sets.unite(index(adj.first()), index(adj.second()));

  // Representatives are the smallest vertex of each set, so ordering by the
  // representative orders components by their smallest extremity.
  std::vector<int> slot(verts.size(), -1);
  std::vector<std::vector<Extremity>> comp_vertices;
  std::vector<std::vector<AnnotatedEdge>> comp_edges;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto root = sets.find(i);
    if (slot[root] == -1) {
      slot[root] = static_cast<int>(comp_vertices.size());
      comp_vertices.emplace_back();
      comp_edges.emplace_back();
    }
    comp_vertices[static_cast<std::size_t>(slot[root])].push_back(verts[i]);
  }
  for (const auto& [adj, nodes] : graph.edges) {
    const auto c = static_cast<std::size_t>(slot[sets.find(index(adj.first()))]);
    comp_edges[c].push_back(AnnotatedEdge{adj, 0, 0, nodes});
  }
  std::vector<Component> out;
  out.reserve(comp_vertices.size());
  for (std::size_t c = 0; c < comp_vertices.size(); ++c) {
    out.emplace_back(std::move(comp_vertices[c]), std::move(comp_edges[c]));
  }
  return out;
}

bool is_conflict_free(const Component& component) {
  return component.vertices().size() == 2 && component.edges().size() == 1;
}

std::uint64_t dp_work_estimate(const Component& component) {
  const auto b = component.stats().label_space_bound;
  return saturating_mul(b, b);
}

}  // namespace wscj::graph
