#pragma once

#include <map>
#include <utility>
#include <vector>

#include "wscj/core/adjacency.hpp"
#include "wscj/core/phylogeny.hpp"
#include "wscj/core/scaled.hpp"

namespace wscj {

// Per-node adjacency weights w_{v,a} on the 10^-6 grid. Missing entries read
// as zero.
class WeightTable {
 public:
  WeightTable() = default;

  void set(NodeId node, const Adjacency& adj, MicroWeight w);
  void set_real(NodeId node, const Adjacency& adj, double w) { set(node, adj, quantize_weight(w)); }
  // Returns false if the entry already exists (the table is left unchanged).
  bool insert(NodeId node, const Adjacency& adj, MicroWeight w);

  MicroWeight get(NodeId node, const Adjacency& adj) const;
  double get_real(NodeId node, const Adjacency& adj) const { return to_real(get(node, adj)); }

  const std::map<std::pair<NodeId, Adjacency>, MicroWeight>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::pair<NodeId, Adjacency>, MicroWeight> entries_;
};

}  // namespace wscj
