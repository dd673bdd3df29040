#include "wscj/core/weight_table.hpp"

#include "wscj/core/errors.hpp"

namespace wscj {

namespace {

void check_range(MicroWeight w) {
  if (w < 0 || w > kWeightDenominator) {
    throw InputError("weight " + std::to_string(to_real(w)) + " is outside [0,1]");
  }
}

}  // namespace

void WeightTable::set(NodeId node, const Adjacency& adj, MicroWeight w) {
  check_range(w);
  entries_[{node, adj}] = w;
}

bool WeightTable::insert(NodeId node, const Adjacency& adj, MicroWeight w) {
  check_range(w);
  return entries_.emplace(std::make_pair(node, adj), w).second;
}

MicroWeight WeightTable::get(NodeId node, const Adjacency& adj) const {
  auto it = entries_.find({node, adj});
  return it == entries_.end() ? 0 : it->second;
}

}  // namespace wscj
