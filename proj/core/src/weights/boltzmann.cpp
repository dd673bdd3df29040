#include "wscj/weights/boltzmann.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "wscj/core/errors.hpp"
#include "wscj/graph/adjacency_graph.hpp"

namespace wscj::weights {

namespace {

using Pair = std::array<double, 2>;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Message through one edge: out[s] = log sum_t exp(in[t] - [s != t] / kT).
Pair pass(const Pair& in, double penalty) {
  return {log_add(in[0], in[1] - penalty), log_add(in[1], in[0] - penalty)};
}

}  // namespace

std::vector<double> boltzmann_weights(const Phylogeny& phylogeny, const Adjacency& adjacency, double kt) {
  if (!(kt > 0.0) || !std::isfinite(kt)) throw InputError("kT must be a positive number");
  const auto& tree = phylogeny.tree();
  const double penalty = 1.0 / kt;
  const auto n = tree.size();
  std::vector<Pair> inside(n);
  std::vector<Pair> up(n);  // message from a node to its parent
  for (NodeId v : tree.post_order()) {
    const auto vi = static_cast<std::size_t>(v);
    if (tree.is_leaf(v)) {
      const bool has = phylogeny.leaf_genome(v).contains(adjacency);
      inside[vi] = {has ? kNegInf : 0.0, has ? 0.0 : kNegInf};
    } else {
      inside[vi] = {0.0, 0.0};
      for (NodeId c : tree.children(v)) {
        const auto& m = up[static_cast<std::size_t>(c)];
        inside[vi][0] += m[0];
        inside[vi][1] += m[1];
      }
      // Renormalize so values stay near zero; the shift cancels below.
      const double shift = std::max(inside[vi][0], inside[vi][1]);
      inside[vi][0] -= shift;
      inside[vi][1] -= shift;
    }
    up[vi] = pass(inside[vi], penalty);
  }

  std::vector<Pair> outside(n, Pair{0.0, 0.0});
  std::vector<double> weights(n, 0.0);
  for (NodeId v : tree.pre_order()) {
    const auto vi = static_cast<std::size_t>(v);
    const double l0 = outside[vi][0] + inside[vi][0];
    const double l1 = outside[vi][1] + inside[vi][1];
    const double z = log_add(l0, l1);
    weights[vi] = std::clamp(std::exp(l1 - z), 0.0, 1.0);
    for (NodeId c : tree.children(v)) {
      const auto ci = static_cast<std::size_t>(c);
      // Everything at v except the subtree of c.
      const Pair rest = {outside[vi][0] + inside[vi][0] - up[ci][0], outside[vi][1] + inside[vi][1] - up[ci][1]};
      Pair o = pass(rest, penalty);
      const double shift = std::max(o[0], o[1]);
      outside[ci] = {o[0] - shift, o[1] - shift};
    }
  }
  return weights;
}

WeightTable boltzmann_weight_table(const Phylogeny& phylogeny, double kt, unsigned threads) {
  if (!(kt > 0.0) || !std::isfinite(kt)) throw InputError("kT must be a positive number");
  const auto candidate_sets = graph::candidate_adjacencies(phylogeny);
  const auto& candidates = candidate_sets.all();
  std::vector<std::vector<double>> results(candidates.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < candidates.size(); i = next++) {
      results[i] = boltzmann_weights(phylogeny, candidates[i], kt);
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(candidates.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  WeightTable table;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (NodeId v : phylogeny.tree().internal_nodes()) {
      table.set(v, candidates[i], quantize_weight(results[i][static_cast<std::size_t>(v)]));
    }
  }
  return table;
}

}  // namespace wscj::weights
