#include "wscj/dp/sankoff.hpp"

#include <algorithm>
#include <bit>

#include "wscj/core/errors.hpp"

namespace wscj::dp {

namespace {

using graph::Component;

std::size_t word_count(const Component& c) { return std::max<std::size_t>(1, (c.edges().size() + 63) / 64); }

void require_capacity(const Component& component, std::uint64_t cap) {
  if (graph::dp_work_estimate(component) > cap) {
    throw CapacityExceeded("component with " + std::to_string(component.vertices().size()) +
                           " extremities has label-space bound " +
                           std::to_string(component.stats().label_space_bound) +
                           ", whose square exceeds the cap of " + std::to_string(cap));
  }
}

// Enumerates matchings of the edges annotated at `node` by per-vertex
// backtracking. A vertex either stays empty or takes an edge to a later,
// still free vertex, so every valid label is produced exactly once.
class LabelEnumerator {
 public:
  LabelEnumerator(const Component& component, NodeId node) : c_(component), node_(node) {
    choice_.assign(c_.vertices().size(), -1);
    decided_.assign(c_.vertices().size(), false);
  }

  template <typename Visit>
  void run(Visit&& visit) {
    recurse(0, visit);
  }

 private:
  template <typename Visit>
  void recurse(std::size_t i, Visit& visit) {
    while (i < choice_.size() && decided_[i]) ++i;
    if (i == choice_.size()) {
      visit(choice_);
      return;
    }
    decided_[i] = true;
    recurse(i + 1, visit);
    for (int e : c_.incident(static_cast<int>(i))) {
      const auto& edge = c_.edges()[static_cast<std::size_t>(e)];
      const auto other = static_cast<std::size_t>(edge.u == static_cast<int>(i) ? edge.v : edge.u);
      if (other < i || decided_[other] || !c_.annotated(e, node_)) continue;
      choice_[i] = e;
      choice_[other] = e;
      decided_[other] = true;
      recurse(i + 1, visit);
      decided_[other] = false;
      choice_[other] = -1;
      choice_[i] = -1;
    }
    decided_[i] = false;
  }

  const Component& c_;
  NodeId node_;
  std::vector<int> choice_;
  std::vector<bool> decided_;
};

std::vector<std::uint64_t> mask_of_edges(const std::vector<int>& edges, std::size_t words) {
  std::vector<std::uint64_t> mask(words, 0);
  for (int e : edges) mask[static_cast<std::size_t>(e) / 64] |= 1ull << (static_cast<unsigned>(e) % 64);
  return mask;
}

std::int64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::int64_t n = 0;
  for (std::size_t w = 0; w < words; ++w) n += std::popcount(a[w] ^ b[w]);
  return n;
}

// Edge indices of the leaf genome restricted to the component.
std::vector<int> leaf_edges(const Component& c, const AdjacencySet& genome) {
  std::vector<int> out;
  for (const auto& adj : genome) {
    const int e = c.edge_index(adj);
    if (e >= 0) out.push_back(e);
  }
  return out;
}

std::vector<Adjacency> adjacencies_of_mask(const Component& c, const std::uint64_t* mask,
                                           std::size_t words) {
  std::vector<Adjacency> out;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t bits = mask[w];
    while (bits) {
      const auto b = static_cast<std::size_t>(std::countr_zero(bits));
      out.push_back(c.edges()[w * 64 + b].adjacency);
      bits &= bits - 1;
    }
  }
  return out;
}

struct ChildChoice {
  std::vector<std::size_t> labels;  // argmin labels of the child given the parent label
  Cost best = kInfiniteCost;
};

ChildChoice child_argmin(const DpTable& t, NodeId child, const std::uint64_t* parent_mask) {
  const auto& row = t.row(child);
  const Cost chg = t.alpha().change_coefficient();
  ChildChoice out;
  for (std::size_t b = 0; b < row.n_labels; ++b) {
    const Cost c = row.cost[b] + row.own[b] +
                   chg * xor_popcount(parent_mask, &row.masks[b * t.words()], t.words());
    if (c < out.best) {
      out.best = c;
      out.labels.assign(1, b);
    } else if (c == out.best) {
      out.labels.push_back(b);
    }
  }
  return out;
}

// Top-down assignment; `pick` chooses among co-optimal alternatives with their
// subtree counts.
template <typename Pick>
ComponentSolution backtrack(const DpTable& t, Pick&& pick) {
  const auto& tree = t.tree();
  const auto& c = t.component();
  std::vector<std::size_t> chosen(tree.size(), 0);

  const auto& root_row = t.row(tree.root());
  std::vector<std::size_t> root_opts;
  std::vector<const BigCount*> root_counts;
  for (std::size_t a = 0; a < root_row.n_labels; ++a) {
    if (root_row.cost[a] + root_row.own[a] == t.optimum()) {
      root_opts.push_back(a);
      root_counts.push_back(&root_row.count[a]);
    }
  }
  chosen[static_cast<std::size_t>(tree.root())] = root_opts[pick(root_counts)];

  for (NodeId u : tree.pre_order()) {
    const auto& urow = t.row(u);
    const auto* umask = &urow.masks[chosen[static_cast<std::size_t>(u)] * t.words()];
    for (NodeId v : tree.children(u)) {
      const auto opts = child_argmin(t, v, umask);
      std::vector<const BigCount*> counts;
      counts.reserve(opts.labels.size());
      for (auto b : opts.labels) counts.push_back(&t.row(v).count[b]);
      chosen[static_cast<std::size_t>(v)] = opts.labels[pick(counts)];
    }
  }

  ComponentSolution sol;
  sol.per_node.assign(tree.size(), {});
  for (NodeId v : tree.internal_nodes()) {
    const auto& row = t.row(v);
    sol.per_node[static_cast<std::size_t>(v)] =
        adjacencies_of_mask(c, &row.masks[chosen[static_cast<std::size_t>(v)] * t.words()], t.words());
  }
  sol.objective = t.optimum();
  sol.cooptimal = t.cooptimal();
  return sol;
}

}  // namespace

std::vector<int> JointLabel::induced_edges(const Component& /*component*/) const {
  std::vector<int> out;
  for (int e : choice) {
    if (e >= 0) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_valid(const JointLabel& label, const Component& component, NodeId node) {
  if (label.choice.size() != component.vertices().size()) return false;
  for (std::size_t i = 0; i < label.choice.size(); ++i) {
    const int e = label.choice[i];
    if (e < 0) continue;
    if (static_cast<std::size_t>(e) >= component.edges().size()) return false;
    const auto& edge = component.edges()[static_cast<std::size_t>(e)];
    const auto idx = static_cast<int>(i);
    if (edge.u != idx && edge.v != idx) return false;
    const int other = edge.u == idx ? edge.v : edge.u;
    if (label.choice[static_cast<std::size_t>(other)] != e) return false;
    if (!component.annotated(e, node)) return false;
  }
  return true;
}

std::vector<JointLabel> enumerate_labels(const Component& component, NodeId node, std::uint64_t cap) {
  require_capacity(component, cap);
  std::vector<JointLabel> out;
  LabelEnumerator(component, node).run([&](const std::vector<int>& choice) {
    out.push_back(JointLabel{choice});
  });
  return out;
}

Cost branch_cost(const Component& component, const Phylogeny& phylogeny, const WeightTable& weights,
                 const Alpha& alpha, NodeId u, const JointLabel& label_u, NodeId v,
                 const JointLabel& label_v) {
  const auto& tree = phylogeny.tree();
  auto valid_at = [&](const JointLabel& l, NodeId n) {
    if (!tree.is_leaf(n)) return is_valid(l, component, n);
    // A leaf's only admissible label is its genome restricted to the component.
    JointLabel expected{std::vector<int>(component.vertices().size(), -1)};
    for (int e : leaf_edges(component, phylogeny.leaf_genome(n))) {
      const auto& edge = component.edges()[static_cast<std::size_t>(e)];
      expected.choice[static_cast<std::size_t>(edge.u)] = e;
      expected.choice[static_cast<std::size_t>(edge.v)] = e;
    }
    return l == expected;
  };
  if (!valid_at(label_u, u) || !valid_at(label_v, v)) return kInfiniteCost;
  const auto eu = label_u.induced_edges(component);
  const auto ev = label_v.induced_edges(component);
  std::vector<int> diff;
  std::set_symmetric_difference(eu.begin(), eu.end(), ev.begin(), ev.end(), std::back_inserter(diff));
  MicroWeight discarded = 0;
  if (!tree.is_leaf(v)) {
    for (std::size_t e = 0; e < component.edges().size(); ++e) {
      const auto idx = static_cast<int>(e);
      if (component.annotated(idx, v) && !std::binary_search(ev.begin(), ev.end(), idx)) {
        discarded += weights.get(v, component.edges()[e].adjacency);
      }
    }
  }
  return alpha.cost(static_cast<std::int64_t>(diff.size()), discarded);
}

Cost component_objective(const Component& component, const Phylogeny& phylogeny,
                         const WeightTable& weights, const Alpha& alpha,
                         const std::vector<std::vector<Adjacency>>& per_node) {
  const auto& tree = phylogeny.tree();
  auto label_of = [&](NodeId v) {
    std::vector<Adjacency> s;
    if (tree.is_leaf(v)) {
      for (const auto& adj : phylogeny.leaf_genome(v)) {
        if (component.edge_index(adj) >= 0) s.push_back(adj);
      }
    } else {
      s = per_node.at(static_cast<std::size_t>(v));
      std::sort(s.begin(), s.end());
    }
    return s;
  };
  std::int64_t changes = 0;
  MicroWeight discarded = 0;
  for (NodeId v : tree.post_order()) {
    const auto sv = label_of(v);
    if (const NodeId u = tree.parent(v); u != kNoNode) {
      const auto su = label_of(u);
      std::vector<Adjacency> diff;
      std::set_symmetric_difference(su.begin(), su.end(), sv.begin(), sv.end(), std::back_inserter(diff));
      changes += static_cast<std::int64_t>(diff.size());
    }
    if (tree.is_leaf(v)) continue;
    for (std::size_t e = 0; e < component.edges().size(); ++e) {
      const auto& adj = component.edges()[e].adjacency;
      if (component.annotated(static_cast<int>(e), v) && !std::binary_search(sv.begin(), sv.end(), adj)) {
        discarded += weights.get(v, adj);
      }
    }
  }
  return alpha.cost(changes, discarded);
}

DpTable build_table(const Component& component, const Phylogeny& phylogeny, const WeightTable& weights,
                    const Alpha& alpha, std::uint64_t cap) {
  require_capacity(component, cap);
  const auto& tree = phylogeny.tree();
  DpTable t;
  t.component_ = &component;
  t.tree_ = &tree;
  t.alpha_ = alpha;
  t.words_ = word_count(component);
  t.rows_.resize(tree.size());
  const auto words = t.words_;
  const Cost chg = alpha.change_coefficient();
  const Cost wcoef = alpha.weight_coefficient();

  for (NodeId v : tree.post_order()) {
    auto& row = t.rows_[static_cast<std::size_t>(v)];
    if (tree.is_leaf(v)) {
      row.n_labels = 1;
      row.masks = mask_of_edges(leaf_edges(component, phylogeny.leaf_genome(v)), words);
      row.own.assign(1, 0);
      row.cost.assign(1, 0);
      row.count.assign(1, BigCount(1));
      continue;
    }
    std::vector<MicroWeight> edge_weight(component.edges().size(), 0);
    MicroWeight annotated_total = 0;
    for (std::size_t e = 0; e < component.edges().size(); ++e) {
      if (component.annotated(static_cast<int>(e), v)) {
        edge_weight[e] = weights.get(v, component.edges()[e].adjacency);
        annotated_total += edge_weight[e];
      }
    }
    LabelEnumerator(component, v).run([&](const std::vector<int>& choice) {
      std::vector<int> edges;
      MicroWeight kept = 0;
      for (std::size_t i = 0; i < choice.size(); ++i) {
        const int e = choice[i];
        if (e < 0) continue;
        if (component.edges()[static_cast<std::size_t>(e)].u == static_cast<int>(i)) {
          edges.push_back(e);
          kept += edge_weight[static_cast<std::size_t>(e)];
        }
      }
      const auto mask = mask_of_edges(edges, words);
      row.masks.insert(row.masks.end(), mask.begin(), mask.end());
      row.own.push_back(wcoef * (annotated_total - kept));
      ++row.n_labels;
    });
    row.cost.assign(row.n_labels, 0);
    row.count.assign(row.n_labels, BigCount(1));

    for (NodeId child : tree.children(v)) {
      const auto& crow = t.rows_[static_cast<std::size_t>(child)];
      std::vector<Cost> through(crow.n_labels);
      for (std::size_t b = 0; b < crow.n_labels; ++b) through[b] = crow.cost[b] + crow.own[b];
      for (std::size_t a = 0; a < row.n_labels; ++a) {
        const auto* am = &row.masks[a * words];
        Cost best = kInfiniteCost;
        BigCount ways = 0;
        for (std::size_t b = 0; b < crow.n_labels; ++b) {
          const Cost c = through[b] + chg * xor_popcount(am, &crow.masks[b * words], words);
          if (c < best) {
            best = c;
            ways = crow.count[b];
          } else if (c == best) {
            ways += crow.count[b];
          }
        }
        row.cost[a] += best;
        row.count[a] *= ways;
      }
    }
  }

  const auto& root = t.rows_[static_cast<std::size_t>(tree.root())];
  t.optimum_ = kInfiniteCost;
  for (std::size_t a = 0; a < root.n_labels; ++a) {
    const Cost c = root.cost[a] + root.own[a];
    if (c < t.optimum_) {
      t.optimum_ = c;
      t.cooptimal_ = root.count[a];
    } else if (c == t.optimum_) {
      t.cooptimal_ += root.count[a];
    }
  }
  return t;
}

SolvedComponent solve_component(const Component& component, const Phylogeny& phylogeny,
                                const WeightTable& weights, const Alpha& alpha, std::uint64_t cap) {
  auto table = build_table(component, phylogeny, weights, alpha, cap);
  auto solution = backtrack_first(table);
  return SolvedComponent{std::move(solution), std::move(table)};
}

ComponentSolution backtrack_first(const DpTable& table) {
  return backtrack(table, [](const std::vector<const BigCount*>&) { return std::size_t{0}; });
}

BigCount count_cooptimal(const DpTable& table) { return table.cooptimal(); }

std::vector<ComponentSolution> sample_component(const DpTable& table, std::size_t n_samples,
                                                std::uint64_t seed) {
  std::vector<ComponentSolution> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    Rng rng(derive_seed(seed, i));
    auto pick = [&rng](const std::vector<const BigCount*>& counts) -> std::size_t {
      if (counts.size() == 1) return 0;
      BigCount total = 0;
      for (const auto* c : counts) total += *c;
      BigCount r = uniform_below(rng, total);
      for (std::size_t k = 0; k < counts.size(); ++k) {
        if (r < *counts[k]) return k;
        r -= *counts[k];
      }
      throw InternalError("sampling fell off the end of the co-optimal counts");
    };
    auto sol = backtrack(table, pick);
    sol.sample_index = i;
    sol.seed = seed;
    out.push_back(std::move(sol));
  }
  return out;
}

}  // namespace wscj::dp
