#include "wscj/sim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "wscj/core/errors.hpp"
#include "wscj/core/genome.hpp"
#include "wscj/core/random.hpp"

namespace wscj::sim {

void SimConfig::validate() const {
  if (n_markers < 2) throw InputError("simulation needs at least 2 markers");
  if (n_leaves < 2) throw InputError("simulation needs at least 2 leaves");
  if (!(birth_rate > 0.0) || !std::isfinite(birth_rate)) throw InputError("birth rate must be positive");
  if (!(death_rate >= 0.0) || death_rate > birth_rate) {
    throw InputError("death rate must lie in [0, birth rate]");
  }
  if (!(diameter_factor > 0.0) || !std::isfinite(diameter_factor)) {
    throw InputError("diameter factor must be positive");
  }
  if (!(p_inversion >= 0.0 && p_inversion <= 1.0)) throw InputError("inversion probability must lie in [0,1]");
}

namespace {

double exponential(Rng& rng, double rate) { return -std::log1p(-uniform_unit(rng)) / rate; }

// Raw birth-death history: node i has parent and the time span it covers.
struct Lineage {
  int parent = -1;
  double start = 0.0;
  double end = 0.0;
  bool alive = true;
  std::vector<int> children;
};

std::vector<Lineage> grow(const SimConfig& c, Rng& rng) {
  while (true) {
    std::vector<Lineage> nodes{Lineage{}};
    std::vector<int> active{0};
    double t = 0.0;
    while (!active.empty() && static_cast<int>(active.size()) < c.n_leaves) {
      const double total = static_cast<double>(active.size()) * (c.birth_rate + c.death_rate);
      t += exponential(rng, total);
      const auto pick = static_cast<std::size_t>(uniform_below(rng, active.size()));
      const int id = active[pick];
      nodes[static_cast<std::size_t>(id)].end = t;
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick));
      if (uniform_unit(rng) * (c.birth_rate + c.death_rate) < c.birth_rate) {
        for (int k = 0; k < 2; ++k) {
          const int child = static_cast<int>(nodes.size());
          nodes.push_back(Lineage{id, t, t, true, {}});
          nodes[static_cast<std::size_t>(id)].children.push_back(child);
          active.push_back(child);
        }
      } else {
        nodes[static_cast<std::size_t>(id)].alive = false;
      }
    }
    if (active.empty()) continue;  // extinct: start over
    // Survivors run on until the next event would have happened.
    t += exponential(rng, static_cast<double>(active.size()) * (c.birth_rate + c.death_rate));
    for (int id : active) nodes[static_cast<std::size_t>(id)].end = t;
    return nodes;
  }
}

}  // namespace

Tree simulate_tree(const SimConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const auto raw = grow(config, rng);

  // Keep lineages with surviving descendants, suppressing unary nodes.
  std::vector<char> survives(raw.size(), 0);
  for (std::size_t i = raw.size(); i-- > 0;) {
    if (raw[i].children.empty()) {
      survives[i] = raw[i].alive ? 1 : 0;
    } else {
      for (int ch : raw[i].children) survives[i] |= survives[static_cast<std::size_t>(ch)];
    }
  }
  std::vector<TreeNode> nodes;
  // Returns the new id of the subtree rooted at raw node i (skipping unary
  // chains) with `extra` length accumulated from suppressed ancestors.
  std::function<NodeId(int, double)> build = [&](int i, double extra) -> NodeId {
    const auto& r = raw[static_cast<std::size_t>(i)];
    const double length = extra + (r.end - r.start);
    std::vector<int> kept;
    for (int ch : r.children) {
      if (survives[static_cast<std::size_t>(ch)]) kept.push_back(ch);
    }
    if (kept.size() == 1) return build(kept.front(), length);
    std::vector<NodeId> kids;
    for (int ch : kept) kids.push_back(build(ch, 0.0));
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back(TreeNode{"", kNoNode, kids, length});
    for (NodeId k : kids) nodes[static_cast<std::size_t>(k)].parent = id;
    return id;
  };
  const NodeId root = build(0, 0.0);
  nodes[static_cast<std::size_t>(root)].branch_length = 0.0;

  // Nodes were appended in post-order; name them in that order.
  int leaf_no = 0;
  int anc_no = 0;
  for (auto& n : nodes) {
    n.name = n.children.empty() ? "L" + std::to_string(++leaf_no) : "anc" + std::to_string(++anc_no);
  }
  Tree unscaled(nodes);
  const double diameter = tree_diameter(unscaled);
  const double scale = diameter > 0.0 ? config.diameter_factor * config.n_markers / diameter : 0.0;
  for (auto& n : nodes) n.branch_length *= scale;
  return Tree(std::move(nodes));
}

double tree_diameter(const Tree& tree) {
  std::vector<double> height(tree.size(), 0.0);  // longest path down to a leaf
  double best = 0.0;
  for (NodeId v : tree.post_order()) {
    double first = 0.0;
    double second = 0.0;
    for (NodeId c : tree.children(v)) {
      const double h = height[static_cast<std::size_t>(c)] + tree.node(c).branch_length;
      if (h > first) {
        second = first;
        first = h;
      } else if (h > second) {
        second = h;
      }
    }
    height[static_cast<std::size_t>(v)] = first;
    if (tree.children(v).size() >= 2) best = std::max(best, first + second);
  }
  return best;
}

LinearGenome apply_inversion(LinearGenome genome, std::size_t chromosome, std::size_t i, std::size_t j) {
  if (chromosome >= genome.size()) throw InputError("inversion on a missing chromosome");
  auto& chr = genome[chromosome];
  if (i > j || j >= chr.size()) throw InputError("inversion segment out of range");
  std::reverse(chr.begin() + static_cast<std::ptrdiff_t>(i), chr.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  for (std::size_t k = i; k <= j; ++k) chr[k] = -chr[k];
  return genome;
}

LinearGenome apply_translocation(LinearGenome genome, std::size_t a, std::size_t i, std::size_t b, std::size_t j) {
  if (a >= genome.size() || b >= genome.size() || a == b) {
    throw InputError("translocation needs two distinct chromosomes");
  }
  auto& ca = genome[a];
  auto& cb = genome[b];
  if (i > ca.size() || j > cb.size()) throw InputError("translocation cut out of range");
  if (i + (cb.size() - j) == 0 || j + (ca.size() - i) == 0) {
    throw InputError("translocation would leave an empty chromosome");
  }
  std::vector<int> na(ca.begin(), ca.begin() + static_cast<std::ptrdiff_t>(i));
  na.insert(na.end(), cb.begin() + static_cast<std::ptrdiff_t>(j), cb.end());
  std::vector<int> nb(cb.begin(), cb.begin() + static_cast<std::ptrdiff_t>(j));
  nb.insert(nb.end(), ca.begin() + static_cast<std::ptrdiff_t>(i), ca.end());
  ca = std::move(na);
  cb = std::move(nb);
  return genome;
}

AdjacencySet genome_adjacencies(const LinearGenome& genome, const MarkerUniverse& universe) {
  std::vector<Adjacency> all;
  for (const auto& chr : genome) {
    auto part = chromosome_adjacencies(chr, CarKind::kLinear);
    all.insert(all.end(), part.begin(), part.end());
  }
  return AdjacencySet(std::move(all), universe);
}

namespace {

LinearGenome random_inversion(LinearGenome g, Rng& rng) {
  std::size_t total = 0;
  for (const auto& chr : g) total += chr.size();
  // Chromosome chosen in proportion to its length, then two positions.
  auto pos = static_cast<std::size_t>(uniform_below(rng, total));
  std::size_t c = 0;
  while (pos >= g[c].size()) pos -= g[c++].size();
  const auto other = static_cast<std::size_t>(uniform_below(rng, g[c].size()));
  return apply_inversion(std::move(g), c, std::min(pos, other), std::max(pos, other));
}

LinearGenome random_translocation(LinearGenome g, Rng& rng) {
  const auto n = g.size();
  const auto a = static_cast<std::size_t>(uniform_below(rng, n));
  auto b = static_cast<std::size_t>(uniform_below(rng, n - 1));
  if (b >= a) ++b;
  while (true) {
    const auto i = static_cast<std::size_t>(uniform_below(rng, g[a].size() + 1));
    const auto j = static_cast<std::size_t>(uniform_below(rng, g[b].size() + 1));
    if (i + (g[b].size() - j) == 0 || j + (g[a].size() - i) == 0) continue;
    return apply_translocation(std::move(g), a, i, b, j);
  }
}

}  // namespace

SimResult evolve(const SimConfig& config) {
  const Tree tree = simulate_tree(config);
  Rng rng(derive_seed(config.seed, 1));
  const auto n = tree.size();
  SimResult out;
  out.genomes.resize(n);
  out.branch_events.assign(n, 0);
  out.inversions.assign(n, 0);
  out.translocations.assign(n, 0);
  LinearGenome root(1);
  for (int m = 1; m <= config.n_markers; ++m) root[0].push_back(m);
  out.genomes[static_cast<std::size_t>(tree.root())] = root;
  for (NodeId v : tree.pre_order()) {
    const NodeId u = tree.parent(v);
    if (u == kNoNode) continue;
    const auto vi = static_cast<std::size_t>(v);
    LinearGenome g = out.genomes[static_cast<std::size_t>(u)];
    const auto events = static_cast<std::int64_t>(std::floor(std::max(0.0, tree.node(v).branch_length) + 0.5));
    for (std::int64_t e = 0; e < events; ++e) {
      const bool inversion = uniform_unit(rng) < config.p_inversion || g.size() < 2;
      if (inversion) {
        g = random_inversion(std::move(g), rng);
        ++out.inversions[vi];
      } else {
        g = random_translocation(std::move(g), rng);
        ++out.translocations[vi];
      }
    }
    out.branch_events[vi] = events;
    out.total_events += events;
    out.genomes[vi] = std::move(g);
  }
  const auto universe = make_universe_range(config.n_markers);
  out.truth.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.truth[v] = genome_adjacencies(out.genomes[v], universe);
  std::vector<AdjacencySet> leaf_sets(n);
  for (NodeId v : tree.leaves()) leaf_sets[static_cast<std::size_t>(v)] = out.truth[static_cast<std::size_t>(v)];
  out.phylogeny = Phylogeny(tree, std::move(leaf_sets));
  return out;
}

}  // namespace wscj::sim
