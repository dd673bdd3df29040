#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <map>

#include "builders.hpp"
#include "oracles.hpp"
#include "wscj/core/errors.hpp"
#include "wscj/core/genome.hpp"
#include "wscj/dp/sankoff.hpp"
#include "wscj/graph/adjacency_graph.hpp"

namespace wscj {
namespace {

using testing::A;

// Random instances stay at or below 8 extremities per component, small
// enough for the DP whatever the work estimate says.
constexpr std::uint64_t kNoCap = std::numeric_limits<std::uint64_t>::max();

std::vector<graph::Component> components_of(const Phylogeny& phylo, const WeightTable& w, MicroWeight x = 0) {
  return graph::connected_components(
      graph::build_global_graph(phylo, graph::candidate_adjacencies(phylo), w, x));
}

// Union of per-component solutions plus leaf genomes.
Labeling assemble(const Phylogeny& phylo, const std::vector<dp::ComponentSolution>& parts) {
  const Tree& tree = phylo.tree();
  std::vector<std::vector<Adjacency>> per(tree.size());
  for (const auto& p : parts) {
    for (std::size_t v = 0; v < tree.size(); ++v) per[v].insert(per[v].end(), p.per_node[v].begin(), p.per_node[v].end());
  }
  Labeling lab(tree.size());
  for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
    lab[static_cast<std::size_t>(v)] =
        tree.is_leaf(v) ? phylo.leaf_genome(v) : AdjacencySet(per[static_cast<std::size_t>(v)], phylo.universe());
  }
  return lab;
}

double chi_square_p(const std::vector<std::uint64_t>& observed, double expected) {
  double stat = 0;
  for (auto o : observed) stat += (static_cast<double>(o) - expected) * (static_cast<double>(o) - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

TEST(EnumerateLabels, SingleEdge) {
  const auto phylo = testing::make_phylogeny("(P,Q)R;", testing::genome_text({{"P", "L", "1 2"}, {"Q", "L", "1 2"}}));
  const auto cs = components_of(phylo, WeightTable{});
  ASSERT_EQ(cs.size(), 1u);
  const auto labels = dp::enumerate_labels(cs[0], phylo.tree().root());
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_TRUE(labels[0].induced_edges(cs[0]).empty());
  EXPECT_EQ(labels[1].induced_edges(cs[0]), std::vector<int>{0});
}

TEST(EnumerateLabels, StarHasThreeValidLabels) {
  const auto phylo = testing::make_phylogeny("(P,Q)R;", testing::genome_text({{"P", "L", "1 2 3"}, {"Q", "L", "1 3 2"}}));
  WeightTable w;
  const NodeId r = phylo.tree().root();
  w.set_real(r, A("1h", "2t"), 0.5);
  w.set_real(r, A("1h", "3t"), 0.5);
  const auto cs = components_of(phylo, w, 1);
  ASSERT_EQ(cs.size(), 1u);
  const auto& c = cs[0];
  EXPECT_EQ(c.edges().size(), 2u);
  EXPECT_EQ(dp::enumerate_labels(c, r).size(), 3u);

  // 12 raw per-vertex combinations, exactly 3 valid.
  int valid = 0;
  std::vector<std::vector<int>> options;
  for (int i = 0; i < static_cast<int>(c.vertices().size()); ++i) {
    std::vector<int> o{-1};
    for (int e : c.incident(i)) o.push_back(e);
    options.push_back(o);
  }
  for (int a : options[0]) {
    for (int b : options[1]) {
      for (int d : options[2]) {
        valid += dp::is_valid(dp::JointLabel{{a, b, d}}, c, r);
      }
    }
  }
  EXPECT_EQ(valid, 3);
}

TEST(EnumerateLabels, UnannotatedNodeOnlyEmpty) {
  const auto phylo = testing::make_phylogeny("((P,Q)U,S)R;", testing::genome_text({{"P", "L", "1 2"}, {"Q", "L", "1 2"}, {"S", "L", "2 1"}}));
  const NodeId u = *phylo.tree().find("U");
  const NodeId r = *phylo.tree().find("R");
  WeightTable w;
  w.set_real(u, A("1h", "2t"), 0.9);
  const auto cs = components_of(phylo, w, quantize_weight(0.5));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(dp::enumerate_labels(cs[0], u).size(), 2u);
  const auto at_root = dp::enumerate_labels(cs[0], r);
  ASSERT_EQ(at_root.size(), 1u);
  EXPECT_TRUE(at_root[0].induced_edges(cs[0]).empty());
}

TEST(EnumerateLabels, CapacityExceeded) {
  const auto phylo = testing::make_phylogeny("(P,Q,S)R;", testing::genome_text({{"P", "L", "1 2 3"}, {"Q", "L", "1 3 2"}, {"S", "L", "2 1 3"}}));
  const auto cs = components_of(phylo, WeightTable{});
  ASSERT_EQ(cs.size(), 1u);
  const auto bound = cs[0].stats().label_space_bound;
  EXPECT_THROW(dp::enumerate_labels(cs[0], phylo.tree().root(), bound * bound - 1), CapacityExceeded);
  EXPECT_NO_THROW(dp::enumerate_labels(cs[0], phylo.tree().root(), bound * bound));
  EXPECT_LE(dp::enumerate_labels(cs[0], phylo.tree().root()).size(), bound);
}

TEST(BranchCost, Examples) {
  // Cherry under U, U under R; candidates 1h~2t and 1h~3t at U.
  const auto phylo = testing::make_phylogeny("((P,Q)U,S)R;", testing::genome_text({{"P", "L", "1 2 3"}, {"Q", "L", "1 3 2"}, {"S", "L", "1 2 3"}}));
  const NodeId u = *phylo.tree().find("U");
  const NodeId r = *phylo.tree().find("R");
  WeightTable w;
  const auto a = A("1h", "2t");
  const auto b = A("1h", "3t");
  w.set_real(u, a, 0.8);
  w.set_real(u, b, 0.3);
  w.set_real(r, a, 0.8);
  w.set_real(r, b, 0.3);
  const auto cs = components_of(phylo, w, 1);
  const auto it = std::find_if(cs.begin(), cs.end(), [&](const auto& c) { return c.edge_index(a) >= 0; });
  ASSERT_NE(it, cs.end());
  const auto& c = *it;
  const auto labels_u = dp::enumerate_labels(c, u);
  const auto labels_r = dp::enumerate_labels(c, r);
  auto label_with = [&](const std::vector<dp::JointLabel>& labels, std::vector<int> edges) {
    for (const auto& l : labels) {
      if (l.induced_edges(c) == edges) return l;
    }
    throw std::logic_error("label not found");
  };
  const int ea = c.edge_index(a);
  const int eb = c.edge_index(b);
  const auto ra = label_with(labels_r, {ea});
  const auto ua = label_with(labels_u, {ea});
  const auto ub = label_with(labels_u, {eb});
  const auto u0 = label_with(labels_u, {});
  const auto r0 = label_with(labels_r, {});

  // Same labels, only the conflicting weight-0.3 candidate is missing at U.
  EXPECT_EQ(dp::branch_cost(c, phylo, w, Alpha(0, 1), r, ra, u, ua), 0);
  // Pure SCJ: one adjacency differs.
  EXPECT_EQ(dp::branch_cost(c, phylo, w, Alpha(0, 1), r, r0, u, ua), kWeightDenominator);
  // alpha 1/2: U drops a (0.8) and gains b, against a parent holding nothing:
  // one change and 0.8 discarded gives 0.9, i.e. 1,800,000 units of 1/(2*10^6).
  EXPECT_EQ(dp::branch_cost(c, phylo, w, Alpha(1, 2), r, r0, u, ub), 1'800'000);
  // Nothing kept at U: both weights count.
  EXPECT_EQ(dp::branch_cost(c, phylo, w, Alpha(1, 1), r, r0, u, u0), 1'100'000);
  dp::JointLabel broken = ua;
  broken.choice[static_cast<std::size_t>(c.edges()[static_cast<std::size_t>(ea)].v)] = -1;
  EXPECT_EQ(dp::branch_cost(c, phylo, w, Alpha(0, 1), r, ra, u, broken), kInfiniteCost);
}

TEST(SolveComponent, ConflictFreeSharedAdjacencyCostsNothing) {
  const auto phylo = testing::make_phylogeny("((P,Q),S);", testing::genome_text({{"P", "L", "1 2"}, {"Q", "L", "1 2"}, {"S", "L", "1 2"}}));
  const auto cs = components_of(phylo, WeightTable{});
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_TRUE(graph::is_conflict_free(cs[0]));
  const auto s = dp::solve_component(cs[0], phylo, WeightTable{}, Alpha(0, 1));
  EXPECT_EQ(s.solution.objective, 0);
  EXPECT_EQ(*s.solution.cooptimal, 1);
  for (NodeId v : phylo.tree().internal_nodes()) {
    EXPECT_EQ(s.solution.per_node[static_cast<std::size_t>(v)], std::vector<Adjacency>{A("1h", "2t")});
  }
}

TEST(SolveComponent, CutPlusJoinAcrossOneEdge) {
  // x_t~y_h on one side, x_t~z_t on the other.
  const auto phylo = testing::make_phylogeny("(P,Q)R;", "P\tL\t2 1\nP\tL\t3\nQ\tL\t-3 1\nQ\tL\t2\n");
  WeightTable w;
  const auto cs = components_of(phylo, w);
  const auto it = std::find_if(cs.begin(), cs.end(), [&](const auto& c) { return c.edge_index(A("1t", "2h")) >= 0; });
  ASSERT_NE(it, cs.end());
  EXPECT_GE(it->edge_index(A("1t", "3t")), 0);
  const auto s = dp::solve_component(*it, phylo, w, Alpha(0, 1));
  EXPECT_EQ(s.solution.objective, 2 * kWeightDenominator);
  // Root empty, or either adjacency: three optima.
  EXPECT_EQ(*s.solution.cooptimal, 3);
}

TEST(CountCooptimal, SymmetricTie) {
  const auto phylo = testing::make_phylogeny("(P,Q)R;", testing::genome_text({{"P", "L", "1 2"}, {"Q", "L", "2 1"}}));
  const auto cs = components_of(phylo, WeightTable{});
  for (const auto& c : cs) {
    const auto s = dp::solve_component(c, phylo, WeightTable{}, Alpha(0, 1));
    EXPECT_EQ(dp::count_cooptimal(s.table), 2);
    EXPECT_EQ(s.table.cooptimal(), 2);
  }
}

TEST(CountCooptimal, UniqueOptimum) {
  const auto phylo = testing::make_phylogeny("((P,Q),S);", testing::genome_text({{"P", "L", "1 2 3"}, {"Q", "L", "1 2 3"}, {"S", "L", "1 2 3"}}));
  for (const auto& c : components_of(phylo, WeightTable{})) {
    EXPECT_EQ(dp::count_cooptimal(dp::solve_component(c, phylo, WeightTable{}, Alpha(0, 1)).table), 1);
  }
}

TEST(CountCooptimal, ProductOverIndependentDecisions) {
  // Two unrelated ties: 1h~2t and 3h~4t each present in one leaf only.
  const auto phylo = testing::make_phylogeny("(P,Q)R;", "P\tL\t1 2\nP\tL\t3 4\nQ\tL\t2\nQ\tL\t1\nQ\tL\t4\nQ\tL\t3\n");
  const auto cs = components_of(phylo, WeightTable{});
  ASSERT_EQ(cs.size(), 2u);
  BigCount total = 1;
  for (const auto& c : cs) total *= dp::count_cooptimal(dp::solve_component(c, phylo, WeightTable{}, Alpha(0, 1)).table);
  EXPECT_EQ(total, 4);
  EXPECT_EQ(testing::BruteLabeling(phylo, WeightTable{}, Alpha(0, 1)).tree_optimum().count, 4);
}

struct OracleCase {
  testing::Instance inst;
  Alpha alpha;
};

std::vector<OracleCase> oracle_cases(std::uint64_t seed, int n) {
  Rng rng(seed);
  const std::vector<Alpha> grid{Alpha(0, 1), Alpha(1, 4), Alpha(1, 2), Alpha(3, 4), Alpha(1, 1)};
  std::vector<OracleCase> out;
  for (int i = 0; i < n; ++i) out.push_back({testing::random_instance(rng), grid[static_cast<std::size_t>(i) % grid.size()]});
  return out;
}

TEST(SolveComponent, MatchesBruteForceOnRandomInstances) {
  int product_checked = 0;
  for (const auto& [inst, alpha] : oracle_cases(derive_seed(501, 0), 120)) {
    const auto& phylo = inst.phylogeny;
    const testing::BruteLabeling brute(phylo, inst.weights, alpha);
    const auto expect = brute.tree_optimum();
    if (const auto p = brute.product_optimum(200'000)) {
      ++product_checked;
      EXPECT_EQ(p->cost, expect.cost);
      EXPECT_EQ(p->count, expect.count);
    }
    Cost total = 0;
    BigCount count = 1;
    std::vector<dp::ComponentSolution> parts;
    for (const auto& c : components_of(phylo, inst.weights)) {
      const auto s = dp::solve_component(c, phylo, inst.weights, alpha, kNoCap);
      EXPECT_EQ(s.solution.objective, dp::component_objective(c, phylo, inst.weights, alpha, s.solution.per_node));
      total += s.solution.objective;
      count *= *s.solution.cooptimal;
      parts.push_back(s.solution);
    }
    EXPECT_EQ(total, expect.cost);
    EXPECT_EQ(count, expect.count);
    const auto lab = assemble(phylo, parts);
    for (const auto& s : lab) EXPECT_TRUE(s.is_consistent());
    EXPECT_EQ(brute.cost(brute.masks_of(lab)), expect.cost);
    EXPECT_EQ(labeling_objective(phylo, lab, inst.weights, alpha).cost, expect.cost);
  }
  EXPECT_GT(product_checked, 20);
}

TEST(SolveComponent, LabelCountWithinBound) {
  for (const auto& [inst, alpha] : oracle_cases(derive_seed(502, 0), 40)) {
    for (const auto& c : components_of(inst.phylogeny, inst.weights)) {
      for (NodeId v : inst.phylogeny.tree().internal_nodes()) {
        EXPECT_LE(dp::enumerate_labels(c, v, kNoCap).size(), c.stats().label_space_bound);
      }
    }
  }
}

TEST(SolveComponent, ObjectiveSplitIsMonotoneInAlpha) {
  Rng rng(derive_seed(503, 0));
  for (int trial = 0; trial < 25; ++trial) {
    const auto inst = testing::random_instance(rng);
    std::int64_t prev_changes = -1;
    MicroWeight prev_lost = std::numeric_limits<MicroWeight>::max();
    for (int k = 0; k <= 10; ++k) {
      const Alpha alpha(k, 10);
      std::vector<dp::ComponentSolution> parts;
      for (const auto& c : components_of(inst.phylogeny, inst.weights)) {
        parts.push_back(dp::solve_component(c, inst.phylogeny, inst.weights, alpha, kNoCap).solution);
      }
      const auto r = labeling_objective(inst.phylogeny, assemble(inst.phylogeny, parts), inst.weights, alpha);
      EXPECT_GE(r.scj_changes, prev_changes);
      EXPECT_LE(r.discarded, prev_lost);
      prev_changes = r.scj_changes;
      prev_lost = r.discarded;
    }
  }
}

TEST(Sampling, SamplesAreOptimalAndCoverTheOptima) {
  for (const auto& [inst, alpha] : oracle_cases(derive_seed(504, 0), 40)) {
    const auto& phylo = inst.phylogeny;
    for (const auto& c : components_of(phylo, inst.weights)) {
      const auto s = dp::solve_component(c, phylo, inst.weights, alpha, kNoCap);
      const auto samples = dp::sample_component(s.table, 200, 9);
      std::set<std::vector<std::vector<Adjacency>>> seen;
      for (const auto& x : samples) {
        EXPECT_EQ(x.objective, s.solution.objective);
        EXPECT_EQ(dp::component_objective(c, phylo, inst.weights, alpha, x.per_node), s.solution.objective);
        seen.insert(x.per_node);
      }
      EXPECT_LE(BigCount(seen.size()), *s.solution.cooptimal);
      if (*s.solution.cooptimal <= 4) {
        EXPECT_EQ(BigCount(seen.size()), *s.solution.cooptimal);
      }
    }
  }
}

TEST(Sampling, UniqueOptimumRepeats) {
  const auto phylo = testing::make_phylogeny("((P,Q),S);", testing::genome_text({{"P", "L", "1 2 3"}, {"Q", "L", "1 2 3"}, {"S", "L", "1 2 3"}}));
  for (const auto& c : components_of(phylo, WeightTable{})) {
    const auto s = dp::solve_component(c, phylo, WeightTable{}, Alpha(0, 1));
    for (const auto& x : dp::sample_component(s.table, 50, 3)) EXPECT_EQ(x.per_node, s.solution.per_node);
  }
}

TEST(Sampling, SymmetricTieIsUniform) {
  const auto phylo = testing::make_phylogeny("(P,Q)R;", testing::genome_text({{"P", "L", "1 2"}, {"Q", "L", "1 -2"}}));
  const auto cs = components_of(phylo, WeightTable{});
  const auto it = std::find_if(cs.begin(), cs.end(), [](const auto& c) { return c.edge_index(A("1h", "2t")) >= 0; });
  ASSERT_NE(it, cs.end());
  const auto s = dp::solve_component(*it, phylo, WeightTable{}, Alpha(0, 1));
  ASSERT_EQ(*s.solution.cooptimal, 3);
  std::map<std::vector<std::vector<Adjacency>>, std::uint64_t> freq;
  for (const auto& x : dp::sample_component(s.table, 10'000, 2016)) ++freq[x.per_node];
  ASSERT_EQ(freq.size(), 3u);
  std::vector<std::uint64_t> obs;
  for (const auto& [k, n] : freq) obs.push_back(n);
  EXPECT_GT(chi_square_p(obs, 10'000.0 / 3), 0.01);
}

TEST(Sampling, FixedSeedIsReproducibleAndPrefixStable) {
  const auto phylo = testing::make_phylogeny("((P,Q),(S,T));", testing::genome_text({{"P", "L", "1 2 3"}, {"Q", "L", "1 3 2"}, {"S", "L", "2 1 3"}, {"T", "L", "3 2 1"}}));
  for (const auto& c : components_of(phylo, WeightTable{})) {
    const auto s = dp::solve_component(c, phylo, WeightTable{}, Alpha(0, 1));
    const auto a = dp::sample_component(s.table, 100, 77);
    const auto b = dp::sample_component(s.table, 100, 77);
    const auto prefix = dp::sample_component(s.table, 10, 77);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].per_node, b[i].per_node);
    for (std::size_t i = 0; i < prefix.size(); ++i) EXPECT_EQ(a[i].per_node, prefix[i].per_node);
  }
}

TEST(Backtrack, FirstMinimumIsDeterministic) {
  const auto phylo = testing::make_phylogeny("(P,Q)R;", testing::genome_text({{"P", "L", "1 2"}, {"Q", "L", "2 1"}}));
  for (const auto& c : components_of(phylo, WeightTable{})) {
    const auto s = dp::solve_component(c, phylo, WeightTable{}, Alpha(0, 1));
    // The empty label comes first and is optimal.
    EXPECT_TRUE(s.solution.per_node[static_cast<std::size_t>(phylo.tree().root())].empty());
    EXPECT_EQ(dp::backtrack_first(s.table).per_node, s.solution.per_node);
  }
}

}  // namespace
}  // namespace wscj
