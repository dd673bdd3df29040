#include <gtest/gtest.h>

#include "builders.hpp"
#include "oracles.hpp"
#include "wscj/core/errors.hpp"
#include "wscj/core/genome.hpp"
#include "wscj/core/random.hpp"
#include "wscj/core/scaled.hpp"
#include "wscj/core/weight_table.hpp"

namespace wscj {
namespace {

using testing::A;
using testing::set_of;
using testing::X;

TEST(Extremity, OrdersTailBeforeHead) {
  EXPECT_LT(X("1t"), X("1h"));
  EXPECT_LT(X("1h"), X("2t"));
  EXPECT_EQ(X("12h").to_string(), "12h");
  EXPECT_THROW(X("0h"), InputError);
  EXPECT_THROW(X("3x"), InputError);
}

TEST(Adjacency, CanonicalOrderAndRejections) {
  const auto a = A("2t", "1h");
  EXPECT_EQ(a.first(), X("1h"));
  EXPECT_EQ(a.second(), X("2t"));
  EXPECT_EQ(a, A("1h", "2t"));
  EXPECT_THROW(A("1h", "1h"), InputError);
  EXPECT_THROW(A("1h", "1t"), InputError);
}

TEST(Consistency, Examples) {
  EXPECT_TRUE(check_consistency({}).consistent);
  const std::vector<Adjacency> path{A("1h", "2t"), A("2h", "3t")};
  EXPECT_TRUE(check_consistency(path).consistent);
  const std::vector<Adjacency> star{A("1h", "2t"), A("1h", "3t")};
  const auto r = check_consistency(star);
  EXPECT_FALSE(r.consistent);
  ASSERT_EQ(r.conflicts.size(), 1u);
  EXPECT_EQ(r.conflicts[0], X("1h"));
}

TEST(ScjDistance, Examples) {
  const auto u = make_universe_range(3);
  const auto a = set_of({A("1h", "2t"), A("2h", "3t")}, u);
  EXPECT_EQ(scj_distance(a, a), 0);
  EXPECT_EQ(scj_distance(set_of({A("1h", "2t")}, u), set_of({}, u)), 1);
  EXPECT_EQ(scj_distance(a, set_of({A("1h", "3t")}, u)), 3);
  EXPECT_THROW(scj_distance(a, set_of({}, make_universe_range(4))), InputError);
}

TEST(DcjDistance, Examples) {
  const auto u3 = make_universe_range(3);
  const auto g = AdjacencySet(chromosome_adjacencies({1, 2, 3}, CarKind::kLinear), u3);
  EXPECT_EQ(dcj_distance(g, g), 0);
  const auto inv = AdjacencySet(chromosome_adjacencies({1, -2, 3}, CarKind::kLinear), u3);
  EXPECT_EQ(dcj_distance(g, inv), 1);
  EXPECT_EQ(testing::brute_dcj(g, inv), 1);

  // 1 2 / 3 4 against 1 4 / 3 2: a single double cut-and-join swaps the tails.
  const auto u4 = make_universe_range(4);
  auto two = [&](std::vector<int> x, std::vector<int> y) {
    auto adj = chromosome_adjacencies(x, CarKind::kLinear);
    const auto more = chromosome_adjacencies(y, CarKind::kLinear);
    adj.insert(adj.end(), more.begin(), more.end());
    return AdjacencySet(adj, u4);
  };
  const auto a = two({1, 2}, {3, 4});
  const auto b = two({1, 4}, {3, 2});
  EXPECT_EQ(testing::brute_dcj(a, b), 1);
  EXPECT_EQ(dcj_distance(a, b), 1);
}

TEST(DcjDistance, RejectsInconsistentInput) {
  const auto u = make_universe_range(3);
  const auto bad = set_of({A("1h", "2t"), A("1h", "3t")}, u);
  EXPECT_THROW(dcj_distance(bad, set_of({}, u)), InputError);
}

TEST(DcjDistance, MatchesBreadthFirstSearchOnRandomGenomes) {
  Rng rng(derive_seed(404, 0));
  for (int trial = 0; trial < 150; ++trial) {
    const auto u = make_universe_range(static_cast<int>(uniform_int(rng, 1, 4)));
    const auto a = testing::random_adjacency_set(rng, u, uniform_unit(rng));
    const auto b = testing::random_adjacency_set(rng, u, uniform_unit(rng));
    EXPECT_EQ(dcj_distance(a, b), testing::brute_dcj(a, b));
  }
}

TEST(Cars, Examples) {
  const auto u3 = make_universe_range(3);
  const auto path = extract_cars(set_of({A("1h", "2t"), A("2h", "3t")}, u3));
  ASSERT_EQ(path.size(), 1u);
  EXPECT_EQ(path[0], (Car{CarKind::kLinear, {1, 2, 3}}));

  const auto u2 = make_universe_range(2);
  const auto singles = extract_cars(set_of({}, u2));
  ASSERT_EQ(singles.size(), 2u);
  EXPECT_EQ(singles[0], (Car{CarKind::kLinear, {1}}));
  EXPECT_EQ(singles[1], (Car{CarKind::kLinear, {2}}));

  const auto circle = extract_cars(set_of({A("1h", "2t"), A("2h", "1t")}, u2));
  ASSERT_EQ(circle.size(), 1u);
  EXPECT_EQ(circle[0], (Car{CarKind::kCircular, {1, 2}}));
}

TEST(Cars, CanonicalOrientation) {
  EXPECT_EQ(canonical_car({CarKind::kLinear, {3, -2, -1}}).markers, (std::vector<int>{1, 2, -3}));
  EXPECT_EQ(canonical_car({CarKind::kCircular, {3, 1, 2}}).markers, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(canonical_car({CarKind::kCircular, {-2, -1, -3}}).markers, (std::vector<int>{1, 2, 3}));
}

TEST(Cars, RoundTripOnRandomSets) {
  Rng rng(derive_seed(405, 0));
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = make_universe_range(static_cast<int>(uniform_int(rng, 1, 9)));
    const auto s = testing::random_adjacency_set(rng, u, uniform_unit(rng));
    const auto cars = extract_cars(s);
    std::size_t markers = 0;
    for (const auto& c : cars) markers += c.markers.size();
    EXPECT_EQ(markers, u->size());
    EXPECT_EQ(adjacencies_from_cars(cars, u), s);
  }
}

TEST(Cars, RejectsInconsistentSets) {
  const auto u = make_universe_range(3);
  EXPECT_THROW(extract_cars(set_of({A("1h", "2t"), A("1h", "3t")}, u)), InputError);
}

TEST(ScjDistance, MetricAxiomsOnRandomTriples) {
  Rng rng(derive_seed(406, 0));
  for (int trial = 0; trial < 300; ++trial) {
    const auto u = make_universe_range(static_cast<int>(uniform_int(rng, 2, 6)));
    const auto a = testing::random_adjacency_set(rng, u, uniform_unit(rng));
    const auto b = testing::random_adjacency_set(rng, u, uniform_unit(rng));
    const auto c = testing::random_adjacency_set(rng, u, uniform_unit(rng));
    EXPECT_EQ(scj_distance(a, a), 0);
    EXPECT_EQ(scj_distance(a, b), scj_distance(b, a));
    EXPECT_EQ(scj_distance(a, b) == 0, a == b);
    EXPECT_LE(scj_distance(a, c), scj_distance(a, b) + scj_distance(b, c));
    EXPECT_LE(dcj_distance(a, b), scj_distance(a, b));
  }
}

TEST(Alpha, ParsesAndScales) {
  EXPECT_EQ(Alpha::parse("0.25"), Alpha(1, 4));
  EXPECT_EQ(Alpha::parse("1/3"), Alpha(1, 3));
  EXPECT_EQ(Alpha::parse("1"), Alpha(1, 1));
  EXPECT_EQ(Alpha::parse("0"), Alpha(0, 1));
  EXPECT_THROW(Alpha::parse("1.5"), InputError);
  EXPECT_THROW(Alpha::parse("0.12345"), InputError);
  EXPECT_THROW(Alpha(1, 10'001), InputError);
  const Alpha half(1, 2);
  // One change plus 0.8 discarded at alpha 1/2 is 0.9 in units of 1/(2*10^6).
  EXPECT_EQ(half.cost(1, quantize_weight(0.8)), 1'800'000);
  EXPECT_DOUBLE_EQ(half.to_real(half.cost(1, quantize_weight(0.8))), 0.9);
}

TEST(Weights, QuantizeAndDefaults) {
  EXPECT_EQ(quantize_weight(0.73), 730'000);
  EXPECT_EQ(quantize_weight(1.0), 1'000'000);
  EXPECT_THROW(quantize_weight(1.2), InputError);
  EXPECT_THROW(quantize_weight(-0.1), InputError);
  WeightTable t;
  EXPECT_EQ(t.get(0, A("1h", "2t")), 0);
  t.set_real(0, A("1h", "2t"), 0.5);
  EXPECT_EQ(t.get(0, A("1h", "2t")), 500'000);
  EXPECT_FALSE(t.insert(0, A("1h", "2t"), 1));
}

TEST(Tree, ValidatesStructure) {
  std::vector<TreeNode> two_roots{{"a", kNoNode, {}, 0}, {"b", kNoNode, {}, 0}};
  EXPECT_THROW(Tree(std::move(two_roots)), InputError);
  std::vector<TreeNode> dup{{"a", 2, {}, 1}, {"a", 2, {}, 1}, {"r", kNoNode, {0, 1}, 0}};
  EXPECT_THROW(Tree(std::move(dup)), InputError);
}

TEST(LabelingObjective, SingleNodeExampleMatchesEnumeration) {
  // Star of three leaves; 1h~2t only in A; w = 0.8 at the root; alpha 1/2.
  const auto phylo = testing::make_phylogeny(
      "(A,B,C)R;", testing::genome_text({{"A", "L", "1 2"}, {"B", "L", "2 1"}, {"C", "L", "-1 2"}}));
  const NodeId root = phylo.tree().root();
  WeightTable w;
  w.set_real(root, A("1h", "2t"), 0.8);
  const Alpha half(1, 2);
  Labeling keep(phylo.tree().size());
  Labeling drop(phylo.tree().size());
  for (NodeId leaf : phylo.tree().leaves()) {
    keep[static_cast<std::size_t>(leaf)] = phylo.leaf_genome(leaf);
    drop[static_cast<std::size_t>(leaf)] = phylo.leaf_genome(leaf);
  }
  keep[static_cast<std::size_t>(root)] = set_of({A("1h", "2t")}, phylo.universe());
  drop[static_cast<std::size_t>(root)] = set_of({}, phylo.universe());

  const testing::BruteLabeling brute(phylo, w, half);
  const auto k = labeling_objective(phylo, keep, w, half);
  const auto d = labeling_objective(phylo, drop, w, half);
  EXPECT_EQ(k.cost, brute.cost(brute.masks_of(keep)));
  EXPECT_EQ(d.cost, brute.cost(brute.masks_of(drop)));
  // B (2 1) and C (-1 2) hold other adjacencies, so both labelings pay for them.
  EXPECT_EQ(k.scj_changes, brute.changes(brute.masks_of(keep)));
  EXPECT_EQ(d.discarded, quantize_weight(0.8));
  EXPECT_LT(d.cost, k.cost);
  EXPECT_EQ(brute.tree_optimum().cost, d.cost);
}

TEST(LabelingObjective, AlphaZeroIsSumOfScjDistances) {
  Rng rng(derive_seed(407, 0));
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = testing::random_instance(rng);
    const auto& tree = inst.phylogeny.tree();
    Labeling lab(tree.size());
    for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
      lab[static_cast<std::size_t>(v)] = tree.is_leaf(v)
                                             ? inst.phylogeny.leaf_genome(v)
                                             : testing::random_adjacency_set(rng, inst.phylogeny.universe(), 0.5);
    }
    std::int64_t total = 0;
    for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
      if (tree.parent(v) != kNoNode) {
        total += scj_distance(lab[static_cast<std::size_t>(v)], lab[static_cast<std::size_t>(tree.parent(v))]);
      }
    }
    const auto r = labeling_objective(inst.phylogeny, lab, inst.weights, Alpha(0, 1));
    EXPECT_EQ(r.scj_changes, total);
    EXPECT_EQ(r.cost, total * kWeightDenominator);
  }
}

TEST(LabelingObjective, AlphaOneKeepingEverythingPositiveIsZero) {
  const auto phylo = testing::make_phylogeny(
      "((A,B),C);", testing::genome_text({{"A", "L", "1 2 3"}, {"B", "L", "1 2 3"}, {"C", "L", "1 2 3"}}));
  WeightTable w;
  Labeling lab(phylo.tree().size());
  for (NodeId leaf : phylo.tree().leaves()) lab[static_cast<std::size_t>(leaf)] = phylo.leaf_genome(leaf);
  for (NodeId v : phylo.tree().internal_nodes()) {
    lab[static_cast<std::size_t>(v)] = phylo.leaf_genome(phylo.tree().leaves().front());
    w.set_real(v, A("1h", "2t"), 0.4);
  }
  EXPECT_EQ(labeling_objective(phylo, lab, w, Alpha(1, 1)).cost, 0);
}

TEST(LabelingObjective, RejectsInconsistentLabels) {
  const auto phylo = testing::make_phylogeny("(A,B);", testing::genome_text({{"A", "L", "1 2 3"}, {"B", "L", "1 3 2"}}));
  Labeling lab(phylo.tree().size());
  for (NodeId leaf : phylo.tree().leaves()) lab[static_cast<std::size_t>(leaf)] = phylo.leaf_genome(leaf);
  lab[static_cast<std::size_t>(phylo.tree().root())] = set_of({A("1h", "2t"), A("1h", "3t")}, phylo.universe());
  EXPECT_THROW(labeling_objective(phylo, lab, WeightTable{}, Alpha(0, 1)), InputError);
}

TEST(Random, DerivedStreamsAreStable) {
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto x = uniform_below(rng, 7);
    EXPECT_LT(x, 7u);
    const double u = uniform_unit(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  const BigCount big = BigCount(1) << 100;
  for (int i = 0; i < 100; ++i) EXPECT_LT(uniform_below(rng, big), big);
}

}  // namespace
}  // namespace wscj
