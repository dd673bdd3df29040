#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "wscj/core/errors.hpp"
#include "wscj/core/random.hpp"
#include "wscj/dp/sankoff.hpp"
#include "wscj/graph/adjacency_graph.hpp"
#include "wscj/ilp/model.hpp"
#include "wscj/sim/simulate.hpp"
#include "wscj/weights/boltzmann.hpp"
#include "wscj/weights/matching.hpp"

namespace {

using namespace wscj;

struct Instance {
  sim::SimResult sim;
  WeightTable weights;
  std::vector<graph::Component> components;
};

// Threshold in micro-units; a higher one splits the graph into small components.
Instance make_instance(int n_markers, MicroWeight threshold) {
  sim::SimConfig c;
  c.n_markers = n_markers;
  c.seed = 2016;
  Instance inst{sim::evolve(c), {}, {}};
  const auto& phylo = inst.sim.phylogeny;
  inst.weights = weights::boltzmann_weight_table(phylo, 0.1);
  inst.components = graph::connected_components(
      graph::build_global_graph(phylo, graph::candidate_adjacencies(phylo), inst.weights, threshold));
  return inst;
}

// Components within the default DP capacity.
std::vector<graph::Component> dp_sized(const Instance& inst) {
  std::vector<graph::Component> out;
  for (const auto& comp : inst.components) {
    try {
      dp::build_table(comp, inst.sim.phylogeny, inst.weights, Alpha(1, 2));
      out.push_back(comp);
    } catch (const CapacityExceeded&) {
    }
  }
  return out;
}

void BM_DpComponents(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)), 500'000);
  const auto comps = dp_sized(inst);
  state.counters["components"] = static_cast<double>(comps.size());
  for (auto _ : state) {
    Cost total = 0;
    for (const auto& comp : comps) {
      total += dp::solve_component(comp, inst.sim.phylogeny, inst.weights, Alpha(1, 2)).solution.objective;
    }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_DpComponents)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_BranchAndBoundLargestComponent(benchmark::State& state) {
  const auto inst = make_instance(static_cast<int>(state.range(0)), 0);
  const auto largest = std::max_element(inst.components.begin(), inst.components.end(), [](const auto& a, const auto& b) {
    return a.stats().vertex_count < b.stats().vertex_count;
  });
  const auto model = ilp::build_model(*largest, inst.sim.phylogeny, inst.weights, Alpha(1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(ilp::solve_bb(model).objective);
  state.counters["extremities"] = largest->stats().vertex_count;
}
BENCHMARK(BM_BranchAndBoundLargestComponent)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_BoltzmannTable(benchmark::State& state) {
  sim::SimConfig c;
  c.n_markers = static_cast<int>(state.range(0));
  c.seed = 2016;
  const auto r = sim::evolve(c);
  for (auto _ : state) benchmark::DoNotOptimize(weights::boltzmann_weight_table(r.phylogeny, 0.1).size());
}
BENCHMARK(BM_BoltzmannTable)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_MaxWeightMatching(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2016);
  std::vector<weights::WeightedEdge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (uniform_unit(rng) < 0.3) edges.push_back({u, v, static_cast<std::int64_t>(uniform_int(rng, 1, 1'000'000))});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(weights::max_weight_matching(n, edges).size());
}
BENCHMARK(BM_MaxWeightMatching)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
