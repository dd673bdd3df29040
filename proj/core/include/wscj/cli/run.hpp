#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wscj/core/genome.hpp"
#include "wscj/core/phylogeny.hpp"
#include "wscj/core/random.hpp"
#include "wscj/core/scaled.hpp"
#include "wscj/core/weight_table.hpp"
#include "wscj/dp/sankoff.hpp"
#include "wscj/weights/boltzmann.hpp"

namespace wscj::cli {

enum class WeightSource { kNone, kFile, kBoltzmann };
enum class Route { kAuto, kForceDp, kForceIlp };
enum class Solver { kDp, kIlp };

std::string to_string(WeightSource s);
std::string to_string(Route r);
std::string to_string(Solver s);

struct RunConfig {
  Alpha alpha{0, 1};
  double threshold = 0.0;  // keep an adjacency at a node iff weight >= threshold
  double kt = weights::kDefaultKt;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 1;
  std::uint64_t explosion_cap = dp::kDefaultExplosionCap;
  unsigned threads = 1;
  bool ilp_enabled = true;
  Route route = Route::kAuto;
  WeightSource weight_source = WeightSource::kNone;
  std::filesystem::path tree_path;
  std::filesystem::path genomes_path;
  std::filesystem::path weights_path;
  std::filesystem::path out_dir;
  std::filesystem::path lp_dir;  // LP files of branch-and-bound components, if set

  // Throws InputError on out-of-range settings.
  void validate() const;
};

struct ComponentReport {
  std::size_t index = 0;
  int vertex_count = 0;
  std::size_t edge_count = 0;
  int max_degree = 0;
  std::uint64_t label_space_bound = 0;
  std::uint64_t work_estimate = 0;
  Solver solver = Solver::kDp;
  Cost objective = 0;
  std::optional<BigCount> cooptimal;  // unset for branch-and-bound components
  std::uint64_t bb_nodes = 0;
  std::chrono::nanoseconds elapsed{0};  // not written to output files
};

struct SolveReport {
  std::vector<ComponentReport> components;
  std::size_t n_markers = 0;   // N
  int max_component = 0;       // M, largest component by extremities
  int max_degree = 0;          // D
  Labeling labeling;           // one optimum, every node id
  ObjectiveBreakdown objective;
  std::optional<BigCount> cooptimal;  // product over components when all are counted
  std::vector<Labeling> samples;
  // Number of samples holding each (internal node, adjacency).
  std::map<std::pair<NodeId, Adjacency>, std::uint64_t> sample_counts;
};

// Decomposes, routes every component to the DP or branch-and-bound, samples,
// and verifies the assembled optimum against labeling_objective. Results do
// not depend on config.threads.
SolveReport solve_instance(const Phylogeny& phylogeny, const WeightTable& weights, const RunConfig& config);

// Weights from the configured source.
WeightTable load_weights(const Phylogeny& phylogeny, const RunConfig& config);

// Reads inputs, solves and writes all output files to config.out_dir.
SolveReport run_solve(const RunConfig& config);

// ancestors.tsv, stats.tsv, summary.tsv, components.tsv, manifest.json and,
// with samples, frequencies.tsv and samples.tsv.
void write_outputs(const SolveReport& report, const Phylogeny& phylogeny, const WeightTable& weights,
                   const RunConfig& config);

}  // namespace wscj::cli
