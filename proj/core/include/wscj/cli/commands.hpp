#pragma once

#include <cstdint>
#include <filesystem>

#include "wscj/sim/metrics.hpp"
#include "wscj/sim/simulate.hpp"

namespace wscj::cli {

struct WeighConfig {
  std::filesystem::path tree_path;
  std::filesystem::path genomes_path;
  std::filesystem::path out_path;  // weight TSV
  double kt = 0.1;
  unsigned threads = 1;
};

// Boltzmann weights of every leaf adjacency at every internal node, written
// as a weight TSV.
void run_weigh(const WeighConfig& config);

struct SimulateConfig {
  sim::SimConfig sim;
  std::uint64_t replicates = 1;
  unsigned threads = 1;
  std::filesystem::path out_dir;
};

// Seed of replicate r (0-based).
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t r);

// One directory per replicate (rep_001, ...) with tree.nwk, genomes.tsv
// (leaves), truth.tsv (every node) and events.tsv, plus simulations.tsv.
void run_simulate(const SimulateConfig& config);

struct EvaluateConfig {
  std::filesystem::path tree_path;
  std::filesystem::path truth_path;      // genome TSV naming every node
  std::filesystem::path predicted_path;  // ancestors.tsv of a solve run
  std::filesystem::path out_path;        // metrics TSV
};

// Scores predicted ancestors against the true ones and writes per-node and
// pooled metrics.
sim::Evaluation run_evaluate(const EvaluateConfig& config);

}  // namespace wscj::cli
