#pragma once

#include <cstdint>
#include <vector>

#include "wscj/core/adjacency.hpp"
#include "wscj/core/phylogeny.hpp"

namespace wscj::sim {

struct SimConfig {
  int n_markers = 100;
  int n_leaves = 6;
  double birth_rate = 0.001;
  double death_rate = 0.0;
  double diameter_factor = 2.0;  // diameter = factor * n_markers
  double p_inversion = 0.9;      // translocation otherwise
  std::uint64_t seed = 1;

  double p_translocation() const { return 1.0 - p_inversion; }
  // Throws InputError on out-of-range parameters.
  void validate() const;
};

// Binary birth-death tree with exactly n_leaves leaves, grown forward from a
// single lineage (restarted on extinction), extinct lineages pruned. Branch
// lengths are scaled so the longest leaf-to-leaf path equals
// diameter_factor * n_markers. Leaves are L1..Ln and internal nodes anc1..
// in post-order; the root has length 0.
Tree simulate_tree(const SimConfig& config);

// Longest leaf-to-leaf path by branch length.
double tree_diameter(const Tree& tree);

// Linear chromosomes of signed markers.
using LinearGenome = std::vector<std::vector<int>>;

// Reverses positions i..j (0-based, inclusive) of one chromosome and flips
// their signs. Throws InputError on bad indices.
LinearGenome apply_inversion(LinearGenome genome, std::size_t chromosome, std::size_t i, std::size_t j);

// Reciprocal translocation: chromosome a keeps its first i markers, b its
// first j, and the suffixes are exchanged. Requires a != b, i <= |a|,
// j <= |b| and two non-empty results; otherwise InputError.
LinearGenome apply_translocation(LinearGenome genome, std::size_t a, std::size_t i, std::size_t b, std::size_t j);

AdjacencySet genome_adjacencies(const LinearGenome& genome, const MarkerUniverse& universe);

struct SimResult {
  Phylogeny phylogeny;                       // leaves carry their genomes
  std::vector<LinearGenome> genomes;         // true genome of every node id
  Labeling truth;                            // adjacencies of every node id
  std::vector<std::int64_t> branch_events;   // events on the branch above each node
  std::vector<std::int64_t> inversions;      // per branch
  std::vector<std::int64_t> translocations;  // per branch
  std::int64_t total_events = 0;
};

// Root genome 1..n as one linear chromosome evolved down simulate_tree(config).
// Each branch carries round-half-up(length) events; an event is an inversion
// with probability p_inversion and a translocation otherwise. A
// translocation drawn while the genome has a single chromosome is applied as
// an inversion.
SimResult evolve(const SimConfig& config);

}  // namespace wscj::sim
