#pragma once

#include <vector>

#include "wscj/core/adjacency.hpp"
#include "wscj/core/phylogeny.hpp"
#include "wscj/core/weight_table.hpp"

namespace wscj::weights {

inline constexpr double kDefaultKt = 0.1;

// Posterior presence of one adjacency at every node under the Boltzmann
// distribution over presence histories, B = exp(-changes / kT), with leaf
// states fixed by the leaf genomes. Indexed by node id; leaves report 0 or 1.
// Throws InputError unless kT > 0.
std::vector<double> boltzmann_weights(const Phylogeny& phylogeny, const Adjacency& adjacency, double kt);

// Boltzmann weights of every leaf adjacency at every internal node, quantized.
// Adjacencies are independent and processed by up to `threads` workers; the
// result does not depend on the thread count.
WeightTable boltzmann_weight_table(const Phylogeny& phylogeny, double kt, unsigned threads = 1);

}  // namespace wscj::weights
