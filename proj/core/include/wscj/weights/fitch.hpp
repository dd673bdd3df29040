#pragma once

#include <cstdint>
#include <vector>

#include "wscj/core/adjacency.hpp"
#include "wscj/core/phylogeny.hpp"

namespace wscj::weights {

// Presence bit per node id for one adjacency.
struct PresenceHistory {
  std::vector<std::uint8_t> present;
  std::int64_t changes = 0;
};

// Two-state small parsimony for one adjacency with leaf states clamped.
// Ambiguity at the root resolves to absence; below the root a node keeps its
// parent's state whenever that state is optimal for its subtree.
PresenceHistory fitch_scj(const Phylogeny& phylogeny, const Adjacency& adjacency);

struct FitchLabeling {
  Labeling labeling;  // indexed by node id, leaves carry their genomes
  std::int64_t total_changes = 0;
};

// fitch_scj over every leaf adjacency, unioned per node. Throws InternalError
// if a node ends up inconsistent.
FitchLabeling fitch_scj_labeling(const Phylogeny& phylogeny);

}  // namespace wscj::weights
