#pragma once

#include <cstdint>
#include <vector>

#include "wscj/core/phylogeny.hpp"

namespace wscj::sim {

struct Scores {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double sensitivity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double f05 = 0.0;
  // Set when the matching denominator was zero and the score was reported as 1.
  bool sensitivity_degenerate = false;
  bool precision_degenerate = false;
};

Scores make_scores(std::int64_t tp, std::int64_t fp, std::int64_t fn);

struct Evaluation {
  std::vector<NodeId> nodes;         // internal nodes, post-order
  std::vector<Scores> per_node;      // parallel to nodes
  Scores pooled;
};

// Compares predicted and true adjacencies at every internal node. Both
// labelings are indexed by node id of `tree`; a size mismatch is an
// InputError.
Evaluation score_reconstruction(const Tree& tree, const Labeling& truth, const Labeling& predicted);

}  // namespace wscj::sim
