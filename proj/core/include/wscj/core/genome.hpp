#pragma once

#include <cstdint>
#include <vector>

#include "wscj/core/adjacency.hpp"
#include "wscj/core/phylogeny.hpp"
#include "wscj/core/scaled.hpp"
#include "wscj/core/weight_table.hpp"

namespace wscj {

// |A - B| + |B - A|. Throws InputError if the universes differ.
std::int64_t scj_distance(const AdjacencySet& a, const AdjacencySet& b);

// DCJ distance N - (C + I/2) over the adjacency graph of two consistent
// genomes; telomeres are extremities without an adjacency.
std::int64_t dcj_distance(const AdjacencySet& a, const AdjacencySet& b);

enum class CarKind { kLinear, kCircular };

// Contiguous ancestral region: a maximal path or cycle of signed markers.
struct Car {
  CarKind kind = CarKind::kLinear;
  std::vector<int> markers;

  friend bool operator==(const Car&, const Car&) = default;
};

// Puts a CAR in canonical orientation. Linear: of the two readings, the one
// smaller when markers compare by id and then + before -. Circular: rotated
// to start at the smallest id, read so that it is positive.
Car canonical_car(Car car);

// Partitions the universe into CARs, canonical and sorted by smallest marker
// id. Unadjacent markers become singleton linear CARs. Throws InputError on
// an inconsistent set.
std::vector<Car> extract_cars(const AdjacencySet& adjacencies);

// Adjacencies realised by an ordered chromosome of signed markers. Throws
// InputError for a single-marker circular chromosome or a zero marker.
std::vector<Adjacency> chromosome_adjacencies(const std::vector<int>& markers, CarKind kind);

AdjacencySet adjacencies_from_cars(const std::vector<Car>& cars, MarkerUniverse universe);

struct ObjectiveBreakdown {
  Cost cost = 0;                  // exact, in Alpha units
  std::int64_t scj_changes = 0;   // sum of SCJ distances over tree edges
  MicroWeight discarded = 0;      // weight of absent (internal node, adjacency) pairs
  double value = 0.0;             // cost as a real number
};

// Evaluates alpha * sum (1 - p) w + (1 - alpha) * sum c over the whole tree.
// Leaf labels must equal the leaf genomes and every label must be consistent;
// otherwise InputError.
ObjectiveBreakdown labeling_objective(const Phylogeny& phylogeny, const Labeling& labeling,
                                      const WeightTable& weights, const Alpha& alpha);

}  // namespace wscj
