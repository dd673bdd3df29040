#include "wscj/core/genome.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

#include "wscj/core/errors.hpp"

namespace wscj {

namespace {

void require_same_universe(const AdjacencySet& a, const AdjacencySet& b) {
  if (!same_universe(a.universe(), b.universe())) {
    throw InputError("genomes are defined over different marker sets");
  }
}

void require_consistent(const AdjacencySet& a, const char* what) {
  const auto report = check_consistency(a.adjacencies());
  if (!report.consistent) {
    throw InputError(std::string(what) + " is inconsistent at extremity " +
                     report.conflicts.front().to_string());
  }
}

// partner[code] = code of the adjacent extremity, or kNone for telomeres.
constexpr std::uint32_t kNone = 0xffffffffu;

std::vector<std::uint32_t> partner_table(const AdjacencySet& a, std::uint32_t size) {
  std::vector<std::uint32_t> partner(size, kNone);
  for (const auto& adj : a) {
    partner[adj.first().code()] = adj.second().code();
    partner[adj.second().code()] = adj.first().code();
  }
  return partner;
}

std::uint32_t code_space(const MarkerUniverse& u) {
  return u && !u->empty() ? 2u * static_cast<std::uint32_t>(u->back()) + 2u : 2u;
}

std::vector<int> flipped(const std::vector<int>& markers) {
  std::vector<int> out(markers.rbegin(), markers.rend());
  for (int& m : out) m = -m;
  return out;
}

Extremity entry_of(int signed_marker) {
  return Extremity(std::abs(signed_marker), signed_marker > 0 ? End::kTail : End::kHead);
}

Extremity exit_of(int signed_marker) {
  return Extremity(std::abs(signed_marker), signed_marker > 0 ? End::kHead : End::kTail);
}

}  // namespace

std::int64_t scj_distance(const AdjacencySet& a, const AdjacencySet& b) {
  require_same_universe(a, b);
  std::vector<Adjacency> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  return static_cast<std::int64_t>(diff.size());
}

std::int64_t dcj_distance(const AdjacencySet& a, const AdjacencySet& b) {
  require_same_universe(a, b);
  require_consistent(a, "first genome");
  require_consistent(b, "second genome");
  const auto size = code_space(a.universe());
  const auto pa = partner_table(a, size);
  const auto pb = partner_table(b, size);

  std::int64_t cycles = 0;
  std::int64_t odd_paths = 0;
  std::vector<bool> seen(size, false);
  const auto& markers = *a.universe();

  // Paths first: start from every extremity that is a telomere in either genome.
  for (int m : markers) {
    for (End e : {End::kTail, End::kHead}) {
      const auto start = Extremity(m, e).code();
      if (seen[start]) continue;
      const bool tel_a = pa[start] == kNone;
      const bool tel_b = pb[start] == kNone;
      if (!tel_a && !tel_b) continue;
      // Walk away from the telomere side, alternating genomes.
      std::int64_t vertices = 0;
      std::uint32_t cur = start;
      bool use_a = tel_b;  // leave through the genome that has an adjacency here
      while (true) {
        seen[cur] = true;
        ++vertices;
        const auto next = use_a ? pa[cur] : pb[cur];
        if (next == kNone) break;
        cur = next;
        use_a = !use_a;
      }
      if (vertices % 2 == 1) ++odd_paths;
    }
  }
  for (int m : markers) {
    for (End e : {End::kTail, End::kHead}) {
      const auto start = Extremity(m, e).code();
      if (seen[start]) continue;
      std::uint32_t cur = start;
      bool use_a = true;
      do {
        seen[cur] = true;
        cur = use_a ? pa[cur] : pb[cur];
        use_a = !use_a;
      } while (cur != start);
      ++cycles;
    }
  }
  const auto n = static_cast<std::int64_t>(markers.size());
  return n - (cycles + odd_paths / 2);
}

Car canonical_car(Car car) {
  if (car.markers.empty()) return car;
  if (car.kind == CarKind::kLinear) {
    auto rev = flipped(car.markers);
    // Order by marker id, then + before -: 1 2 3 beats -3 -2 -1, 5 beats -5.
    const auto key_less = [](int x, int y) {
      return std::abs(x) != std::abs(y) ? std::abs(x) < std::abs(y) : x > y;
    };
    if (std::lexicographical_compare(rev.begin(), rev.end(), car.markers.begin(), car.markers.end(), key_less)) {
      car.markers = std::move(rev);
    }
    return car;
  }
  auto smallest = std::min_element(car.markers.begin(), car.markers.end(),
                                   [](int x, int y) { return std::abs(x) < std::abs(y); });
  if (*smallest < 0) {
    car.markers = flipped(car.markers);
    smallest = std::min_element(car.markers.begin(), car.markers.end(),
                                [](int x, int y) { return std::abs(x) < std::abs(y); });
  }
  std::rotate(car.markers.begin(), smallest, car.markers.end());
  return car;
}

std::vector<Car> extract_cars(const AdjacencySet& adjacencies) {
  require_consistent(adjacencies, "adjacency set");
  const auto& universe = adjacencies.universe();
  const auto size = code_space(universe);
  const auto partner = partner_table(adjacencies, size);
  std::vector<bool> placed(size / 2, false);
  std::vector<Car> cars;

  // Signed marker entering through `entry`.
  auto oriented = [](std::uint32_t entry) {
    const auto x = Extremity::from_code(entry);
    return x.is_head() ? -x.marker() : x.marker();
  };

  for (int m : *universe) {
    if (placed[static_cast<std::size_t>(m)]) continue;
    // Walk left from +m until a telomere, or back to m (cycle).
    int first = m;
    bool circular = false;
    while (true) {
      const auto left = partner[entry_of(first).code()];
      if (left == kNone) break;
      // The neighbour exits through `left`, so it enters through the other end.
      const int prev = -oriented(left);
      if (std::abs(prev) == m) {
        circular = true;
        first = m;
        break;
      }
      first = prev;
    }
    Car car;
    car.kind = circular ? CarKind::kCircular : CarKind::kLinear;
    int cur = first;
    while (true) {
      car.markers.push_back(cur);
      placed[static_cast<std::size_t>(std::abs(cur))] = true;
      const auto right = partner[exit_of(cur).code()];
      if (right == kNone) break;
      const int next = oriented(right);
      if (std::abs(next) == std::abs(first)) break;
      cur = next;
    }
    cars.push_back(canonical_car(std::move(car)));
  }
  auto smallest = [](const Car& c) {
    int m = std::abs(c.markers.front());
    for (int x : c.markers) m = std::min(m, std::abs(x));
    return m;
  };
  std::sort(cars.begin(), cars.end(), [&](const Car& x, const Car& y) { return smallest(x) < smallest(y); });
  return cars;
}

std::vector<Adjacency> chromosome_adjacencies(const std::vector<int>& markers, CarKind kind) {
  for (int m : markers) {
    if (m == 0) throw InputError("marker id 0 is not allowed");
  }
  std::vector<Adjacency> out;
  for (std::size_t i = 1; i < markers.size(); ++i) {
    out.emplace_back(exit_of(markers[i - 1]), entry_of(markers[i]));
  }
  if (kind == CarKind::kCircular && !markers.empty()) {
    if (markers.size() == 1) {
      throw InputError("circular chromosome with a single marker is not supported");
    }
    out.emplace_back(exit_of(markers.back()), entry_of(markers.front()));
  }
  return out;
}

AdjacencySet adjacencies_from_cars(const std::vector<Car>& cars, MarkerUniverse universe) {
  std::vector<Adjacency> all;
  for (const auto& car : cars) {
    auto part = chromosome_adjacencies(car.markers, car.kind);
    all.insert(all.end(), part.begin(), part.end());
  }
  return AdjacencySet(std::move(all), std::move(universe));
}

ObjectiveBreakdown labeling_objective(const Phylogeny& phylogeny, const Labeling& labeling,
                                      const WeightTable& weights, const Alpha& alpha) {
  const auto& tree = phylogeny.tree();
  if (labeling.size() != tree.size()) {
    throw InputError("labeling does not cover every node of the tree");
  }
  for (NodeId v : tree.leaves()) {
    if (!(labeling[static_cast<std::size_t>(v)] == phylogeny.leaf_genome(v))) {
      throw InputError("labeling changes the genome of leaf '" + tree.name(v) + "'");
    }
  }
  for (NodeId v : tree.internal_nodes()) {
    const auto report = check_consistency(labeling[static_cast<std::size_t>(v)].adjacencies());
    if (!report.consistent) {
      throw InputError("label of node '" + tree.name(v) + "' is inconsistent at " +
                       report.conflicts.front().to_string());
    }
  }
  ObjectiveBreakdown out;
  for (NodeId v : tree.post_order()) {
    const NodeId u = tree.parent(v);
    if (u == kNoNode) continue;
    out.scj_changes += scj_distance(labeling[static_cast<std::size_t>(u)],
                                    labeling[static_cast<std::size_t>(v)]);
  }
  for (const auto& [key, w] : weights.entries()) {
    const auto& [node, adj] = key;
    if (node < 0 || static_cast<std::size_t>(node) >= tree.size() || tree.is_leaf(node)) continue;
    if (!labeling[static_cast<std::size_t>(node)].contains(adj)) out.discarded += w;
  }
  out.cost = alpha.cost(out.scj_changes, out.discarded);
  out.value = alpha.to_real(out.cost);
  return out;
}

}  // namespace wscj
