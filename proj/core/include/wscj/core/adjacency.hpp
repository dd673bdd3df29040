#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wscj {

enum class End : std::uint8_t { kTail = 0, kHead = 1 };

// One oriented end of a marker. Ordered by (marker, end) with tail < head.
class Extremity {
 public:
  constexpr Extremity() = default;
  Extremity(int marker, End end);

  constexpr int marker() const { return marker_; }
  constexpr End end() const { return end_; }
  constexpr bool is_head() const { return end_ == End::kHead; }

  // Dense index 2*marker + end, useful for flat arrays keyed by extremity.
  constexpr std::uint32_t code() const {
    return 2u * static_cast<std::uint32_t>(marker_) + static_cast<std::uint32_t>(end_);
  }
  static Extremity from_code(std::uint32_t code);

  constexpr Extremity other_end() const {
    Extremity e;
    e.marker_ = marker_;
    e.end_ = is_head() ? End::kTail : End::kHead;
    return e;
  }

  // "12h" / "5t".
  std::string to_string() const;
  static Extremity parse(std::string_view text);

  friend constexpr auto operator<=>(const Extremity&, const Extremity&) = default;

 private:
  int marker_ = 1;
  End end_ = End::kTail;
};

// Unordered pair of extremities of distinct markers, stored with first() < second().
class Adjacency {
 public:
  Adjacency() = default;
  // Throws InputError for identical extremities or two ends of one marker.
  Adjacency(Extremity x, Extremity y);

  const Extremity& first() const { return a_; }
  const Extremity& second() const { return b_; }
  bool touches(const Extremity& x) const { return a_ == x || b_ == x; }
  // The partner of `x`; `x` must be one of the two extremities.
  Extremity partner(const Extremity& x) const { return a_ == x ? b_ : a_; }

  std::string to_string() const;  // "1h~2t"

  friend auto operator<=>(const Adjacency&, const Adjacency&) = default;

 private:
  Extremity a_;
  Extremity b_;
};

using MarkerUniverse = std::shared_ptr<const std::vector<int>>;

// Builds a sorted, duplicate-free universe. Throws InputError on ids < 1.
MarkerUniverse make_universe(std::vector<int> markers);
MarkerUniverse make_universe_range(int n_markers);  // {1..n}
bool same_universe(const MarkerUniverse& a, const MarkerUniverse& b);

// A set of adjacencies over a marker universe. Consistency is not enforced
// here; a genome or an ancestral label is an AdjacencySet that passes
// check_consistency().
class AdjacencySet {
 public:
  AdjacencySet() = default;
  // Sorts and deduplicates; throws InputError if any extremity lies outside
  // the universe.
  AdjacencySet(std::vector<Adjacency> adjacencies, MarkerUniverse universe);

  std::span<const Adjacency> adjacencies() const { return adjacencies_; }
  const MarkerUniverse& universe() const { return universe_; }
  std::size_t size() const { return adjacencies_.size(); }
  bool empty() const { return adjacencies_.empty(); }
  bool contains(const Adjacency& a) const;
  bool is_consistent() const;

  auto begin() const { return adjacencies_.begin(); }
  auto end() const { return adjacencies_.end(); }

  friend bool operator==(const AdjacencySet& x, const AdjacencySet& y) {
    return x.adjacencies_ == y.adjacencies_ && same_universe(x.universe_, y.universe_);
  }

 private:
  std::vector<Adjacency> adjacencies_;
  MarkerUniverse universe_;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<Extremity> conflicts;  // every extremity of degree >= 2, sorted
};

ConsistencyReport check_consistency(std::span<const Adjacency> adjacencies);

}  // namespace wscj

template <>
struct std::hash<wscj::Extremity> {
  std::size_t operator()(const wscj::Extremity& x) const noexcept { return x.code(); }
};

template <>
struct std::hash<wscj::Adjacency> {
  std::size_t operator()(const wscj::Adjacency& a) const noexcept {
    return (static_cast<std::size_t>(a.first().code()) << 32) ^ a.second().code();
  }
};
