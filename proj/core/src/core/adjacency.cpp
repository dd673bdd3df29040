#include "wscj/core/adjacency.hpp"

#include <algorithm>
#include <charconv>

#include "wscj/core/errors.hpp"

namespace wscj {

Extremity::Extremity(int marker, End end) : marker_(marker), end_(end) {
  if (marker < 1) {
    throw InputError("marker id must be >= 1, got " + std::to_string(marker));
  }
}

Extremity Extremity::from_code(std::uint32_t code) {
  return Extremity(static_cast<int>(code / 2), (code & 1u) ? End::kHead : End::kTail);
}

std::string Extremity::to_string() const {
  return std::to_string(marker_) + (is_head() ? 'h' : 't');
}

Extremity Extremity::parse(std::string_view text) {
  if (text.size() < 2) {
    throw InputError("malformed extremity '" + std::string(text) + "'");
  }
  const char suffix = text.back();
  End end;
  if (suffix == 'h') {
    end = End::kHead;
  } else if (suffix == 't') {
    end = End::kTail;
  } else {
    throw InputError("extremity '" + std::string(text) + "' must end in 'h' or 't'");
  }
  int marker = 0;
  const auto digits = text.substr(0, text.size() - 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), marker);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw InputError("malformed extremity '" + std::string(text) + "'");
  }
  return Extremity(marker, end);
}

Adjacency::Adjacency(Extremity x, Extremity y) {
  if (x.marker() == y.marker()) {
    throw InputError("adjacency " + x.to_string() + "~" + y.to_string() +
                     " joins two ends of the same marker");
  }
  a_ = std::min(x, y);
  b_ = std::max(x, y);
}

std::string Adjacency::to_string() const { return a_.to_string() + "~" + b_.to_string(); }

MarkerUniverse make_universe(std::vector<int> markers) {
  std::sort(markers.begin(), markers.end());
  markers.erase(std::unique(markers.begin(), markers.end()), markers.end());
  if (!markers.empty() && markers.front() < 1) {
    throw InputError("marker ids must be >= 1");
  }
  return std::make_shared<const std::vector<int>>(std::move(markers));
}

MarkerUniverse make_universe_range(int n_markers) {
  std::vector<int> markers(static_cast<std::size_t>(std::max(n_markers, 0)));
  for (int i = 0; i < n_markers; ++i) markers[static_cast<std::size_t>(i)] = i + 1;
  return make_universe(std::move(markers));
}

bool same_universe(const MarkerUniverse& a, const MarkerUniverse& b) {
  if (a == b) return true;
  if (!a || !b) return (!a || a->empty()) && (!b || b->empty());
  return *a == *b;
}

AdjacencySet::AdjacencySet(std::vector<Adjacency> adjacencies, MarkerUniverse universe)
    : adjacencies_(std::move(adjacencies)), universe_(std::move(universe)) {
  std::sort(adjacencies_.begin(), adjacencies_.end());
  adjacencies_.erase(std::unique(adjacencies_.begin(), adjacencies_.end()), adjacencies_.end());
  if (!universe_) universe_ = make_universe({});
  for (const auto& adj : adjacencies_) {
    for (const auto& x : {adj.first(), adj.second()}) {
      if (!std::binary_search(universe_->begin(), universe_->end(), x.marker())) {
        throw InputError("extremity " + x.to_string() + " is outside the marker universe");
      }
    }
  }
}

bool AdjacencySet::contains(const Adjacency& a) const {
  return std::binary_search(adjacencies_.begin(), adjacencies_.end(), a);
}

bool AdjacencySet::is_consistent() const { return check_consistency(adjacencies_).consistent; }

ConsistencyReport check_consistency(std::span<const Adjacency> adjacencies) {
  std::vector<Extremity> ends;
  ends.reserve(2 * adjacencies.size());
  for (const auto& a : adjacencies) {
    ends.push_back(a.first());
    ends.push_back(a.second());
  }
  std::sort(ends.begin(), ends.end());
  ConsistencyReport report;
  for (std::size_t i = 1; i < ends.size(); ++i) {
    if (ends[i] == ends[i - 1] && (report.conflicts.empty() || report.conflicts.back() != ends[i])) {
      report.conflicts.push_back(ends[i]);
    }
  }
  report.consistent = report.conflicts.empty();
  return report;
}

}  // namespace wscj
