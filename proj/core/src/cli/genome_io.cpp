#include "wscj/cli/genome_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "wscj/core/errors.hpp"

namespace wscj::cli {

namespace {

std::string normalize_minus(std::string s) {
  const std::string unicode_minus = "\xE2\x88\x92";
  for (auto p = s.find(unicode_minus); p != std::string::npos; p = s.find(unicode_minus, p)) {
    s.replace(p, unicode_minus.size(), "-");
  }
  return s;
}

int parse_marker(const std::string& tok) {
  std::string_view t = tok;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InputError("malformed marker '" + tok + "'");
  }
  if (value == 0) throw InputError("marker id 0 is not allowed");
  return value;
}

}  // namespace

std::vector<int> genome_markers(const NamedGenome& genome) {
  std::vector<int> out;
  for (const auto& chr : genome.chromosomes) {
    for (int m : chr.markers) out.push_back(m < 0 ? -m : m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NamedGenome> parse_genomes(std::istream& in, const std::string& source) {
  std::vector<NamedGenome> genomes;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    try {
      std::vector<std::string> fields;
      std::stringstream ss(line);
      for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
      if (fields.size() != 3) throw InputError("expected 3 tab-separated fields");
      if (fields[0].empty()) throw InputError("empty genome name");
      Car car;
      if (fields[1] == "L" || fields[1] == "l") {
        car.kind = CarKind::kLinear;
      } else if (fields[1] == "C" || fields[1] == "c") {
        car.kind = CarKind::kCircular;
      } else {
        throw InputError("unknown chromosome kind '" + fields[1] + "' (expected L or C)");
      }
      std::stringstream markers(normalize_minus(fields[2]));
      for (std::string tok; markers >> tok;) car.markers.push_back(parse_marker(tok));
      if (car.markers.empty()) throw InputError("chromosome without markers");
      if (car.kind == CarKind::kCircular && car.markers.size() == 1) {
        throw InputError("circular chromosome with a single marker is not supported");
      }
      auto [it, fresh] = index.emplace(fields[0], genomes.size());
      if (fresh) {
        genomes.push_back(NamedGenome{fields[0], {}});
        first_line[fields[0]] = line_no;
      }
      genomes[it->second].chromosomes.push_back(std::move(car));
    } catch (const InputError& e) {
      throw InputError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<int> reference;
  for (const auto& g : genomes) {
    const auto where = source + ":" + std::to_string(first_line[g.name]) + ": genome '" + g.name + "' ";
    const auto markers = genome_markers(g);
    if (auto dup = std::adjacent_find(markers.begin(), markers.end()); dup != markers.end()) {
      throw InputError(where + "contains marker " + std::to_string(*dup) + " more than once");
    }
    if (&g == &genomes.front()) {
      reference = markers;
    } else if (markers != reference) {
      throw InputError(where + "has a different marker content than '" + genomes.front().name + "'");
    }
  }
  return genomes;
}

std::vector<NamedGenome> load_genomes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open genome file " + path.string());
  return parse_genomes(in, path.string());
}

AdjacencySet genome_adjacencies(const NamedGenome& genome, const MarkerUniverse& universe) {
  return adjacencies_from_cars(genome.chromosomes, universe);
}

Phylogeny build_phylogeny(Tree tree, const std::vector<NamedGenome>& genomes) {
  if (genomes.empty()) throw InputError("no genomes given");
  const auto universe = make_universe(genome_markers(genomes.front()));
  std::vector<AdjacencySet> sets(tree.size());
  std::vector<char> seen(tree.size(), 0);
  for (const auto& g : genomes) {
    const auto id = tree.find(g.name);
    if (!id) throw InputError("genome '" + g.name + "' does not name a node of the tree");
    if (!tree.is_leaf(*id)) continue;
    sets[static_cast<std::size_t>(*id)] = genome_adjacencies(g, universe);
    seen[static_cast<std::size_t>(*id)] = 1;
  }
  for (NodeId leaf : tree.leaves()) {
    if (!seen[static_cast<std::size_t>(leaf)]) throw InputError("leaf '" + tree.name(leaf) + "' has no genome");
  }
  return Phylogeny(std::move(tree), std::move(sets));
}

Labeling labeling_from_genomes(const Tree& tree, const std::vector<NamedGenome>& genomes,
                               const MarkerUniverse& universe) {
  Labeling out(tree.size());
  std::vector<char> seen(tree.size(), 0);
  for (const auto& g : genomes) {
    const auto id = tree.find(g.name);
    if (!id) throw InputError("genome '" + g.name + "' does not name a node of the tree");
    out[static_cast<std::size_t>(*id)] = genome_adjacencies(g, universe);
    seen[static_cast<std::size_t>(*id)] = 1;
  }
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (!seen[v] && !tree.is_leaf(static_cast<NodeId>(v))) {
      throw InputError("no genome for internal node '" + tree.name(static_cast<NodeId>(v)) + "'");
    }
    if (!seen[v]) out[v] = AdjacencySet({}, universe);
  }
  return out;
}

void write_genomes(std::ostream& out, const std::vector<NamedGenome>& genomes) {
  for (const auto& g : genomes) {
    for (const auto& chr : g.chromosomes) {
      out << g.name << '\t' << (chr.kind == CarKind::kLinear ? 'L' : 'C') << '\t';
      for (std::size_t i = 0; i < chr.markers.size(); ++i) {
        if (i) out << ' ';
        out << chr.markers[i];
      }
      out << '\n';
    }
  }
}

}  // namespace wscj::cli
