#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wscj/core/genome.hpp"
#include "wscj/core/phylogeny.hpp"

namespace wscj::cli {

struct NamedGenome {
  std::string name;
  std::vector<Car> chromosomes;
};

// Genome TSV: genome name, L or C, whitespace-separated signed marker ids
// (ASCII '-' or U+2212 as minus). One row per chromosome; genomes keep the
// order of their first row. Every genome must hold each marker once and all
// genomes must share one marker content.
std::vector<NamedGenome> parse_genomes(std::istream& in, const std::string& source = "<genomes>");
std::vector<NamedGenome> load_genomes(const std::filesystem::path& path);

std::vector<int> genome_markers(const NamedGenome& genome);
AdjacencySet genome_adjacencies(const NamedGenome& genome, const MarkerUniverse& universe);

// Leaf genomes by name. Every leaf needs a genome; rows for internal nodes
// are ignored; names absent from the tree are rejected.
Phylogeny build_phylogeny(Tree tree, const std::vector<NamedGenome>& genomes);

// Adjacency sets for every node of `tree` from a genome file that names all
// nodes (a truth file or a reconstruction).
Labeling labeling_from_genomes(const Tree& tree, const std::vector<NamedGenome>& genomes,
                               const MarkerUniverse& universe);

void write_genomes(std::ostream& out, const std::vector<NamedGenome>& genomes);

}  // namespace wscj::cli
