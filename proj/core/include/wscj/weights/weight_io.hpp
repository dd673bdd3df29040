#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "wscj/core/phylogeny.hpp"
#include "wscj/core/weight_table.hpp"

namespace wscj::weights {

// Weight TSV: node name, extremity, extremity, weight in [0,1]. Blank lines
// and lines starting with '#' are skipped. Weights may only be given at
// internal nodes. Errors carry `source` and the line number.
WeightTable parse_weight_table(std::istream& in, const Phylogeny& phylogeny,
                               const std::string& source = "<weights>");
WeightTable load_weight_table(const std::filesystem::path& path, const Phylogeny& phylogeny);

// Rows in (node id, adjacency) order, weights with six decimals.
void write_weight_table(std::ostream& out, const WeightTable& table, const Phylogeny& phylogeny);
void write_weight_table(const std::filesystem::path& path, const WeightTable& table, const Phylogeny& phylogeny);

// Exact decimal text of a quantized weight, e.g. 730000 -> "0.730000".
std::string format_weight(MicroWeight w);

}  // namespace wscj::weights
