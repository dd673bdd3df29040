#include "wscj/weights/weight_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "wscj/core/errors.hpp"

namespace wscj::weights {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

WeightTable parse_weight_table(std::istream& in, const Phylogeny& phylogeny, const std::string& source) {
  const auto& tree = phylogeny.tree();
  const auto& universe = *phylogeny.universe();
  WeightTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    try {
      const auto fields = split_tabs(line);
      if (fields.size() != 4) throw InputError("expected 4 tab-separated fields");
      const auto node = tree.find(fields[0]);
      if (!node) throw InputError("unknown node '" + fields[0] + "'");
      if (tree.is_leaf(*node)) throw InputError("weights are only accepted at internal nodes, '" + fields[0] + "' is a leaf");
      const auto x = Extremity::parse(fields[1]);
      const auto y = Extremity::parse(fields[2]);
      for (const auto& e : {x, y}) {
        if (!std::binary_search(universe.begin(), universe.end(), e.marker())) {
          throw InputError("unknown marker " + std::to_string(e.marker()));
        }
      }
      const Adjacency adj(x, y);
      double w = 0.0;
      const auto& text = fields[3];
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), w);
      if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(w)) {
        throw InputError("malformed weight '" + text + "'");
      }
      if (w < 0.0 || w > 1.0) throw InputError("weight " + text + " outside [0,1]");
      if (!table.insert(*node, adj, quantize_weight(w))) {
        throw InputError("duplicate weight for " + adj.to_string() + " at '" + fields[0] + "'");
      }
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  return table;
}

WeightTable load_weight_table(const std::filesystem::path& path, const Phylogeny& phylogeny) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open weight file " + path.string());
  return parse_weight_table(in, phylogeny, path.string());
}

std::string format_weight(MicroWeight w) {
  std::string frac = std::to_string(w % kWeightDenominator);
  frac.insert(0, 6 - frac.size(), '0');
  return std::to_string(w / kWeightDenominator) + "." + frac;
}

void write_weight_table(std::ostream& out, const WeightTable& table, const Phylogeny& phylogeny) {
  for (const auto& [key, w] : table.entries()) {
    out << phylogeny.tree().name(key.first) << '\t' << key.second.first().to_string() << '\t'
        << key.second.second().to_string() << '\t' << format_weight(w) << '\n';
  }
}

void write_weight_table(const std::filesystem::path& path, const WeightTable& table, const Phylogeny& phylogeny) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write weight file " + path.string());
  write_weight_table(out, table, phylogeny);
}

}  // namespace wscj::weights
