#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wscj/core/phylogeny.hpp"

namespace wscj::cli {

// Newick with named leaves, optional internal names, branch lengths and
// multifurcations. Node ids follow post-order. Unnamed internal nodes become
// anc1, anc2, ... in post-order, skipping names already taken. Syntax errors
// report the byte offset.
Tree parse_newick(std::string_view text);
Tree load_tree(const std::filesystem::path& path);

// Newick text with names and branch lengths (omitted at the root).
std::string write_newick(const Tree& tree);

}  // namespace wscj::cli
