#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wscj/core/phylogeny.hpp"
#include "wscj/core/scaled.hpp"
#include "wscj/core/weight_table.hpp"
#include "wscj/dp/sankoff.hpp"
#include "wscj/graph/adjacency_graph.hpp"

namespace wscj::ilp {

enum class VarKind { kPresence, kChange };

// p_{v,a}: adjacency a present at internal node v.
// c_{v,a}: presence of a differs between v and its parent.
struct Variable {
  VarKind kind = VarKind::kPresence;
  NodeId node = kNoNode;
  int edge = -1;  // component edge index
  std::string name;
  Cost objective = 0;  // coefficient in Alpha units
};

enum class Sense { kLessEqual, kGreaterEqual };

struct Term {
  int var = 0;
  int coefficient = 0;
};

struct Row {
  std::string family;  // "c1" ... "c7"
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  int rhs = 0;
};

struct BuildOptions {
  // Emit the pairwise sibling rows c1/c2. They are not implied by the
  // objective and can cut off optima (see README), so they are opt-in.
  bool parsimony_rows = false;
};

// 0/1 model of one component. Leaf presences and presences at nodes where an
// adjacency is not annotated are constants folded into rows and the objective
// constant.
class IlpModel {
 public:
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  Cost objective_constant() const { return constant_; }
  const Alpha& alpha() const { return alpha_; }
  const graph::Component& component() const { return *component_; }
  const Tree& tree() const { return *tree_; }

  // Variable index or -1 if the presence is a constant.
  int presence_var(NodeId node, int edge) const;
  // Constant presence for nodes without a variable (leaves and unannotated
  // internal nodes).
  int fixed_presence(NodeId node, int edge) const;
  // Change variable on the edge above `child`, or -1.
  int change_var(NodeId child, int edge) const;

  std::size_t presence_count() const { return n_presence_; }

  // Objective of a full assignment (constant included).
  Cost evaluate(const std::vector<std::uint8_t>& values) const;
  // Names of violated rows (empty if feasible).
  std::vector<std::string> violated_rows(const std::vector<std::uint8_t>& values) const;

 private:
  friend IlpModel build_model(const graph::Component&, const Phylogeny&, const WeightTable&,
                              const Alpha&, const BuildOptions&);
  const graph::Component* component_ = nullptr;
  const Tree* tree_ = nullptr;
  Alpha alpha_;
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  Cost constant_ = 0;
  std::size_t n_presence_ = 0;
  std::size_t n_edges_ = 0;
  std::vector<int> presence_index_;  // node * edges + edge
  std::vector<int> change_index_;    // node * edges + edge
  std::vector<std::uint8_t> fixed_;  // node * edges + edge
};

// The model references `component` and the phylogeny's tree.
IlpModel build_model(const graph::Component& component, const Phylogeny& phylogeny,
                     const WeightTable& weights, const Alpha& alpha, const BuildOptions& options = {});

struct BbResult {
  std::vector<std::uint8_t> values;  // one entry per model variable
  Cost objective = 0;                // constant included
  std::uint64_t nodes_explored = 0;
};

// Depth-first 0/1 branch-and-bound. Consistency rows (and parsimony rows,
// if present) are dualized with integer multipliers, leaving one tree problem
// per adjacency that is solved exactly; multipliers follow subgradient steps
// at every search node. Relaxed solutions are repaired into incumbents.
// Branches on the first free variable of a violated row, 0-branch first.
// With alpha = 1 nothing couples the nodes and each node is solved as a
// maximum-weight matching instead.
BbResult solve_bb(const IlpModel& model);

// Converts a solved assignment to per-node adjacency lists.
dp::ComponentSolution to_solution(const IlpModel& model, const BbResult& result);

// build_model + solve_bb + to_solution.
dp::ComponentSolution solve_component_bb(const graph::Component& component, const Phylogeny& phylogeny,
                                         const WeightTable& weights, const Alpha& alpha);

// CPLEX-style LP text: Minimize / Subject To / Binaries / End. Coefficients
// are the exact scaled integers; the constant is recorded in a comment.
void export_lp(const IlpModel& model, std::ostream& out);
void export_lp(const IlpModel& model, const std::filesystem::path& path);

// Minimal reader for the subset written by export_lp.
struct LpFile {
  struct LpRow {
    std::string name;
    std::vector<std::pair<std::string, long long>> terms;
    Sense sense = Sense::kLessEqual;
    long long rhs = 0;
  };
  std::vector<std::pair<std::string, long long>> objective;
  long long objective_constant = 0;
  std::vector<LpRow> rows;
  std::vector<std::string> binaries;
};

LpFile parse_lp(std::istream& in);

// Rows of `lp` violated by a named assignment (missing names read as 0).
std::vector<std::string> violated_rows(const LpFile& lp, const std::map<std::string, int>& values);

}  // namespace wscj::ilp
