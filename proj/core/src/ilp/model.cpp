#include "wscj/ilp/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "wscj/core/errors.hpp"
#include "wscj/weights/matching.hpp"

namespace wscj::ilp {

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char ch : name) {
    const auto u = static_cast<unsigned char>(ch);
    out.push_back(std::isalnum(u) || ch == '_' || ch == '.' ? ch : '_');
  }
  return out;
}

std::string adjacency_token(const Adjacency& a) {
  return a.first().to_string() + "_" + a.second().to_string();
}

// LP-safe node tokens; falls back to ids if sanitizing makes names collide.
std::vector<std::string> node_tokens(const Tree& tree) {
  std::vector<std::string> tokens(tree.size());
  std::set<std::string> seen;
  bool collision = false;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    tokens[i] = sanitize(tree.name(static_cast<NodeId>(i)));
    collision |= !seen.insert(tokens[i]).second;
  }
  if (collision) {
    for (std::size_t i = 0; i < tree.size(); ++i) tokens[i] = "n" + std::to_string(i);
  }
  return tokens;
}

bool row_holds(const Row& row, const std::vector<std::uint8_t>& values) {
  long long lhs = 0;
  for (const auto& t : row.terms) lhs += static_cast<long long>(t.coefficient) * values[static_cast<std::size_t>(t.var)];
  return row.sense == Sense::kLessEqual ? lhs <= row.rhs : lhs >= row.rhs;
}

}  // namespace

int IlpModel::presence_var(NodeId node, int edge) const {
  return presence_index_[static_cast<std::size_t>(node) * n_edges_ + static_cast<std::size_t>(edge)];
}

int IlpModel::fixed_presence(NodeId node, int edge) const {
  return fixed_[static_cast<std::size_t>(node) * n_edges_ + static_cast<std::size_t>(edge)];
}

int IlpModel::change_var(NodeId child, int edge) const {
  return change_index_[static_cast<std::size_t>(child) * n_edges_ + static_cast<std::size_t>(edge)];
}

Cost IlpModel::evaluate(const std::vector<std::uint8_t>& values) const {
  Cost total = constant_;
  for (std::size_t i = 0; i < vars_.size(); ++i) total += vars_[i].objective * values[i];
  return total;
}

std::vector<std::string> IlpModel::violated_rows(const std::vector<std::uint8_t>& values) const {
  std::vector<std::string> out;
  for (const auto& row : rows_) {
    if (!row_holds(row, values)) out.push_back(row.name);
  }
  return out;
}

IlpModel build_model(const graph::Component& component, const Phylogeny& phylogeny,
                     const WeightTable& weights, const Alpha& alpha, const BuildOptions& options) {
  const auto& tree = phylogeny.tree();
  IlpModel m;
  m.component_ = &component;
  m.tree_ = &tree;
  m.alpha_ = alpha;
  m.n_edges_ = component.edges().size();
  const auto n_edges = m.n_edges_;
  m.presence_index_.assign(tree.size() * n_edges, -1);
  m.change_index_.assign(tree.size() * n_edges, -1);
  m.fixed_.assign(tree.size() * n_edges, 0);
  const auto tokens = node_tokens(tree);
  const Cost chg = alpha.change_coefficient();
  const Cost wcoef = alpha.weight_coefficient();
  auto slot = [&](NodeId v, int e) { return static_cast<std::size_t>(v) * n_edges + static_cast<std::size_t>(e); };

  for (NodeId v : tree.leaves()) {
    for (const auto& adj : phylogeny.leaf_genome(v)) {
      if (const int e = component.edge_index(adj); e >= 0) m.fixed_[slot(v, e)] = 1;
    }
  }

  // Presence variables in (depth, node, edge) order.
  std::vector<NodeId> internal = tree.internal_nodes();
  std::stable_sort(internal.begin(), internal.end(), [&](NodeId a, NodeId b) {
    return std::make_pair(tree.depth(a), a) < std::make_pair(tree.depth(b), b);
  });
  for (NodeId v : internal) {
    for (std::size_t e = 0; e < n_edges; ++e) {
      if (!component.annotated(static_cast<int>(e), v)) continue;
      const auto& adj = component.edges()[e].adjacency;
      const MicroWeight w = weights.get(v, adj);
      m.constant_ += wcoef * w;
      m.presence_index_[slot(v, static_cast<int>(e))] = static_cast<int>(m.vars_.size());
      m.vars_.push_back(Variable{VarKind::kPresence, v, static_cast<int>(e),
                                 "p_" + tokens[static_cast<std::size_t>(v)] + "_" + adjacency_token(adj),
                                 -wcoef * w});
    }
  }
  m.n_presence_ = m.vars_.size();

  // Either side of a tree edge as a variable or a constant.
  struct Side {
    int var;
    int constant;
  };
  auto side = [&](NodeId v, int e) { return Side{m.presence_var(v, e), m.fixed_presence(v, e)}; };
  auto add_row = [&](std::string family, std::string name, std::vector<std::pair<Side, int>> parts,
                     std::vector<Term> extra, Sense sense, int rhs) {
    Row row{std::move(family), std::move(name), {}, sense, rhs};
    for (const auto& [s, coef] : parts) {
      if (s.var >= 0) {
        row.terms.push_back(Term{s.var, coef});
      } else {
        row.rhs -= coef * s.constant;
      }
    }
    row.terms.insert(row.terms.end(), extra.begin(), extra.end());
    m.rows_.push_back(std::move(row));
  };

  // Change variables and rows c3-c6 on every tree edge (u, v).
  for (NodeId v : tree.post_order()) {
    const NodeId u = tree.parent(v);
    if (u == kNoNode) continue;
    for (std::size_t e = 0; e < n_edges; ++e) {
      const int ei = static_cast<int>(e);
      const Side pv = side(v, ei);
      const Side pu = side(u, ei);
      const auto& adj = component.edges()[e].adjacency;
      if (pv.var < 0 && pu.var < 0) {
        if (pv.constant != pu.constant) m.constant_ += chg;
        continue;
      }
      const std::string key = tokens[static_cast<std::size_t>(v)] + "_" + adjacency_token(adj);
      const int c = static_cast<int>(m.vars_.size());
      m.change_index_[slot(v, ei)] = c;
      m.vars_.push_back(Variable{VarKind::kChange, v, ei, "c_" + key, chg});
      add_row("c3", "c3_" + key, {{pv, 1}, {pu, 1}}, {{c, 1}}, Sense::kLessEqual, 2);
      add_row("c4", "c4_" + key, {{pv, 1}, {pu, 1}}, {{c, -1}}, Sense::kGreaterEqual, 0);
      add_row("c5", "c5_" + key, {{pv, 1}, {pu, -1}}, {{c, 1}}, Sense::kGreaterEqual, 0);
      add_row("c6", "c6_" + key, {{pv, -1}, {pu, 1}}, {{c, 1}}, Sense::kGreaterEqual, 0);
    }
  }

  if (options.parsimony_rows) {
    for (NodeId p : tree.post_order()) {
      const auto& kids = tree.children(p);
      for (std::size_t i = 0; i < kids.size(); ++i) {
        for (std::size_t j = i + 1; j < kids.size(); ++j) {
          for (std::size_t e = 0; e < n_edges; ++e) {
            const int ei = static_cast<int>(e);
            const Side a = side(kids[i], ei);
            const Side b = side(kids[j], ei);
            const Side pp = side(p, ei);
            if (a.var < 0 && b.var < 0 && pp.var < 0) continue;
            const std::string key = tokens[static_cast<std::size_t>(p)] + "_" +
                                    tokens[static_cast<std::size_t>(kids[i])] + "_" +
                                    tokens[static_cast<std::size_t>(kids[j])] + "_" +
                                    adjacency_token(component.edges()[e].adjacency);
            add_row("c1", "c1_" + key, {{a, 1}, {b, 1}, {pp, -1}}, {}, Sense::kGreaterEqual, 0);
            add_row("c2", "c2_" + key, {{a, 1}, {b, 1}, {pp, -1}}, {}, Sense::kLessEqual, 1);
          }
        }
      }
    }
  }

  // c7: at most one chosen adjacency per extremity and node.
  for (NodeId v : internal) {
    for (std::size_t x = 0; x < component.vertices().size(); ++x) {
      std::vector<Term> terms;
      for (int e : component.incident(static_cast<int>(x))) {
        if (const int var = m.presence_var(v, e); var >= 0) terms.push_back(Term{var, 1});
      }
      if (terms.empty()) continue;
      m.rows_.push_back(Row{"c7",
                            "c7_" + tokens[static_cast<std::size_t>(v)] + "_" +
                                component.vertices()[x].to_string(),
                            std::move(terms), Sense::kLessEqual, 1});
    }
  }
  return m;
}

namespace {

// Structural row in the form sum coef * x <= rhs.
struct LeRow {
  std::vector<Term> terms;
  long long rhs = 0;
  bool consistency = false;  // c7
};

// Depth-first branch-and-bound with a Lagrangian bound: the structural rows
// (consistency and, if present, parsimony rows) are dualized with integer
// multipliers, which leaves one independent tree problem per adjacency.
// Multipliers are tuned by subgradient steps at every search node, starting
// from the parent's.
class BranchAndBound {
 public:
  explicit BranchAndBound(const IlpModel& m)
      : m_(m),
        tree_(m.tree()),
        n_edges_(m.component().edges().size()),
        n_vars_(m.presence_count()),
        chg_(m.alpha().change_coefficient()),
        domain_(n_vars_, -1),
        own_(n_vars_, 0),
        f_(n_edges_, std::vector<Cost>(2 * tree_.size(), 0)) {
    for (const auto& row : m_.rows()) {
      if (row.family != "c7" && row.family != "c1" && row.family != "c2") continue;
      LeRow r;
      r.consistency = row.family == "c7";
      const int sign = row.sense == Sense::kLessEqual ? 1 : -1;
      for (const auto& t : row.terms) r.terms.push_back(Term{t.var, sign * t.coefficient});
      r.rhs = sign * row.rhs;
      rows_.push_back(std::move(r));
    }
    rows_of_var_.assign(n_vars_, {});
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (const auto& t : rows_[r].terms) rows_of_var_[static_cast<std::size_t>(t.var)].push_back(r);
    }
  }

  BbResult run() {
    const bool only_consistency =
        std::all_of(rows_.begin(), rows_.end(), [](const LeRow& r) { return r.consistency; });
    if (chg_ == 0 && only_consistency) return per_node_matching();
    const std::vector<std::uint8_t> zero(n_vars_, 0);
    best_values_ = complete(zero);
    best_ = m_.evaluate(best_values_);
    search(std::vector<long long>(rows_.size(), 0), kRootIterations);
    return BbResult{best_values_, best_, nodes_};
  }

 private:
  static constexpr Cost kBig = kInfiniteCost;
  static constexpr int kRootIterations = 300;
  static constexpr int kNodeIterations = 40;

  static Cost add(Cost a, Cost b) { return (a >= kBig || b >= kBig) ? kBig : a + b; }

  // Without a change cost the nodes are independent: one maximum-weight
  // matching per node is optimal.
  BbResult per_node_matching() {
    std::vector<std::uint8_t> p(n_vars_, 0);
    const auto& comp = m_.component();
    for (NodeId v : tree_.internal_nodes()) {
      std::vector<weights::WeightedEdge> edges;
      std::vector<int> vars;
      for (std::size_t e = 0; e < n_edges_; ++e) {
        const int var = m_.presence_var(v, static_cast<int>(e));
        if (var < 0 || m_.variables()[static_cast<std::size_t>(var)].objective >= 0) continue;
        edges.push_back({comp.edges()[e].u, comp.edges()[e].v, -m_.variables()[static_cast<std::size_t>(var)].objective});
        vars.push_back(var);
      }
      const auto mate = weights::max_weight_matching(static_cast<int>(comp.vertices().size()), edges);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (mate[static_cast<std::size_t>(edges[i].u)] == edges[i].v) p[static_cast<std::size_t>(vars[i])] = 1;
      }
    }
    auto values = complete(p);
    const Cost c = m_.evaluate(values);
    return BbResult{std::move(values), c, 1};
  }

  // Tree DP for one adjacency with the current domains and own costs.
  Cost relax(std::size_t e) {
    auto& f = f_[e];
    const int ei = static_cast<int>(e);
    for (NodeId v : tree_.post_order()) {
      const auto vi = static_cast<std::size_t>(v);
      bool allow0;
      bool allow1;
      Cost own1 = 0;
      if (const int var = m_.presence_var(v, ei); var >= 0) {
        const int d = domain_[static_cast<std::size_t>(var)];
        allow0 = d != 1;
        allow1 = d != 0;
        own1 = own_[static_cast<std::size_t>(var)];
      } else {
        const int fixed = m_.fixed_presence(v, ei);
        allow0 = fixed == 0;
        allow1 = fixed == 1;
      }
      Cost f0 = 0;
      Cost f1 = own1;
      const bool v_fixed = m_.presence_var(v, ei) < 0;
      for (NodeId c : tree_.children(v)) {
        const auto ci = static_cast<std::size_t>(c);
        // Changes between two constants are already in the model constant.
        const Cost chg = v_fixed && m_.presence_var(c, ei) < 0 ? 0 : chg_;
        f0 = add(f0, std::min(f[2 * ci], add(f[2 * ci + 1], chg)));
        f1 = add(f1, std::min(f[2 * ci + 1], add(f[2 * ci], chg)));
      }
      f[2 * vi] = allow0 ? f0 : kBig;
      f[2 * vi + 1] = allow1 ? f1 : kBig;
    }
    const auto ri = static_cast<std::size_t>(tree_.root());
    return std::min(f[2 * ri], f[2 * ri + 1]);
  }

  // Lagrangian bound for multipliers `lambda` on the active rows.
  Cost bound(const std::vector<long long>& lambda, const std::vector<char>& active) {
    for (std::size_t v = 0; v < n_vars_; ++v) own_[v] = m_.variables()[v].objective;
    Cost total = m_.objective_constant();
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!active[r] || lambda[r] == 0) continue;
      for (const auto& t : rows_[r].terms) own_[static_cast<std::size_t>(t.var)] += lambda[r] * t.coefficient;
      total -= lambda[r] * rows_[r].rhs;
    }
    for (std::size_t e = 0; e < n_edges_; ++e) total = add(total, relax(e));
    return total;
  }

  // Argmin presences of the last bound() call, ties resolved to absence.
  std::vector<std::uint8_t> argmin() const {
    std::vector<std::uint8_t> p(n_vars_, 0);
    std::vector<std::uint8_t> state(tree_.size(), 0);
    for (std::size_t e = 0; e < n_edges_; ++e) {
      const auto& f = f_[e];
      for (NodeId v : tree_.pre_order()) {
        const auto vi = static_cast<std::size_t>(v);
        const NodeId u = tree_.parent(v);
        Cost c0 = f[2 * vi];
        Cost c1 = f[2 * vi + 1];
        if (u != kNoNode) {
          if (state[static_cast<std::size_t>(u)]) {
            c0 = add(c0, chg_);
          } else {
            c1 = add(c1, chg_);
          }
        }
        state[vi] = c1 < c0 ? 1 : 0;
        if (const int var = m_.presence_var(v, static_cast<int>(e)); var >= 0) {
          p[static_cast<std::size_t>(var)] = state[vi];
        }
      }
    }
    return p;
  }

  long long lhs(const LeRow& row, const std::vector<std::uint8_t>& p) const {
    long long s = 0;
    for (const auto& t : row.terms) s += static_cast<long long>(t.coefficient) * p[static_cast<std::size_t>(t.var)];
    return s;
  }

  // Presence assignment plus the implied change variables.
  std::vector<std::uint8_t> complete(const std::vector<std::uint8_t>& p) const {
    std::vector<std::uint8_t> values(m_.variables().size(), 0);
    std::copy(p.begin(), p.end(), values.begin());
    for (std::size_t i = n_vars_; i < values.size(); ++i) {
      const auto& var = m_.variables()[i];
      auto value_at = [&](NodeId n) {
        const int pv = m_.presence_var(n, var.edge);
        return pv >= 0 ? static_cast<int>(p[static_cast<std::size_t>(pv)]) : m_.fixed_presence(n, var.edge);
      };
      values[i] = value_at(var.node) != value_at(tree_.parent(var.node)) ? 1 : 0;
    }
    return values;
  }

  void offer(const std::vector<std::uint8_t>& p) {
    for (const auto& row : rows_) {
      if (lhs(row, p) > row.rhs) return;
    }
    auto values = complete(p);
    const Cost c = m_.evaluate(values);
    if (c < best_) {
      best_ = c;
      best_values_ = std::move(values);
    }
  }

  // Makes a relaxed solution consistent by keeping, per violated
  // consistency row, the present variable with the smallest objective.
  void repair_and_offer(std::vector<std::uint8_t> p) {
    for (const auto& row : rows_) {
      if (!row.consistency || lhs(row, p) <= row.rhs) continue;
      int keep = -1;
      for (const auto& t : row.terms) {
        const auto v = static_cast<std::size_t>(t.var);
        if (p[v] && (keep < 0 || m_.variables()[v].objective < m_.variables()[static_cast<std::size_t>(keep)].objective)) {
          keep = t.var;
        }
      }
      for (const auto& t : row.terms) {
        if (t.var != keep) p[static_cast<std::size_t>(t.var)] = 0;
      }
    }
    offer(p);
  }

  // Fixes var to value, propagating consistency for value 1. Every changed
  // variable goes to `trail`; returns false on a contradiction.
  bool fix(int var, int value, std::vector<int>& trail) {
    domain_[static_cast<std::size_t>(var)] = value;
    trail.push_back(var);
    if (value == 1) {
      for (auto r : rows_of_var_[static_cast<std::size_t>(var)]) {
        if (!rows_[r].consistency) continue;
        for (const auto& t : rows_[r].terms) {
          if (t.var == var) continue;
          auto& d = domain_[static_cast<std::size_t>(t.var)];
          if (d == 1) return false;
          if (d == -1) {
            d = 0;
            trail.push_back(t.var);
          }
        }
      }
    }
    return true;
  }

  void search(std::vector<long long> lambda, int iterations) {
    ++nodes_;
    // Rows whose variables are all fixed are constants here.
    std::vector<char> active(rows_.size(), 0);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      long long fixed_lhs = 0;
      for (const auto& t : rows_[r].terms) {
        const int d = domain_[static_cast<std::size_t>(t.var)];
        if (d == -1) {
          active[r] = 1;
        } else {
          fixed_lhs += static_cast<long long>(t.coefficient) * d;
        }
      }
      if (!active[r] && fixed_lhs > rows_[r].rhs) return;
    }

    std::vector<long long> best_lambda = lambda;
    Cost best_bound = std::numeric_limits<Cost>::min();
    double theta = 1.0;
    int stall = 0;
    for (int it = 0; it < iterations; ++it) {
      const Cost lb = bound(lambda, active);
      if (lb > best_bound) {
        best_bound = lb;
        best_lambda = lambda;
        stall = 0;
      } else if (++stall >= 5) {
        theta *= 0.5;
        stall = 0;
      }
      if (lb >= best_) return;
      const auto p = argmin();
      repair_and_offer(p);
      if (lb >= best_) return;

      std::vector<long long> g(rows_.size(), 0);
      bool feasible = true;
      long long gap = 0;
      double norm = 0.0;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (!active[r]) continue;
        g[r] = lhs(rows_[r], p) - rows_[r].rhs;
        feasible &= g[r] <= 0;
        gap -= lambda[r] * g[r];
        if (g[r] > 0 || lambda[r] > 0) norm += static_cast<double>(g[r]) * static_cast<double>(g[r]);
      }
      if (feasible && gap == 0) return;  // relaxed optimum is optimal here
      if (norm == 0.0) break;
      const double step = theta * static_cast<double>(best_ - lb) / norm;
      bool moved = false;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (!active[r]) continue;
        const long long next = std::max<long long>(0, lambda[r] + std::llround(step * static_cast<double>(g[r])));
        moved |= next != lambda[r];
        lambda[r] = next;
      }
      if (!moved) break;
    }

    const Cost lb = bound(best_lambda, active);
    if (lb >= best_) return;
    const auto p = argmin();
    // Branch on the first free variable of a violated row; failing that, of
    // a slack row that still carries a multiplier.
    int branch = -1;
    for (int pass = 0; pass < 2 && branch == -1; ++pass) {
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (!active[r]) continue;
        const long long slack = rows_[r].rhs - lhs(rows_[r], p);
        const bool pick = pass == 0 ? slack < 0 : (slack > 0 && best_lambda[r] > 0);
        if (!pick) continue;
        for (const auto& t : rows_[r].terms) {
          if (domain_[static_cast<std::size_t>(t.var)] == -1 && (branch == -1 || t.var < branch)) branch = t.var;
        }
      }
    }
    if (branch == -1) {
      offer(p);
      return;
    }
    for (int value : {0, 1}) {
      std::vector<int> trail;
      if (fix(branch, value, trail)) search(best_lambda, kNodeIterations);
      for (int v : trail) domain_[static_cast<std::size_t>(v)] = -1;
    }
  }

  const IlpModel& m_;
  const Tree& tree_;
  std::size_t n_edges_;
  std::size_t n_vars_;
  Cost chg_;
  std::vector<int> domain_;
  std::vector<Cost> own_;
  std::vector<std::vector<Cost>> f_;
  std::vector<LeRow> rows_;
  std::vector<std::vector<std::size_t>> rows_of_var_;
  std::vector<std::uint8_t> best_values_;
  Cost best_ = kBig;
  std::uint64_t nodes_ = 0;
};

}  // namespace

BbResult solve_bb(const IlpModel& model) {
  auto result = BranchAndBound(model).run();
  if (!model.violated_rows(result.values).empty()) {
    throw InternalError("branch-and-bound returned an infeasible assignment");
  }
  return result;
}

dp::ComponentSolution to_solution(const IlpModel& model, const BbResult& result) {
  dp::ComponentSolution sol;
  sol.per_node.assign(model.tree().size(), {});
  for (std::size_t i = 0; i < model.presence_count(); ++i) {
    if (!result.values[i]) continue;
    const auto& var = model.variables()[i];
    sol.per_node[static_cast<std::size_t>(var.node)].push_back(
        model.component().edges()[static_cast<std::size_t>(var.edge)].adjacency);
  }
  for (auto& adjs : sol.per_node) std::sort(adjs.begin(), adjs.end());
  sol.objective = result.objective;
  return sol;
}

dp::ComponentSolution solve_component_bb(const graph::Component& component, const Phylogeny& phylogeny,
                                         const WeightTable& weights, const Alpha& alpha) {
  const auto model = build_model(component, phylogeny, weights, alpha);
  return to_solution(model, solve_bb(model));
}

namespace {

void write_terms(std::ostream& out, const std::vector<std::pair<std::string, long long>>& terms,
                 std::size_t per_line) {
  bool first = true;
  std::size_t on_line = 0;
  for (const auto& [name, coef] : terms) {
    if (coef == 0) continue;
    if (on_line == per_line) {
      out << "\n   ";
      on_line = 0;
    }
    const long long mag = coef < 0 ? -coef : coef;
    if (first) {
      if (coef < 0) out << "- ";
    } else {
      out << (coef < 0 ? " - " : " + ");
    }
    if (mag != 1) out << mag << ' ';
    out << name;
    first = false;
    ++on_line;
  }
  if (first) out << "0";
}

}  // namespace

void export_lp(const IlpModel& model, std::ostream& out) {
  const auto& vars = model.variables();
  out << "\\ weighted SCJ labeling of one adjacency component\n";
  out << "\\ objective unit: 1/" << model.alpha().den() * kWeightDenominator << "\n";
  out << "\\ objective constant: " << model.objective_constant() << "\n";
  out << "Minimize\n obj: ";
  std::vector<std::pair<std::string, long long>> obj;
  for (const auto& v : vars) obj.emplace_back(v.name, v.objective);
  write_terms(out, obj, 6);
  out << "\nSubject To\n";
  for (const auto& row : model.rows()) {
    std::vector<std::pair<std::string, long long>> terms;
    for (const auto& t : row.terms) terms.emplace_back(vars[static_cast<std::size_t>(t.var)].name, t.coefficient);
    out << ' ' << row.name << ": ";
    write_terms(out, terms, terms.size() + 1);
    out << (row.sense == Sense::kLessEqual ? " <= " : " >= ") << row.rhs << '\n';
  }
  out << "Binaries\n";
  for (const auto& v : vars) out << ' ' << v.name << '\n';
  out << "End\n";
}

void export_lp(const IlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write LP file " + path.string());
  export_lp(model, out);
  if (!out) throw InputError("failed writing LP file " + path.string());
}

namespace {

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, long long>> parse_expression(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::pair<std::string, long long>> terms;
  std::string tok;
  long long sign = 1;
  long long coef = 1;
  bool have_coef = false;
  while (in >> tok) {
    if (tok == "+") continue;
    if (tok == "-") {
      sign = -sign;
      continue;
    }
    const bool numeric = std::isdigit(static_cast<unsigned char>(tok[0])) != 0;
    if (numeric) {
      coef = std::stoll(tok);
      have_coef = true;
      continue;
    }
    terms.emplace_back(tok, sign * coef);
    sign = 1;
    coef = 1;
    have_coef = false;
  }
  if (have_coef && coef != 0) throw InputError("LP expression has a dangling constant");
  return terms;
}

}  // namespace

LpFile parse_lp(std::istream& in) {
  LpFile lp;
  enum class Section { kNone, kObjective, kConstraints, kBinaries, kEnd } section = Section::kNone;
  std::string objective_text;
  std::string line;
  const std::string constant_tag = "\\ objective constant:";
  while (std::getline(in, line)) {
    if (line.rfind(constant_tag, 0) == 0) {
      lp.objective_constant = std::stoll(line.substr(constant_tag.size()));
      continue;
    }
    if (auto c = line.find('\\'); c != std::string::npos) line.erase(c);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto key = lower(text);
    if (key == "minimize") {
      section = Section::kObjective;
      continue;
    }
    if (key == "subject to") {
      section = Section::kConstraints;
      continue;
    }
    if (key == "binaries" || key == "binary") {
      section = Section::kBinaries;
      continue;
    }
    if (key == "end") {
      section = Section::kEnd;
      continue;
    }
    switch (section) {
      case Section::kObjective:
        objective_text += ' ' + text;
        break;
      case Section::kConstraints: {
        const auto colon = text.find(':');
        if (colon == std::string::npos) throw InputError("LP row without a name: " + text);
        LpFile::LpRow row;
        row.name = trim(text.substr(0, colon));
        auto body = text.substr(colon + 1);
        auto op = body.find("<=");
        row.sense = Sense::kLessEqual;
        if (op == std::string::npos) {
          op = body.find(">=");
          row.sense = Sense::kGreaterEqual;
        }
        if (op == std::string::npos) throw InputError("LP row without a comparison: " + text);
        row.rhs = std::stoll(body.substr(op + 2));
        row.terms = parse_expression(body.substr(0, op));
        lp.rows.push_back(std::move(row));
        break;
      }
      case Section::kBinaries:
        lp.binaries.push_back(text);
        break;
      default:
        throw InputError("LP text outside of a section: " + text);
    }
  }
  if (auto colon = objective_text.find(':'); colon != std::string::npos) {
    objective_text = objective_text.substr(colon + 1);
  }
  lp.objective = parse_expression(objective_text);
  return lp;
}

std::vector<std::string> violated_rows(const LpFile& lp, const std::map<std::string, int>& values) {
  std::vector<std::string> out;
  for (const auto& row : lp.rows) {
    long long lhs = 0;
    for (const auto& [name, coef] : row.terms) {
      auto it = values.find(name);
      lhs += coef * (it == values.end() ? 0 : it->second);
    }
    const bool ok = row.sense == Sense::kLessEqual ? lhs <= row.rhs : lhs >= row.rhs;
    if (!ok) out.push_back(row.name);
  }
  return out;
}

}  // namespace wscj::ilp
