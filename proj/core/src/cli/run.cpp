#include "wscj/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <boost/version.hpp>

#include "json.hpp"
#include "wscj/cli/genome_io.hpp"
#include "wscj/cli/newick.hpp"
#include "wscj/core/errors.hpp"
#include "wscj/graph/adjacency_graph.hpp"
#include "wscj/ilp/model.hpp"
#include "wscj/version.hpp"
#include "wscj/weights/weight_io.hpp"

namespace wscj::cli {

std::string to_string(WeightSource s) {
  switch (s) {
    case WeightSource::kFile:
      return "file";
    case WeightSource::kBoltzmann:
      return "boltzmann";
    default:
      return "none";
  }
}

std::string to_string(Route r) {
  switch (r) {
    case Route::kForceDp:
      return "dp";
    case Route::kForceIlp:
      return "ilp";
    default:
      return "auto";
  }
}

std::string to_string(Solver s) { return s == Solver::kDp ? "dp" : "ilp"; }

void RunConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InputError("threshold must lie in [0,1]");
  if (!(kt > 0.0) || !std::isfinite(kt)) throw InputError("kT must be a positive number");
  if (explosion_cap == 0) throw InputError("explosion cap must be positive");
  if (threads == 0) throw InputError("thread count must be positive");
  if (!ilp_enabled && route == Route::kForceIlp) throw InputError("cannot force branch-and-bound with ILP disabled");
  if (weight_source == WeightSource::kFile && weights_path.empty()) throw InputError("missing weight file path");
}

namespace {

struct ComponentWork {
  ComponentReport report;
  dp::ComponentSolution best;
  std::vector<dp::ComponentSolution> samples;
};

std::string padded(std::size_t i, int width) {
  std::string s = std::to_string(i);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

ComponentWork solve_one(const graph::Component& component, std::size_t index, const Phylogeny& phylogeny,
                        const WeightTable& weights, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ComponentWork work;
  auto& r = work.report;
  r.index = index;
  r.vertex_count = component.stats().vertex_count;
  r.edge_count = component.edges().size();
  r.max_degree = component.stats().max_degree;
  r.label_space_bound = component.stats().label_space_bound;
  r.work_estimate = graph::dp_work_estimate(component);

  Solver solver = Solver::kDp;
  if (config.route == Route::kForceIlp) {
    solver = Solver::kIlp;
  } else if (config.route == Route::kAuto && r.work_estimate > config.explosion_cap) {
    if (!config.ilp_enabled) {
      throw CapacityExceeded("component " + std::to_string(index) + " needs about " +
                             std::to_string(r.work_estimate) + " DP steps, above the cap of " +
                             std::to_string(config.explosion_cap) + "; enable branch-and-bound or raise --cap");
    }
    solver = Solver::kIlp;
  }
  r.solver = solver;

  if (solver == Solver::kDp) {
    const auto cap = config.route == Route::kForceDp ? std::numeric_limits<std::uint64_t>::max() : config.explosion_cap;
    auto solved = dp::solve_component(component, phylogeny, weights, config.alpha, cap);
    work.best = std::move(solved.solution);
    if (config.n_samples > 0) {
      work.samples = dp::sample_component(solved.table, config.n_samples, derive_seed(config.seed, index));
    }
  } else {
    const auto model = ilp::build_model(component, phylogeny, weights, config.alpha);
    if (!config.lp_dir.empty()) {
      ilp::export_lp(model, config.lp_dir / ("component_" + padded(index, 5) + ".lp"));
    }
    const auto result = ilp::solve_bb(model);
    r.bb_nodes = result.nodes_explored;
    work.best = ilp::to_solution(model, result);
    // Co-optimal solutions are not enumerated here: every sample repeats
    // the optimum found.
    for (std::uint64_t s = 0; s < config.n_samples; ++s) {
      auto copy = work.best;
      copy.sample_index = s;
      copy.seed = derive_seed(config.seed, index);
      work.samples.push_back(std::move(copy));
    }
  }
  r.objective = work.best.objective;
  r.cooptimal = work.best.cooptimal;
  r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return work;
}

Labeling assemble(const Phylogeny& phylogeny, const std::vector<const dp::ComponentSolution*>& parts) {
  const auto& tree = phylogeny.tree();
  std::vector<std::vector<Adjacency>> per_node(tree.size());
  for (const auto* part : parts) {
    for (std::size_t v = 0; v < part->per_node.size(); ++v) {
      per_node[v].insert(per_node[v].end(), part->per_node[v].begin(), part->per_node[v].end());
    }
  }
  Labeling labeling(tree.size());
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const auto id = static_cast<NodeId>(v);
    labeling[v] = tree.is_leaf(id) ? phylogeny.leaf_genome(id) : AdjacencySet(std::move(per_node[v]), phylogeny.universe());
  }
  return labeling;
}

}  // namespace

SolveReport solve_instance(const Phylogeny& phylogeny, const WeightTable& weights, const RunConfig& config) {
  config.validate();
  const auto& tree = phylogeny.tree();
  const auto candidates = graph::candidate_adjacencies(phylogeny);
  const auto global = graph::build_global_graph(phylogeny, candidates, weights, quantize_weight(config.threshold));
  const auto components = graph::connected_components(global);

  std::vector<ComponentWork> results(components.size());
  std::vector<std::exception_ptr> errors(components.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < components.size(); i = next++) {
      try {
        results[i] = solve_one(components[i], i, phylogeny, weights, config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_workers = std::max<std::size_t>(1, std::min<std::size_t>(config.threads, components.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SolveReport report;
  report.n_markers = phylogeny.universe()->size();
  Cost total = 0;
  bool all_counted = true;
  BigCount product = 1;
  std::vector<const dp::ComponentSolution*> best_parts;
  for (const auto& w : results) {
    report.components.push_back(w.report);
    report.max_component = std::max(report.max_component, w.report.vertex_count);
    report.max_degree = std::max(report.max_degree, w.report.max_degree);
    total += w.best.objective;
    if (w.best.cooptimal) {
      product *= *w.best.cooptimal;
    } else {
      all_counted = false;
    }
    best_parts.push_back(&w.best);
  }
  if (all_counted) report.cooptimal = product;

  // Everything outside the components: weight of unannotated pairs and one
  // change per leaf adjacency that no component carries.
  MicroWeight outside_weight = 0;
  for (const auto& [key, w] : weights.entries()) {
    if (tree.is_leaf(key.first)) continue;
    auto it = global.edges.find(key.second);
    const bool annotated = it != global.edges.end() &&
                           std::binary_search(it->second.begin(), it->second.end(), key.first);
    if (!annotated) outside_weight += w;
  }
  std::int64_t outside_changes = 0;
  for (NodeId leaf : tree.leaves()) {
    for (const auto& adj : phylogeny.leaf_genome(leaf)) {
      if (!global.edges.count(adj)) ++outside_changes;
    }
  }
  total += config.alpha.cost(outside_changes, outside_weight);

  report.labeling = assemble(phylogeny, best_parts);
  report.objective = labeling_objective(phylogeny, report.labeling, weights, config.alpha);
  if (report.objective.cost != total) {
    throw InternalError("assembled labeling evaluates to " + std::to_string(report.objective.cost) +
                        " but the solvers reported " + std::to_string(total));
  }

  for (std::uint64_t s = 0; s < config.n_samples; ++s) {
    std::vector<const dp::ComponentSolution*> parts;
    for (const auto& w : results) parts.push_back(&w.samples[s]);
    auto labeling = assemble(phylogeny, parts);
    if (labeling_objective(phylogeny, labeling, weights, config.alpha).cost != total) {
      throw InternalError("sample " + std::to_string(s) + " is not optimal");
    }
    for (NodeId v : tree.internal_nodes()) {
      for (const auto& adj : labeling[static_cast<std::size_t>(v)]) ++report.sample_counts[{v, adj}];
    }
    report.samples.push_back(std::move(labeling));
  }
  return report;
}

WeightTable load_weights(const Phylogeny& phylogeny, const RunConfig& config) {
  switch (config.weight_source) {
    case WeightSource::kFile:
      return weights::load_weight_table(config.weights_path, phylogeny);
    case WeightSource::kBoltzmann:
      return weights::boltzmann_weight_table(phylogeny, config.kt, config.threads);
    default:
      return {};
  }
}

SolveReport run_solve(const RunConfig& config) {
  config.validate();
  auto tree = load_tree(config.tree_path);
  const auto genomes = load_genomes(config.genomes_path);
  const auto phylogeny = build_phylogeny(std::move(tree), genomes);
  const auto weights = load_weights(phylogeny, config);
  if (!config.lp_dir.empty()) std::filesystem::create_directories(config.lp_dir);
  auto report = solve_instance(phylogeny, weights, config);
  write_outputs(report, phylogeny, weights, config);
  return report;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

std::string big_to_string(const std::optional<BigCount>& c) { return c ? c->str() : "NA"; }

void write_cars(std::ostream& out, const std::string& name, const std::vector<Car>& cars) {
  write_genomes(out, {NamedGenome{name, cars}});
}

}  // namespace

void write_outputs(const SolveReport& report, const Phylogeny& phylogeny, const WeightTable& weights,
                   const RunConfig& config) {
  const auto& tree = phylogeny.tree();
  const auto& dir = config.out_dir;
  std::filesystem::create_directories(dir);
  const auto& alpha = config.alpha;

  {
    auto out = open_out(dir / "ancestors.tsv");
    for (NodeId v : tree.internal_nodes()) write_cars(out, tree.name(v), extract_cars(report.labeling[static_cast<std::size_t>(v)]));
  }
  {
    auto out = open_out(dir / "stats.tsv");
    out << "node\tparent\tadjacencies\tcars\tcars_nonsingleton\tscj_to_parent\tdiscarded_weight\n";
    for (NodeId v : tree.internal_nodes()) {
      const auto& label = report.labeling[static_cast<std::size_t>(v)];
      const auto cars = extract_cars(label);
      const auto nonsingleton = std::count_if(cars.begin(), cars.end(), [](const Car& c) { return c.markers.size() > 1; });
      MicroWeight discarded = 0;
      for (auto it = weights.entries().lower_bound({v, Adjacency()}); it != weights.entries().end() && it->first.first == v; ++it) {
        if (!label.contains(it->first.second)) discarded += it->second;
      }
      const NodeId u = tree.parent(v);
      out << tree.name(v) << '\t' << (u == kNoNode ? "-" : tree.name(u)) << '\t' << label.size() << '\t'
          << cars.size() << '\t' << nonsingleton << '\t'
          << (u == kNoNode ? "-" : std::to_string(scj_distance(report.labeling[static_cast<std::size_t>(u)], label)))
          << '\t' << weights::format_weight(discarded) << '\n';
    }
  }
  std::size_t n_dp = 0;
  for (const auto& c : report.components) n_dp += c.solver == Solver::kDp ? 1 : 0;
  const std::string scale = std::to_string(alpha.den() * kWeightDenominator);
  {
    auto out = open_out(dir / "summary.tsv");
    out << "key\tvalue\n";
    out << "objective\t" << fixed6(report.objective.value) << '\n';
    out << "objective_scaled\t" << report.objective.cost << '\n';
    out << "objective_scale\t" << scale << '\n';
    out << "scj_changes\t" << report.objective.scj_changes << '\n';
    out << "discarded_weight\t" << weights::format_weight(report.objective.discarded) << '\n';
    out << "cooptimal\t" << big_to_string(report.cooptimal) << '\n';
    out << "markers\t" << report.n_markers << '\n';
    out << "max_component\t" << report.max_component << '\n';
    out << "max_degree\t" << report.max_degree << '\n';
    out << "components\t" << report.components.size() << '\n';
    out << "dp_components\t" << n_dp << '\n';
    out << "ilp_components\t" << report.components.size() - n_dp << '\n';
  }
  {
    auto out = open_out(dir / "components.tsv");
    out << "component\textremities\tedges\tmax_degree\tlabel_bound\twork_estimate\tsolver\tobjective_scaled\tcooptimal\tbb_nodes\n";
    for (const auto& c : report.components) {
      out << c.index << '\t' << c.vertex_count << '\t' << c.edge_count << '\t' << c.max_degree << '\t'
          << c.label_space_bound << '\t' << c.work_estimate << '\t' << to_string(c.solver) << '\t' << c.objective
          << '\t' << big_to_string(c.cooptimal) << '\t' << c.bb_nodes << '\n';
    }
  }
  if (config.n_samples > 0) {
    auto freq = open_out(dir / "frequencies.tsv");
    freq << "node\textremity_a\textremity_b\tcount\tfrequency\n";
    std::map<NodeId, std::size_t> rank;
    for (NodeId v : tree.internal_nodes()) rank.emplace(v, rank.size());
    std::vector<std::pair<std::pair<NodeId, Adjacency>, std::uint64_t>> rows(report.sample_counts.begin(), report.sample_counts.end());
    std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
      return std::make_pair(rank[a.first.first], a.first.second) < std::make_pair(rank[b.first.first], b.first.second);
    });
    for (const auto& [key, count] : rows) {
      freq << tree.name(key.first) << '\t' << key.second.first().to_string() << '\t' << key.second.second().to_string()
           << '\t' << count << '\t' << fixed6(static_cast<double>(count) / static_cast<double>(config.n_samples)) << '\n';
    }
    auto samples = open_out(dir / "samples.tsv");
    samples << "sample\tnode\textremity_a\textremity_b\n";
    for (std::size_t s = 0; s < report.samples.size(); ++s) {
      for (NodeId v : tree.internal_nodes()) {
        for (const auto& adj : report.samples[s][static_cast<std::size_t>(v)]) {
          samples << s << '\t' << tree.name(v) << '\t' << adj.first().to_string() << '\t' << adj.second().to_string() << '\n';
        }
      }
    }
  }
  {
    using nlohmann::ordered_json;
    ordered_json m;
    m["tool"] = "wscj";
    m["version"] = kVersion;
    m["versions"] = {{"wscj", kVersion},
                     {"boost", BOOST_LIB_VERSION},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    m["config"] = {{"alpha", alpha.to_string()},
                   {"threshold", config.threshold},
                   {"kt", config.kt},
                   {"samples", config.n_samples},
                   {"seed", config.seed},
                   {"explosion_cap", config.explosion_cap},
                   {"ilp_enabled", config.ilp_enabled},
                   {"route", to_string(config.route)},
                   {"weight_source", to_string(config.weight_source)}};
    m["inputs"] = {{"tree", config.tree_path.generic_string()},
                   {"genomes", config.genomes_path.generic_string()},
                   {"weights", config.weights_path.generic_string()}};
    m["result"] = {{"objective", report.objective.value},
                   {"objective_scaled", report.objective.cost},
                   {"objective_scale", alpha.den() * kWeightDenominator},
                   {"scj_changes", report.objective.scj_changes},
                   {"discarded_weight", weights::format_weight(report.objective.discarded)},
                   {"cooptimal", big_to_string(report.cooptimal)},
                   {"markers", report.n_markers},
                   {"max_component", report.max_component},
                   {"max_degree", report.max_degree},
                   {"components", report.components.size()},
                   {"dp_components", n_dp},
                   {"ilp_components", report.components.size() - n_dp}};
    auto out = open_out(dir / "manifest.json");
    out << m.dump(2) << '\n';
  }
}

}  // namespace wscj::cli
