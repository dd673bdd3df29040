#include "wscj/cli/commands.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "wscj/cli/genome_io.hpp"
#include "wscj/cli/newick.hpp"
#include "wscj/core/errors.hpp"
#include "wscj/core/random.hpp"
#include "wscj/weights/boltzmann.hpp"
#include "wscj/weights/weight_io.hpp"

namespace wscj::cli {

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

std::vector<NamedGenome> named(const Tree& tree, const std::vector<sim::LinearGenome>& genomes, bool leaves_only) {
  std::vector<NamedGenome> out;
  for (NodeId v : tree.post_order()) {
    if (leaves_only && !tree.is_leaf(v)) continue;
    NamedGenome g{tree.name(v), {}};
    for (const auto& chr : genomes[static_cast<std::size_t>(v)]) g.chromosomes.push_back(Car{CarKind::kLinear, chr});
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

void run_weigh(const WeighConfig& config) {
  auto tree = load_tree(config.tree_path);
  const auto phylogeny = build_phylogeny(std::move(tree), load_genomes(config.genomes_path));
  const auto table = weights::boltzmann_weight_table(phylogeny, config.kt, config.threads);
  weights::write_weight_table(config.out_path, table, phylogeny);
}

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t r) { return derive_seed(seed, r); }

void run_simulate(const SimulateConfig& config) {
  config.sim.validate();
  if (config.replicates == 0) throw InputError("at least one replicate is required");
  std::filesystem::create_directories(config.out_dir);
  std::vector<sim::SimResult> results(config.replicates);
  std::vector<std::exception_ptr> errors(config.replicates);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t r = next++; r < config.replicates; r = next++) {
      try {
        auto c = config.sim;
        c.seed = replicate_seed(config.sim.seed, r);
        results[r] = sim::evolve(c);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const auto n_workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(config.threads, config.replicates));
  std::vector<std::thread> pool;
  for (std::uint64_t t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  auto summary = open_out(config.out_dir / "simulations.tsv");
  summary << "replicate\tseed\tleaves\tmarkers\ttotal_events\tdiameter\n";
  for (std::uint64_t r = 0; r < config.replicates; ++r) {
    const auto& res = results[r];
    const auto& tree = res.phylogeny.tree();
    char name[32];
    std::snprintf(name, sizeof(name), "rep_%03llu", static_cast<unsigned long long>(r + 1));
    const auto dir = config.out_dir / name;
    std::filesystem::create_directories(dir);
    open_out(dir / "tree.nwk") << write_newick(tree) << '\n';
    {
      auto out = open_out(dir / "genomes.tsv");
      write_genomes(out, named(tree, res.genomes, true));
    }
    {
      auto out = open_out(dir / "truth.tsv");
      write_genomes(out, named(tree, res.genomes, false));
    }
    {
      auto out = open_out(dir / "events.tsv");
      out << "node\tparent\tbranch_length\tevents\tinversions\ttranslocations\n";
      for (NodeId v : tree.post_order()) {
        if (v == tree.root()) continue;
        const auto vi = static_cast<std::size_t>(v);
        out << tree.name(v) << '\t' << tree.name(tree.parent(v)) << '\t' << fixed6(tree.node(v).branch_length) << '\t'
            << res.branch_events[vi] << '\t' << res.inversions[vi] << '\t' << res.translocations[vi] << '\n';
      }
    }
    summary << r + 1 << '\t' << replicate_seed(config.sim.seed, r) << '\t' << tree.leaves().size() << '\t'
            << config.sim.n_markers << '\t' << res.total_events << '\t' << fixed6(sim::tree_diameter(tree)) << '\n';
  }
}

sim::Evaluation run_evaluate(const EvaluateConfig& config) {
  const auto tree = load_tree(config.tree_path);
  const auto truth_genomes = load_genomes(config.truth_path);
  const auto predicted_genomes = load_genomes(config.predicted_path);
  if (truth_genomes.empty()) throw InputError("truth file holds no genomes");
  const auto universe = make_universe(genome_markers(truth_genomes.front()));
  const auto truth = labeling_from_genomes(tree, truth_genomes, universe);
  const auto predicted = labeling_from_genomes(tree, predicted_genomes, universe);
  const auto eval = sim::score_reconstruction(tree, truth, predicted);

  auto out = open_out(config.out_path);
  out << "node\ttp\tfp\tfn\tsensitivity\tprecision\tf1\tf05\tdegenerate\n";
  auto row = [&](const std::string& name, const sim::Scores& s) {
    std::string flag = "-";
    if (s.sensitivity_degenerate && s.precision_degenerate) {
      flag = "sensitivity,precision";
    } else if (s.sensitivity_degenerate) {
      flag = "sensitivity";
    } else if (s.precision_degenerate) {
      flag = "precision";
    }
    out << name << '\t' << s.tp << '\t' << s.fp << '\t' << s.fn << '\t' << fixed6(s.sensitivity) << '\t'
        << fixed6(s.precision) << '\t' << fixed6(s.f1) << '\t' << fixed6(s.f05) << '\t' << flag << '\n';
  };
  for (std::size_t i = 0; i < eval.nodes.size(); ++i) row(tree.name(eval.nodes[i]), eval.per_node[i]);
  row("pooled", eval.pooled);
  return eval;
}

}  // namespace wscj::cli
