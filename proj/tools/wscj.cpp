#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wscj/cli/commands.hpp"
#include "wscj/cli/run.hpp"
#include "wscj/core/errors.hpp"
#include "wscj/version.hpp"

namespace {

struct SolveArgs {
  std::string alpha = "0";
  std::string route = "auto";
  std::string weights;
  bool boltzmann = false;
  bool no_ilp = false;
  wscj::cli::RunConfig config;
};

void add_solve_options(CLI::App* cmd, SolveArgs& a) {
  auto& c = a.config;
  cmd->add_option("--tree", c.tree_path, "Newick tree")->required()->check(CLI::ExistingFile);
  cmd->add_option("--genomes", c.genomes_path, "Leaf genome TSV")->required()->check(CLI::ExistingFile);
  auto* w = cmd->add_option("--weights", a.weights, "Weight TSV (node, extremity, extremity, weight)")
                ->check(CLI::ExistingFile);
  auto* b = cmd->add_flag("--boltzmann", a.boltzmann, "Compute Boltzmann adjacency weights");
  w->excludes(b);
  b->excludes(w);
  cmd->add_option("--alpha", a.alpha, "Weight of the adjacency term, a decimal or p/q in [0,1]")
      ->capture_default_str();
  cmd->add_option("--threshold", c.threshold, "Keep an adjacency at a node iff its weight >= threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--kt", c.kt, "Boltzmann temperature kT")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--cap", c.explosion_cap, "Largest DP work estimate before switching to branch-and-bound")
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--out", c.out_dir, "Output directory")->required();
  cmd->add_flag("--no-ilp", a.no_ilp, "Fail with exit code 2 instead of using branch-and-bound");
  cmd->add_option("--route", a.route, "Solver for every component")
      ->check(CLI::IsMember({"auto", "dp", "ilp"}))
      ->capture_default_str();
  cmd->add_option("--lp-dir", c.lp_dir, "Write the LP model of every branch-and-bound component here");
}

wscj::cli::RunConfig finish(SolveArgs& a) {
  auto c = a.config;
  c.alpha = wscj::Alpha::parse(a.alpha);
  c.ilp_enabled = !a.no_ilp;
  c.route = a.route == "dp" ? wscj::cli::Route::kForceDp
            : a.route == "ilp" ? wscj::cli::Route::kForceIlp
                               : wscj::cli::Route::kAuto;
  if (!a.weights.empty()) {
    c.weight_source = wscj::cli::WeightSource::kFile;
    c.weights_path = a.weights;
  } else if (a.boltzmann) {
    c.weight_source = wscj::cli::WeightSource::kBoltzmann;
  }
  return c;
}

void print_report(const wscj::cli::SolveReport& r, const wscj::cli::RunConfig& c) {
  std::size_t n_dp = 0;
  for (const auto& comp : r.components) n_dp += comp.solver == wscj::cli::Solver::kDp ? 1 : 0;
  std::cout << "objective\t" << r.objective.value << "\n"
            << "scj_changes\t" << r.objective.scj_changes << "\n"
            << "discarded_weight\t" << wscj::to_real(r.objective.discarded) << "\n"
            << "components\t" << r.components.size() << " (dp " << n_dp << ", branch-and-bound "
            << r.components.size() - n_dp << ")\n"
            << "N/M/D\t" << r.n_markers << "/" << r.max_component << "/" << r.max_degree << "\n"
            << "cooptimal\t" << (r.cooptimal ? r.cooptimal->str() : "NA") << "\n"
            << "output\t" << c.out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted SCJ ancestral gene order reconstruction"};
  app.set_version_flag("--version", std::string(wscj::kVersion));
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Reconstruct one optimal labeling");
  add_solve_options(solve, solve_args);
  solve->add_option("--samples", solve_args.config.n_samples, "Co-optimal samples to draw")->capture_default_str();

  SolveArgs sample_args;
  sample_args.config.n_samples = 500;
  auto* sample = app.add_subcommand("sample", "Reconstruct and sample co-optimal labelings");
  add_solve_options(sample, sample_args);
  sample->add_option("--samples", sample_args.config.n_samples, "Co-optimal samples to draw")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  wscj::cli::WeighConfig weigh_config;
  auto* weigh = app.add_subcommand("weigh", "Write Boltzmann adjacency weights");
  weigh->add_option("--tree", weigh_config.tree_path, "Newick tree")->required()->check(CLI::ExistingFile);
  weigh->add_option("--genomes", weigh_config.genomes_path, "Leaf genome TSV")->required()->check(CLI::ExistingFile);
  weigh->add_option("--kt", weigh_config.kt, "Boltzmann temperature kT")->capture_default_str();
  weigh->add_option("--threads", weigh_config.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  weigh->add_option("--out", weigh_config.out_path, "Weight TSV to write")->required();

  wscj::cli::SimulateConfig sim_config;
  auto* simulate = app.add_subcommand("simulate", "Simulate trees and genomes under inversions and translocations");
  simulate->add_option("--markers", sim_config.sim.n_markers, "Markers in the root genome")->capture_default_str();
  simulate->add_option("--leaves", sim_config.sim.n_leaves, "Leaves per tree")->capture_default_str();
  simulate->add_option("--birth", sim_config.sim.birth_rate, "Birth rate")->capture_default_str();
  simulate->add_option("--death", sim_config.sim.death_rate, "Death rate")->capture_default_str();
  simulate->add_option("--diameter", sim_config.sim.diameter_factor, "Tree diameter in units of the marker count")
      ->capture_default_str();
  simulate->add_option("--p-inversion", sim_config.sim.p_inversion, "Probability that an event is an inversion")
      ->capture_default_str();
  simulate->add_option("--seed", sim_config.sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--replicates", sim_config.replicates, "Number of replicates")->capture_default_str();
  simulate->add_option("--threads", sim_config.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--out", sim_config.out_dir, "Output directory")->required();

  wscj::cli::EvaluateConfig eval_config;
  auto* evaluate = app.add_subcommand("evaluate", "Score reconstructed ancestors against the true ones");
  evaluate->add_option("--tree", eval_config.tree_path, "Newick tree")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", eval_config.truth_path, "Genome TSV with every node")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--predicted", eval_config.predicted_path, "ancestors.tsv of a solve run")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval_config.out_path, "Metrics TSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve || *sample) {
      auto& args = *solve ? solve_args : sample_args;
      const auto config = finish(args);
      const auto report = wscj::cli::run_solve(config);
      print_report(report, config);
    } else if (*weigh) {
      wscj::cli::run_weigh(weigh_config);
    } else if (*simulate) {
      wscj::cli::run_simulate(sim_config);
    } else if (*evaluate) {
      const auto eval = wscj::cli::run_evaluate(eval_config);
      std::cout << "sensitivity\t" << eval.pooled.sensitivity << "\nprecision\t" << eval.pooled.precision
                << "\nf1\t" << eval.pooled.f1 << "\n";
    }
  } catch (const wscj::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const wscj::CapacityExceeded& e) {
    std::cerr << "capacity exceeded: " << e.what() << '\n';
    return 2;
  } catch (const wscj::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
