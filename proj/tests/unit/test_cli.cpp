#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "builders.hpp"
#include "oracles.hpp"
#include "wscj/cli/commands.hpp"
#include "wscj/cli/genome_io.hpp"
#include "wscj/cli/newick.hpp"
#include "wscj/cli/run.hpp"
#include "wscj/core/errors.hpp"
#include "wscj/weights/fitch.hpp"
#include "wscj/weights/weight_io.hpp"

namespace wscj {
namespace {

namespace fs = std::filesystem;
using testing::A;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Every regular file under `dir` by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
  }
  return out;
}

std::vector<cli::NamedGenome> parse(const std::string& text) {
  std::istringstream in(text);
  return cli::parse_genomes(in);
}

TEST(Newick, Examples) {
  const auto two = cli::parse_newick("(A,B);");
  EXPECT_EQ(two.size(), 3u);
  EXPECT_EQ(two.leaves().size(), 2u);
  EXPECT_EQ(two.name(two.root()), "anc1");

  const auto named = cli::parse_newick("((A,B)X,(C,D)Y)Z;");
  EXPECT_EQ(named.name(named.root()), "Z");
  EXPECT_TRUE(named.find("X"));
  EXPECT_TRUE(named.find("Y"));

  const auto multi = cli::parse_newick("((A,B),C,D);");
  EXPECT_EQ(multi.children(multi.root()).size(), 3u);

  const auto lengths = cli::parse_newick("((A:1.5,B:2)X:0.5,C:3);");
  EXPECT_DOUBLE_EQ(lengths.node(*lengths.find("A")).branch_length, 1.5);
  EXPECT_DOUBLE_EQ(lengths.node(*lengths.find("X")).branch_length, 0.5);
  // Post-order ids: children before parents.
  for (NodeId v : lengths.post_order()) {
    if (lengths.parent(v) != kNoNode) {
      EXPECT_LT(v, lengths.parent(v));
    }
  }
}

TEST(Newick, AutomaticNamesSkipTakenOnes) {
  const auto t = cli::parse_newick("((A,B),(C,anc1));");
  EXPECT_EQ(t.find("anc1").value(), *t.find("anc1"));
  EXPECT_TRUE(t.is_leaf(*t.find("anc1")));
  EXPECT_TRUE(t.find("anc2"));
  EXPECT_TRUE(t.find("anc3"));
  EXPECT_TRUE(t.find("anc4"));
}

TEST(Newick, RoundTrip) {
  const auto t = cli::parse_newick("((A:1,B:2)X:0.5,(C:1,D:1,E:4)Y:2)Z;");
  const auto again = cli::parse_newick(cli::write_newick(t));
  ASSERT_EQ(again.size(), t.size());
  for (NodeId v = 0; v < static_cast<NodeId>(t.size()); ++v) {
    EXPECT_EQ(again.name(v), t.name(v));
    EXPECT_EQ(again.parent(v), t.parent(v));
    EXPECT_DOUBLE_EQ(again.node(v).branch_length, t.node(v).branch_length);
  }
}

TEST(Newick, RejectsMalformedText) {
  for (const char* bad : {"(A,B)", "(A,B;", "((A,B);", "(A,,B);", "(A,B);x", "(A,A);", "(A:x,B);", ""}) {
    EXPECT_THROW(cli::parse_newick(bad), InputError) << bad;
  }
}

TEST(Genomes, Examples) {
  const auto u = make_universe_range(3);
  const auto lin = parse("A\tL\t1 2 3\n");
  EXPECT_EQ(cli::genome_adjacencies(lin[0], u), testing::set_of({A("1h", "2t"), A("2h", "3t")}, u));
  const auto inv = parse("A\tL\t1 -2 3\n");
  EXPECT_EQ(cli::genome_adjacencies(inv[0], u), testing::set_of({A("1h", "2h"), A("2t", "3t")}, u));
  const auto minus = parse("A\tL\t1 −2 3\n");
  EXPECT_EQ(cli::genome_adjacencies(minus[0], u), cli::genome_adjacencies(inv[0], u));
  const auto u2 = make_universe_range(2);
  const auto circ = parse("A\tC\t1 2\n");
  EXPECT_EQ(cli::genome_adjacencies(circ[0], u2), testing::set_of({A("1h", "2t"), A("2h", "1t")}, u2));
}

TEST(Genomes, MultiChromosomeOrderAndMarkers) {
  const auto g = parse("B\tL\t3\nA\tL\t2 1\nB\tL\t1 2\nA\tL\t3\n");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].name, "B");
  EXPECT_EQ(g[1].name, "A");
  EXPECT_EQ(g[0].chromosomes.size(), 2u);
  auto markers = cli::genome_markers(g[1]);
  std::sort(markers.begin(), markers.end());
  EXPECT_EQ(markers, (std::vector<int>{1, 2, 3}));
}

TEST(Genomes, RejectsBadInput) {
  for (const char* bad : {"A\tX\t1 2\n", "A\tL\t1 1\n", "A\tL\t1 0\n", "A\tL\t1 x\n", "A\tL\n",
                          "A\tL\t1 2\nB\tL\t1 3\n", "A\tC\t1\n"}) {
    EXPECT_THROW(parse(bad), InputError) << bad;
  }
}

TEST(BuildPhylogeny, LeafChecks) {
  const auto tree = cli::parse_newick("((A,B)X,C)R;");
  EXPECT_THROW(cli::build_phylogeny(tree, parse("A\tL\t1 2\nB\tL\t1 2\n")), InputError);
  EXPECT_THROW(cli::build_phylogeny(tree, parse("A\tL\t1 2\nB\tL\t1 2\nC\tL\t2 1\nQ\tL\t1 2\n")), InputError);
  const auto p = cli::build_phylogeny(tree, parse("A\tL\t1 2\nB\tL\t1 2\nC\tL\t2 1\nX\tL\t2 1\n"));
  EXPECT_EQ(p.universe()->size(), 2u);
}

cli::RunConfig base_config() {
  cli::RunConfig c;
  c.explosion_cap = std::numeric_limits<std::uint64_t>::max() / 2;
  return c;
}

TEST(SolveInstance, AlphaZeroEqualsFitch) {
  Rng rng(derive_seed(801, 0));
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = testing::random_instance(rng);
    const auto r = cli::solve_instance(inst.phylogeny, WeightTable{}, base_config());
    const auto fitch = weights::fitch_scj_labeling(inst.phylogeny);
    EXPECT_EQ(r.objective.scj_changes, fitch.total_changes);
    EXPECT_EQ(r.objective.cost, Alpha(0, 1).cost(fitch.total_changes, 0));
  }
}

TEST(SolveInstance, IdenticalLeavesCostNothing) {
  const auto phylo = testing::make_phylogeny("((P,Q),(S,T));", "P\tL\t1 2 3\nP\tL\t4 5\nQ\tL\t1 2 3\nQ\tL\t4 5\n"
                                                              "S\tL\t1 2 3\nS\tL\t4 5\nT\tL\t1 2 3\nT\tL\t4 5\n");
  const auto r = cli::solve_instance(phylo, WeightTable{}, base_config());
  EXPECT_EQ(r.objective.cost, 0);
  EXPECT_EQ(*r.cooptimal, 1);
  for (NodeId v : phylo.tree().internal_nodes()) {
    EXPECT_EQ(extract_cars(r.labeling[static_cast<std::size_t>(v)]).size(), 2u);
  }
}

TEST(SolveInstance, RoutesAgree) {
  Rng rng(derive_seed(802, 0));
  const std::vector<Alpha> grid{Alpha(0, 1), Alpha(1, 3), Alpha(1, 2), Alpha(9, 10), Alpha(1, 1)};
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = testing::random_instance(rng);
    auto c = base_config();
    c.alpha = grid[static_cast<std::size_t>(trial) % grid.size()];
    c.threshold = trial % 2 ? 0.3 : 0.0;
    c.route = cli::Route::kForceDp;
    const auto dp = cli::solve_instance(inst.phylogeny, inst.weights, c);
    c.route = cli::Route::kForceIlp;
    const auto bb = cli::solve_instance(inst.phylogeny, inst.weights, c);
    EXPECT_EQ(dp.objective.cost, bb.objective.cost);
    if (!bb.components.empty()) {
      EXPECT_FALSE(bb.cooptimal.has_value());
    }
    for (const auto& comp : bb.components) EXPECT_EQ(comp.solver, cli::Solver::kIlp);
  }
}

TEST(SolveInstance, ThresholdIsAFullDefinitionObjective) {
  // The reported objective covers weights pruned by the threshold too.
  Rng rng(derive_seed(803, 0));
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::random_instance(rng);
    auto c = base_config();
    c.alpha = Alpha(1, 2);
    c.threshold = 0.5;
    const auto r = cli::solve_instance(inst.phylogeny, inst.weights, c);
    EXPECT_EQ(r.objective.cost, labeling_objective(inst.phylogeny, r.labeling, inst.weights, c.alpha).cost);
    const testing::BruteLabeling brute(inst.phylogeny, inst.weights, c.alpha, quantize_weight(0.5));
    EXPECT_EQ(r.objective.cost, brute.tree_optimum().cost);
    EXPECT_EQ(*r.cooptimal, brute.tree_optimum().count);
  }
}

TEST(SolveInstance, SampleCountsAreConsistent) {
  const auto phylo = testing::make_phylogeny("((P,Q),(S,T));", testing::genome_text({{"P", "L", "1 2 3"}, {"Q", "L", "1 3 2"}, {"S", "L", "2 1 3"}, {"T", "L", "3 2 1"}}));
  auto c = base_config();
  c.n_samples = 200;
  c.seed = 5;
  const auto r = cli::solve_instance(phylo, WeightTable{}, c);
  ASSERT_EQ(r.samples.size(), 200u);
  std::map<std::pair<NodeId, Adjacency>, std::uint64_t> counts;
  for (const auto& s : r.samples) {
    EXPECT_EQ(labeling_objective(phylo, s, WeightTable{}, c.alpha).cost, r.objective.cost);
    for (NodeId v : phylo.tree().internal_nodes()) {
      for (const auto& a : s[static_cast<std::size_t>(v)]) ++counts[{v, a}];
    }
  }
  EXPECT_EQ(counts, r.sample_counts);
}

TEST(SolveInstance, CapacityWithoutIlpThrows) {
  const auto phylo = testing::make_phylogeny("(P,Q,S)R;", testing::genome_text({{"P", "L", "1 2 3"}, {"Q", "L", "1 3 2"}, {"S", "L", "2 1 3"}}));
  auto c = base_config();
  c.explosion_cap = 1;
  c.ilp_enabled = false;
  EXPECT_THROW(cli::solve_instance(phylo, WeightTable{}, c), CapacityExceeded);
  c.ilp_enabled = true;
  const auto r = cli::solve_instance(phylo, WeightTable{}, c);
  EXPECT_TRUE(std::any_of(r.components.begin(), r.components.end(), [](const auto& x) { return x.solver == cli::Solver::kIlp; }));
  c.route = cli::Route::kForceIlp;
  c.ilp_enabled = false;
  EXPECT_THROW(c.validate(), InputError);
}

struct Files {
  fs::path dir;
  fs::path tree;
  fs::path genomes;
};

Files write_inputs(const std::string& name) {
  Files f{testing::scratch_dir(name), {}, {}};
  f.tree = f.dir / "tree.nwk";
  f.genomes = f.dir / "genomes.tsv";
  spit(f.tree, "(((P,Q)X,S)Y,(T,U)Z)R;\n");
  spit(f.genomes, "P\tL\t1 2 3 4 5 6\nQ\tL\t1 -3 -2 4 5 6\nS\tL\t1 2 3 -5 -4 6\n"
                  "T\tL\t1 2 -4 -3 5 6\nU\tL\t2 1 3 4 5 6\n");
  return f;
}

cli::RunConfig file_config(const Files& f, const std::string& out) {
  auto c = base_config();
  c.tree_path = f.tree;
  c.genomes_path = f.genomes;
  c.out_dir = f.dir / out;
  return c;
}

TEST(RunSolve, WritesOutputsAndNoFrequenciesWithoutSamples) {
  const auto f = write_inputs("run_outputs");
  auto c = file_config(f, "plain");
  c.alpha = Alpha(1, 2);
  c.weight_source = cli::WeightSource::kBoltzmann;
  const auto r = cli::run_solve(c);
  for (const char* name : {"ancestors.tsv", "stats.tsv", "summary.tsv", "components.tsv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(c.out_dir / name)) << name;
  }
  EXPECT_FALSE(fs::exists(c.out_dir / "frequencies.tsv"));
  EXPECT_FALSE(fs::exists(c.out_dir / "samples.tsv"));

  // One stats row per internal node after the header.
  const auto stats = slurp(c.out_dir / "stats.tsv");
  EXPECT_EQ(std::count(stats.begin(), stats.end(), '\n'), 5);
  EXPECT_NE(slurp(c.out_dir / "summary.tsv").find("objective_scaled\t" + std::to_string(r.objective.cost) + "\n"),
            std::string::npos);

  // ancestors.tsv names every internal node and reads back as the labeling.
  const auto tree = cli::load_tree(f.tree);
  auto ancestors = cli::load_genomes(c.out_dir / "ancestors.tsv");
  const auto leaves = cli::load_genomes(f.genomes);
  ancestors.insert(ancestors.end(), leaves.begin(), leaves.end());
  const auto phylo = cli::build_phylogeny(tree, leaves);
  EXPECT_EQ(cli::labeling_from_genomes(tree, ancestors, phylo.universe()), r.labeling);

  c.out_dir = f.dir / "sampled";
  c.n_samples = 50;
  cli::run_solve(c);
  const auto freq = slurp(c.out_dir / "frequencies.tsv");
  EXPECT_EQ(freq.rfind("node\textremity_a\textremity_b\tcount\tfrequency\n", 0), 0u);
  EXPECT_TRUE(fs::exists(c.out_dir / "samples.tsv"));
}

TEST(RunSolve, ByteIdenticalAcrossRunsAndThreads) {
  const auto f = write_inputs("run_determinism");
  std::optional<std::map<std::string, std::string>> first;
  for (unsigned threads : {1u, 4u}) {
    for (int rep = 0; rep < 2; ++rep) {
      auto c = file_config(f, "out_" + std::to_string(threads) + "_" + std::to_string(rep));
      c.alpha = Alpha(4, 5);
      c.weight_source = cli::WeightSource::kBoltzmann;
      c.n_samples = 20;
      c.seed = 11;
      c.threads = threads;
      cli::run_solve(c);
      const auto snap = snapshot(c.out_dir);
      if (!first) {
        first = snap;
      } else {
        EXPECT_EQ(snap, *first);
      }
    }
  }
}

TEST(RunSolve, WeightFileMatchesBoltzmannSource) {
  const auto f = write_inputs("run_weights");
  cli::WeighConfig wc{f.tree, f.genomes, f.dir / "w.tsv", 0.1, 2};
  cli::run_weigh(wc);
  auto c = file_config(f, "from_file");
  c.alpha = Alpha(1, 2);
  c.weight_source = cli::WeightSource::kFile;
  c.weights_path = wc.out_path;
  const auto from_file = cli::run_solve(c);
  c.out_dir = f.dir / "from_boltzmann";
  c.weight_source = cli::WeightSource::kBoltzmann;
  c.weights_path.clear();
  const auto direct = cli::run_solve(c);
  EXPECT_EQ(from_file.objective.cost, direct.objective.cost);
  EXPECT_EQ(slurp(f.dir / "from_file" / "ancestors.tsv"), slurp(f.dir / "from_boltzmann" / "ancestors.tsv"));
}

TEST(Simulate, ReplicatesAndEvaluate) {
  const auto dir = testing::scratch_dir("simulate");
  cli::SimulateConfig sc;
  sc.sim.n_markers = 20;
  sc.replicates = 2;
  sc.out_dir = dir / "sim";
  cli::run_simulate(sc);
  EXPECT_TRUE(fs::exists(sc.out_dir / "simulations.tsv"));
  const auto rep = sc.out_dir / "rep_001";
  for (const char* name : {"tree.nwk", "genomes.tsv", "truth.tsv", "events.tsv"}) EXPECT_TRUE(fs::exists(rep / name)) << name;
  EXPECT_TRUE(fs::exists(sc.out_dir / "rep_002"));

  // The truth scored against itself is perfect.
  cli::EvaluateConfig ec{rep / "tree.nwk", rep / "truth.tsv", rep / "truth.tsv", dir / "self.tsv"};
  const auto self = cli::run_evaluate(ec);
  EXPECT_EQ(self.pooled.precision, 1.0);
  EXPECT_EQ(self.pooled.sensitivity, 1.0);

  cli::RunConfig rc = base_config();
  rc.tree_path = rep / "tree.nwk";
  rc.genomes_path = rep / "genomes.tsv";
  rc.out_dir = dir / "solve";
  cli::run_solve(rc);
  ec.predicted_path = rc.out_dir / "ancestors.tsv";
  ec.out_path = dir / "metrics.tsv";
  const auto e = cli::run_evaluate(ec);
  EXPECT_GT(e.pooled.precision, 0.5);
  EXPECT_TRUE(fs::exists(ec.out_path));

  // Same seed, same bytes.
  sc.out_dir = dir / "sim_again";
  cli::run_simulate(sc);
  EXPECT_EQ(snapshot(dir / "sim"), snapshot(dir / "sim_again"));
}

#ifdef WSCJ_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + WSCJ_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Tool, ExitCodes) {
  const auto f = write_inputs("tool");
  const std::string io = "--tree " + f.tree.string() + " --genomes " + f.genomes.string();
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("solve " + io + " --out " + (f.dir / "ok").string()), 0);
  EXPECT_TRUE(fs::exists(f.dir / "ok" / "ancestors.tsv"));
  EXPECT_EQ(run_cli("sample " + io + " --samples 5 --out " + (f.dir / "s").string()), 0);
  EXPECT_TRUE(fs::exists(f.dir / "s" / "frequencies.tsv"));
  EXPECT_EQ(run_cli("solve " + io + " --alpha 2 --out " + (f.dir / "bad").string()), 1);
  EXPECT_EQ(run_cli("solve --tree /nonexistent " + io.substr(io.find("--genomes")) + " --out x"), 1);
  spit(f.dir / "broken.tsv", "P\tL\t1 1\n");
  EXPECT_EQ(run_cli("solve --tree " + f.tree.string() + " --genomes " + (f.dir / "broken.tsv").string() + " --out " +
                    (f.dir / "b").string()),
            1);
  EXPECT_EQ(run_cli("solve " + io + " --cap 1 --no-ilp --out " + (f.dir / "cap").string()), 2);
  EXPECT_EQ(run_cli("solve " + io + " --cap 1 --out " + (f.dir / "capilp").string()), 0);
  EXPECT_EQ(run_cli("weigh " + io + " --out " + (f.dir / "w.tsv").string()), 0);
  EXPECT_EQ(run_cli("simulate --markers 10 --replicates 1 --out " + (f.dir / "sim").string()), 0);
}
#endif

}  // namespace
}  // namespace wscj
