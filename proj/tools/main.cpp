#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace wtensor::cli;

namespace {

void add_source(CLI::App* cmd, SourceOptions& s) {
  cmd->add_option("--input", s.input, "Tensor JSON file");
  cmd->add_option("--hypergraph", s.hypergraph, "Hypergraph edge-list file");
  cmd->add_option("--gen", s.gen, "Generator spec, e.g. hyperstar:m=4,k=10 or example31:n=16");
  cmd->add_flag("--laplacian", s.laplacian, "Use the Laplacian of a hypergraph source");
  cmd->add_flag("--signless", s.signless, "Use the signless Laplacian of a hypergraph source");
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 1; i < argc; ++i) out += (i > 1 ? " " : "") + std::string(argv[i]);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Largest H-eigenvalues of W-tensors and copositivity of extended Z-tensors"};
  app.require_subcommand(1);

  MaxEigOptions me;
  auto* max_eig = app.add_subcommand("max-eig", "Largest H-eigenvalue of an even-order tensor");
  add_source(max_eig, me.source);
  max_eig->add_option("--method", me.method)
      ->check(CLI::IsMember({"auto", "full", "block", "closed-form", "nqz", "ascent"}))
      ->capture_default_str();
  max_eig->add_option("--tol", me.tol, "SDP tolerance")->capture_default_str();
  max_eig->add_option("--max-iter", me.max_iter, "SDP iteration limit")->capture_default_str();
  max_eig->add_option("--decomposition", me.decomposition, "W-decomposition JSON file");
  max_eig->add_option("--certificate", me.certificate, "Write the SOS certificate here");
  max_eig->add_option("--report", me.report, "Write the run report here");
  max_eig->add_option("--dump-sdp", me.dump_sdp, "Write the compiled SDP in plain text");
  max_eig->add_option("--starts", me.starts, "Ascent start count")->capture_default_str();
  max_eig->add_option("--seed", me.seed, "Ascent seed")->capture_default_str();
  max_eig->add_flag("--json", me.json, "Print the report as JSON");
  max_eig->add_flag("--timings", me.timings, "Include wall-clock phase timings");
  max_eig->add_flag("--verbose", me.verbose, "Print solver iterations to stderr");

  CopositiveOptions co;
  auto* copos = app.add_subcommand("copositive", "Copositivity test for extended Z-tensors");
  add_source(copos, co.source);
  copos->add_option("--method", co.method)->check(CLI::IsMember({"block", "closed-form"}))->capture_default_str();
  copos->add_option("--tol", co.tol, "SDP tolerance")->capture_default_str();
  copos->add_option("--certificate", co.certificate, "Write the SOS certificate here");
  copos->add_option("--report", co.report, "Write the verdict report here");
  copos->add_flag("--json", co.json, "Print the verdict as JSON");
  copos->add_flag("--timings", co.timings, "Include wall-clock phase timings");

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "Generate a test instance");
  gen->add_option("kind", go.kind)
      ->required()
      ->check(CLI::IsMember({"hyperstar", "hyperpath", "hypertree", "example31", "randomz"}));
  gen->add_option("--m", go.m, "Order / uniformity")->capture_default_str();
  gen->add_option("--k", go.k, "Edges (star, path) or block size (randomz)")->capture_default_str();
  gen->add_option("--n", go.n, "Dimension (example31, randomz) or tree vertices (hypertree)");
  gen->add_option("--s", go.s, "Number of blocks (randomz)");
  gen->add_option("--M", go.M, "Diagonal value (randomz)");
  gen->add_option("--seed", go.seed)->capture_default_str();
  gen->add_option("--tree", go.tree, "Tree edges for hypertree, e.g. 1-2;2-3");
  gen->add_option("--tensor", go.tensor, "Tensor written for hypergraphs")
      ->check(CLI::IsMember({"adjacency", "laplacian", "signless"}))
      ->capture_default_str();
  gen->add_option("--out", go.out, "Tensor JSON output file");
  gen->add_option("--edges", go.edges, "Edge-list output file");
  gen->add_option("--decomposition", go.decomposition, "W-decomposition output file (hypergraph Laplacians)");

  TableOptions to;
  auto* table = app.add_subcommand("table", "Reproduce a results table at desk scale");
  table->add_option("which", to.which, "Table number 1-4")->required()->check(CLI::Range(1, 4));
  table->add_option("--scale", to.scale, "Multiplier on the default size caps")->capture_default_str();
  table->add_option("--max-n", to.max_n, "Largest n (table 1)");
  table->add_option("--max-k", to.max_k, "Largest k (tables 2 and 3)");
  table->add_option("--m", to.m, "Order (tables 2-4)");
  table->add_option("--s", to.s, "Blocks (table 4)")->capture_default_str();
  table->add_option("--k", to.k, "Block size (table 4)")->capture_default_str();
  table->add_option("--trials", to.trials, "Trials per M (table 4)");
  table->add_option("--M-grid", to.grid, "Diagonal values (table 4)")->capture_default_str();
  table->add_option("--seed", to.seed, "First seed (table 4)")->capture_default_str();
  table->add_option("--csv", to.csv, "Also write the rows as CSV");
  table->add_flag("--timings", to.timings, "Add timing columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kFailure;
  }

  const std::string echo = join_args(argc, argv);
  try {
    if (*max_eig) return cmd_max_eig(me, echo);
    if (*copos) return cmd_copositive(co, echo);
    if (*gen) return cmd_gen(go);
    return cmd_table(to);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
