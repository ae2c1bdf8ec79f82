#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mpmd/harness.hpp"

int main(int argc, char** argv) {
  using namespace mpmd::harness;
  CLI::App app{"Online min-cost perfect matching with set delay"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file and verify the result");
  solve_cmd->add_option("--instance", solve.instance, "Instance JSON")->required();
  solve_cmd->add_option("--algo", solve.algo, "nonclairvoyant or concave")->required();
  solve_cmd->add_option("--out", solve.out, "Solution JSON to write")->required();

  std::string ratio_config;
  std::string ratio_out;
  auto* ratio_cmd = app.add_subcommand("ratio", "Run a competitive-ratio sweep");
  ratio_cmd->add_option("--config", ratio_config, "Sweep config JSON")->required();
  ratio_cmd->add_option("--out", ratio_out, "CSV to write")->required();

  AdversaryOptions adv;
  std::string transcript;
  std::string adv_out;
  auto* adv_cmd = app.add_subcommand("adversary", "Run a lower-bound adversary against an algorithm");
  adv_cmd->add_option("--kind", adv.kind, "four_point, det_phase or rand_phase")->required();
  adv_cmd->add_option("--n", adv.n, "Points of the uniform metric (phase adversaries)");
  adv_cmd->add_option("--D", adv.D, "Far distance (four_point)");
  adv_cmd->add_option("--eps", adv.eps, "Near distance (four_point)");
  adv_cmd->add_option("--algo", adv.algo, "nonclairvoyant or greedy");
  adv_cmd->add_option("--trials", adv.trials, "Number of runs");
  adv_cmd->add_option("--seed", adv.seed, "Global seed; run i uses splitmix64(seed + i)");
  adv_cmd->add_option("--transcript", transcript, "Write transcripts to this file");
  adv_cmd->add_option("--out", adv_out, "Write the summary CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*solve_cmd) return cmd_solve(solve, std::cerr);
  if (*ratio_cmd) return cmd_ratio(ratio_config, ratio_out, std::cerr);
  if (!transcript.empty()) adv.transcript = transcript;
  if (!adv_out.empty()) adv.out = adv_out;
  return cmd_adversary(adv, std::cout, std::cerr);
}
