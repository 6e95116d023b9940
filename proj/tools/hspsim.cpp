/*
 * hspsim — exact simulator and algebraic verifier for the quantum
 * hidden-subgroup subroutine over pluggable scalar semirings.
 *
 *   hspsim laws       --config inst.json [--semiring S] [--tol T]
 *   hspsim dist       --config inst.json [--state-vector] [--seed N]
 *   hspsim run        --config inst.json [--seed N] [--out transcript.jsonl]
 *   hspsim simon      --n N [--z BITS|random] [--seed N]
 *   hspsim nonabelian --config inst.json [--tol T]
 *
 * JSON results go to stdout, human summaries to stderr.  Exit codes:
 * 0 success, 1 configuration problem, 2 law/agreement/recovery failure,
 * 3 semiring limitation, 4 promise violation.
 */
#include <iostream>

#include "CLI11.hpp"
#include "hsp/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Exact simulator and algebraic verifier for the quantum "
      "hidden-subgroup subroutine"};
  app.require_subcommand(1);

  hsp::CliOptions opts;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("-c,--config", opts.config_path,
                      "instance description (JSON)")
          ->required();
    sub->add_option("--semiring", opts.semiring_override,
                    "scalar semiring: complex, real, or boolean")
        ->check(CLI::IsMember({"complex", "real", "boolean"}));
    sub->add_option("--seed", opts.seed_override, "sampling seed");
    sub->add_option("--tol", opts.tol, "numeric tolerance")
        ->capture_default_str();
  };

  CLI::App* laws = app.add_subcommand(
      "laws", "check the Frobenius and strong-complementarity laws");
  add_common(laws, true);

  CLI::App* dist = app.add_subcommand(
      "dist", "exact outcome distribution against the closed form");
  add_common(dist, true);
  dist->add_flag("--state-vector", opts.state_vector,
                 "use the state-vector route instead of the tensor diagram");

  CLI::App* run = app.add_subcommand(
      "run", "sample until stable and reconstruct the hidden subgroup");
  add_common(run, true);
  run->add_option("--out", opts.out_path,
                  "also write the transcript as JSON lines to this file");

  CLI::App* simon =
      app.add_subcommand("simon", "solve a hidden-bitmask instance end to end");
  add_common(simon, false);
  simon->add_option("--n", opts.simon_n, "word width in bits")->required();
  simon->add_option("--z", opts.simon_z,
                    "hidden word as a bit string, or \"random\"")
      ->capture_default_str();

  CLI::App* nonabelian = app.add_subcommand(
      "nonabelian", "isotypic measurement against a complete irrep set");
  add_common(nonabelian, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (const CLI::App* sub : app.get_subcommands())
    opts.command = sub->get_name();
  return hsp::run_command(opts, std::cout, std::cerr);
}
