// coneiter: run fixed-point experiments, regenerate the built-in examples,
// and probe spaces and operators.
//
//   coneiter run --config <path> --out <dir> [--svg] [--force]
//   coneiter example <ex1|ex2|ex3|ex4> --out <dir> [--svg]
//   coneiter check (--space <spec> | --op <spec> [--class qne|wc] | --pair <spec>)
//                  [--samples N] [--seed S] [--consts a,b,...]
//
// Exit codes: 0 ok, 1 config error, 2 precondition failure, 3 divergence,
// 4 probe/axiom violations.

#include <iostream>

#include "CLI11.hpp"

#include "coneiter/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-inertial fixed-point iteration laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  bool svg = false, force = false;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--svg", svg, "Also write an SVG chart");
  run->add_flag("--force", force, "Run even if theorem preconditions fail");

  std::string example_id;
  auto* example = app.add_subcommand("example", "Run a built-in example");
  example->add_option("id", example_id, "ex1 | ex2 | ex3 | ex4")->required();
  example->add_option("--out", out_dir, "Output directory");
  example->add_flag("--svg", svg, "Also write an SVG chart");

  coneiter::CheckRequest req;
  std::string space, op, pair, op_class;
  std::vector<double> consts;
  auto* check = app.add_subcommand("check", "Probe space axioms or operator conditions");
  auto* space_opt = check->add_option("--space", space, "scalar_p:<p> | r2_matrix:<a11>,<a12>,<a21>,<a22>");
  auto* op_opt = check->add_option("--op", op, "saturating | identity | linear:<q>");
  auto* pair_opt = check->add_option("--pair", pair, "S=<op>,T=<op> | S=T=<op>");
  auto* class_opt = check->add_option("--class", op_class, "qne | wc");
  auto* consts_opt = check->add_option("--consts", consts, "Class constants, comma separated")->delimiter(',');
  check->add_option("--samples", req.samples, "Sample count");
  check->add_option("--seed", req.seed, "RNG seed");
  op_opt->excludes(pair_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the config-error exit code.
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (run->parsed())
    return coneiter::cli_run(config_path, out_dir, {svg, force}, std::cout, std::cerr);
  if (example->parsed()) return coneiter::cli_example(example_id, out_dir, svg, std::cout, std::cerr);

  if (*space_opt) req.space = space;
  if (*op_opt) req.op = op;
  if (*pair_opt) req.pair = pair;
  if (*class_opt) req.op_class = op_class;
  if (*consts_opt) req.consts = consts;
  return coneiter::cli_check(req, std::cout, std::cerr);
}
