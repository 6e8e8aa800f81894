#include "spacefn/cli_ops.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace spacefn;

int main(int argc, char** argv) {
  CLI::App app{"machine surgeries, group presentation compilation and rewriting-space experiments"};
  app.require_subcommand(1);

  std::string config_path;
  uint64_t seed = 0;
  int jobs = 0;
  std::string metric, delta;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "seed for sampled suites");
    sub->add_option("--jobs", jobs, "parallel workers for independent rows");
    sub->add_option("--metric", metric, "comb|modified")
        ->check(CLI::IsMember({"comb", "modified"}));
    sub->add_option("--delta", delta, "tape-letter weight P/Q for the modified metric");
  };

  auto* build = app.add_subcommand("build", "run the staged machine pipeline");
  auto* compile = app.add_subcommand("compile", "compile a multiplied machine into a presentation");
  auto* space = app.add_subcommand("space", "measure the derivation space of one word");
  auto* table = app.add_subcommand("table", "tabulate proven spaces per word length");
  auto* verify = app.add_subcommand("verify", "replay a derivation move script");
  auto* fit = app.add_subcommand("fit", "least dominance constant between two tables");
  auto* check = app.add_subcommand("check", "validate a machine file");
  for (auto* sub : {build, compile, space, table, verify, fit, check}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = ExperimentConfig::load(config_path);
    if (seed) cfg.raw["seed"] = seed;
    if (jobs) cfg.raw["jobs"] = jobs;
    if (!metric.empty()) cfg.raw["metric"] = metric;
    if (!delta.empty()) cfg.raw["delta"] = delta;

    if (build->parsed()) return cmd_build(cfg, std::cout, std::cerr);
    if (compile->parsed()) return cmd_compile(cfg, std::cout, std::cerr);
    if (space->parsed()) return cmd_space(cfg, std::cout, std::cerr);
    if (table->parsed()) return cmd_table(cfg, std::cout, std::cerr);
    if (verify->parsed()) return cmd_verify(cfg, std::cout, std::cerr);
    if (fit->parsed()) return cmd_fit(cfg, std::cout, std::cerr);
    if (check->parsed()) return cmd_check(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
