#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aquachain/commands.hpp"

namespace {

struct Invocation {
  std::string scenario;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  std::string param;
  std::vector<double> values;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help,
                      Invocation& inv) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("scenario", inv.scenario, "Scenario JSON file")->required();
  sub->add_option("--out-dir", inv.out_dir, "Directory for relative output paths");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chain-based aggregative routing simulator for underwater sensor networks"};
  app.require_subcommand(1);
  Invocation inv;

  auto* run = add_command(app, "run", "Run one simulation and write rounds CSV + summary JSON", inv);
  run->add_option("--seeds", inv.seeds, "Override the scenario seed")->expected(1);

  auto* trace = add_command(app, "trace", "Like run, plus a per-round chain/leader trace", inv);
  trace->add_option("--seeds", inv.seeds, "Override the scenario seed")->expected(1);

  auto* compare =
      add_command(app, "compare", "Parametric vs greedy baseline over one or more seeds", inv);
  compare->add_option("--seeds", inv.seeds, "Seeds to run (default: scenario seed)")
      ->delimiter(',');

  auto* sweep = add_command(app, "sweep", "One run per value of a numeric parameter", inv);
  sweep->add_option("--seeds", inv.seeds, "Override the scenario seed")->expected(1);
  sweep->add_option("--param", inv.param, "Parameter to sweep")->required();
  sweep->add_option("--values", inv.values, "Values to sweep")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? aquachain::kExitOk : aquachain::kExitUsage;
  }

  aquachain::CommandOptions opts;
  opts.seeds = inv.seeds;
  opts.out_dir = inv.out_dir;
  opts.param = inv.param;
  opts.values = inv.values;

  if (run->parsed()) return aquachain::cmd_run(inv.scenario, opts, std::cerr);
  if (trace->parsed()) return aquachain::cmd_trace(inv.scenario, opts, std::cerr);
  if (compare->parsed()) return aquachain::cmd_compare(inv.scenario, opts, std::cerr);
  return aquachain::cmd_sweep(inv.scenario, opts, std::cerr);
}
