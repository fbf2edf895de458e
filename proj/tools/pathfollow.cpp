// pathfollow run|check|sweep; see README for exit codes.

#include <CLI11.hpp>

#include <iostream>

#include "pathfollow/cli.hpp"

int main(int argc, char** argv) {
  namespace pc = pathfollow::cli;
  CLI::App app{"Curved-path following simulator for an underactuated vessel in a current"};
  app.require_subcommand(1);

  pc::Options opt;
  double dt = 0.0;
  double t_end = 0.0;
  std::string key;
  std::vector<std::string> values;

  auto common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("-c,--config", opt.config, "scenario YAML file")->required();
    sub->add_option("--set", opt.overrides, "dotted key=value override (repeatable)")
        ->take_all()
        ->allow_extra_args(false);
    sub->add_option("--dt", dt, "integration step [s]");
    sub->add_option("--t-end", t_end, "simulated duration [s]");
    if (with_out) sub->add_option("-o,--out", opt.out, "output directory")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "simulate one scenario, write log.csv and summaries");
  common(run, true);
  auto* check = app.add_subcommand("check", "print the feasibility report");
  common(check, false);
  auto* sweep = app.add_subcommand("sweep", "run one scenario per value of a key, in parallel");
  common(sweep, true);
  sweep->add_option("-k,--key", key, "dotted schema key to sweep")->required();
  sweep->add_option("-v,--values", values, "values to assign to the key");
  sweep->add_option("-j,--threads", opt.threads, "worker threads (0: OpenMP default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? pc::kOk : pc::kUsage;
  }

  const CLI::App* active = app.get_subcommands().front();
  pc::add_step_overrides(opt, active->count("--dt") ? &dt : nullptr,
                         active->count("--t-end") ? &t_end : nullptr);

  if (*run) return pc::cmd_run(opt, std::cout, std::cerr);
  if (*check) return pc::cmd_check(opt, std::cout, std::cerr);
  return pc::cmd_sweep(opt, key, values, std::cout, std::cerr);
}
