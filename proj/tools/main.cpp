#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "plalam_cli/batch.hpp"
#include "plalam_cli/config.hpp"
#include "plalam_cli/diagnose.hpp"
#include "plalam_cli/sweep.hpp"
#include "plalam_cli/theory_cmd.hpp"

namespace cli = plalam::cli;

namespace {

cli::RunConfig load_with_overrides(const std::string& config_path,
                                   const std::string& seeds_spec,
                                   const std::string& out_override) {
  cli::RunConfig cfg = cli::load_config(config_path);
  if (!seeds_spec.empty()) cfg.seeds = cli::parse_seed_spec(seeds_spec);
  if (!out_override.empty()) cfg.output_dir = out_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"black-box trajectory optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path, seeds_spec, out_override;
  int jobs = 1;

  auto add_config_flags = [&](CLI::App* sub, bool with_jobs) {
    sub->add_option("--config", config_path, "config file (key = value lines)")
        ->required();
    sub->add_option("--seeds", seeds_spec, "override seeds: \"1,2,3\" or \"start:count\"");
    sub->add_option("--out", out_override, "override output_dir");
    if (with_jobs)
      sub->add_option("--jobs", jobs, "parallel cells (default 1, bit-stable)");
  };

  CLI::App* run = app.add_subcommand("run", "execute all (method, seed) cells");
  add_config_flags(run, true);
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "partition quality and tail-mass reports");
  add_config_flags(diagnose, false);
  CLI::App* sweep = app.add_subcommand("sweep", "hyperparameter grid per method");
  add_config_flags(sweep, true);

  CLI::App* theory =
      app.add_subcommand("theory", "analytical bandit experiment suite");
  cli::TheoryOptions topts;
  theory->add_option("--out", topts.out_dir, "output directory")->required();
  theory->add_option("--runs", topts.runs, "simulations per horizon (default 20)");
  theory->add_option("--tmax", topts.t_max, "largest horizon (default 10000)");
  theory->add_option("--seed", topts.seed, "master seed (default 0)");
  theory->add_option("--eta", topts.eta, "confidence budget (default 0.05)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      cli::RunConfig cfg = load_with_overrides(config_path, seeds_spec, out_override);
      cli::BatchResult res = cli::run_batch(cfg, jobs);
      std::fputs(cli::summary_csv_text(cfg, res.rows).c_str(), stdout);
      std::fprintf(stdout, "wrote %zu run files and %s\n", res.run_paths.size(),
                   res.summary_path.c_str());
    } else if (diagnose->parsed()) {
      cli::RunConfig cfg = load_with_overrides(config_path, seeds_spec, out_override);
      cli::DiagnoseResult res = cli::run_diagnostics(cfg);
      for (const std::string& p : res.csv_paths)
        std::fprintf(stdout, "wrote %s\n", p.c_str());
    } else if (sweep->parsed()) {
      cli::RunConfig cfg = load_with_overrides(config_path, seeds_spec, out_override);
      cli::SweepResult res = cli::run_sweep(cfg, jobs);
      std::fprintf(stdout, "wrote %s and %s\n", res.csv_path.c_str(),
                   res.best_path.c_str());
    } else if (theory->parsed()) {
      for (const std::string& p : cli::run_theory(topts))
        std::fprintf(stdout, "wrote %s\n", p.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
