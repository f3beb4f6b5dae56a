#pragma once

#include <string>
#include <vector>

#include "plalam_cli/config.hpp"

namespace plalam::cli {

struct SweepRow {
  std::string method;
  std::string param;  // "cp" for the tree methods, "sigma" for the samplers
  double value = 0.0;
  int n_seeds = 0;
  double mean_best = 0.0;
  double sem_best = 0.0;
  double success_rate = 0.0;
  double sem_success = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string csv_path;   // sweep.csv, one row per (method, grid value)
  std::string best_path;  // sweep_best.json, winning value per method
};

// Hyperparameter grid per method over the config's seeds (intended as a
// dedicated tuning seed set): tree methods sweep cp over {0.5, 1, 2, 4},
// cem/cmaes sweep sigma over {1, 2, 4, 8}, random_shooting has nothing to
// tune and runs at the config sigma only. Winners maximize success rate,
// then mean best value, then take the earlier grid entry. No per-run files
// are written; the CSV is stamped with the base config hash.
SweepResult run_sweep(const RunConfig& cfg, int jobs = 1);

}  // namespace plalam::cli
