#pragma once

#include <string>
#include <vector>

#include "plalam_cli/config.hpp"

namespace plalam::cli {

struct DiagnoseResult {
  std::vector<std::string> csv_paths;
};

// Reads the persisted run documents of every tree method in the config
// (which must have been produced with save_artifacts = true and the same
// config hash) and writes, per method:
//   diagnostics_<method>.csv        one row per seed: learned-vs-random split
//                                   comparison (means and win fractions)
//   diagnostics_<method>_nodes.csv  the raw per-internal-node comparison rows
//   zk_<method>.csv                 tail-mass series, one row per
//                                   (seed, rebuild, scale)
// Random splits draw from SplitRng(seed) with 32 trials per node.
DiagnoseResult run_diagnostics(const RunConfig& cfg);

}  // namespace plalam::cli
