#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plalam::cli {

struct TheoryOptions {
  std::string out_dir;
  int runs = 20;           // simulations per horizon / experiment
  int t_max = 10000;       // largest horizon in the slope grid
  std::uint64_t seed = 0;  // master seed, fully deterministic output
  double eta = 0.05;       // bandit confidence budget
};

// Runs the analytical-bandit experiment suite and writes
//   bandit_trace.csv     per-step rows (T,run,region,n_k,g_t,R) of a
//                        two-region reference bandit
//   theory_summary.json  confidence-radius coverage grid, tail-bound grid
//                        violation count, regret slopes for d = 2 and 4, and
//                        the split-vs-unsplit regret comparison
// Returns the written paths.
std::vector<std::string> run_theory(const TheoryOptions& opts);

}  // namespace plalam::cli
