#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plalam_cli/config.hpp"

namespace plalam::cli {

struct CellOutput {
  std::string method;
  std::uint64_t seed = 0;
  double best_value = 0.0;
  bool success = false;
  double wall_ms = 0.0;
  nlohmann::json document;  // persisted per-run JSON
};

struct SummaryRow {
  std::string method;
  std::string env;
  int n_seeds = 0;
  double mean_best = 0.0;
  double sem_best = 0.0;      // sample standard error across seeds
  double success_rate = 0.0;  // fraction of seeds the environment calls a success
  double sem_success = 0.0;   // binomial standard error sqrt(p(1-p)/n)
  double wall_ms = 0.0;       // mean per run; 0 unless record_timing
};

struct BatchResult {
  std::vector<CellOutput> cells;  // method-major, seed-minor (config order)
  std::vector<SummaryRow> rows;   // one per method
  std::vector<std::string> run_paths;
  std::string summary_path;
};

// One (method, seed) cell end to end: build the world, run the optimizer,
// assemble the run document. Seeding convention: SplitRng(seed); the first
// split builds the world, the second drives the optimizer.
CellOutput run_cell(const RunConfig& cfg, const std::string& method,
                    std::uint64_t seed);

// Executes every (method, seed) cell, jobs at a time (cells are fully
// isolated: own RNG, own world instance). Files are written and aggregated
// single-threaded afterwards in config order, so outputs are byte-identical
// for any jobs value. Throws on the first cell failure.
BatchResult run_batch(const RunConfig& cfg, int jobs = 1);

// Aggregate rows computed from finished cells, in config method order.
std::vector<SummaryRow> summarize(const RunConfig& cfg,
                                  const std::vector<CellOutput>& cells);

// CSV with a `# config_hash=` stamp line, a fixed header
// (method,env,n_seeds,mean_best,sem_best,success_rate,sem_success,wall_ms)
// and one row per method.
std::string summary_csv_text(const RunConfig& cfg,
                             const std::vector<SummaryRow>& rows);

// Runs cells[begin..end) over a pool of `jobs` threads, storing results by
// index. Shared by the batch and sweep drivers.
void run_cells_pooled(const std::vector<std::function<CellOutput()>>& cells,
                      std::vector<CellOutput>& out, int jobs);

}  // namespace plalam::cli
