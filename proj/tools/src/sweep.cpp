#include "plalam_cli/sweep.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "plalam_cli/batch.hpp"
#include "plalam_cli/run_io.hpp"

#include "plalam/stats.hpp"

namespace plalam::cli {

namespace {

struct GridCell {
  std::string method;
  std::string param;
  double value = 0.0;
};

bool sweeps_cp(const std::string& method) {
  switch (parse_method(method)) {
    case Method::cem:
    case Method::cmaes:
    case Method::random_shooting:
      return false;
    default:
      return true;
  }
}

RunConfig with_param(RunConfig cfg, const GridCell& cell) {
  if (cell.param == "cp") cfg.cp = cell.value;
  else cfg.sigma = cell.value;
  return cfg;
}

}  // namespace

SweepResult run_sweep(const RunConfig& cfg, int jobs) {
  std::vector<GridCell> grid;
  for (const std::string& method : cfg.methods) {
    if (sweeps_cp(method)) {
      for (double v : {0.5, 1.0, 2.0, 4.0}) grid.push_back({method, "cp", v});
    } else if (parse_method(method) == Method::random_shooting) {
      grid.push_back({method, "sigma", cfg.sigma});
    } else {
      for (double v : {1.0, 2.0, 4.0, 8.0}) grid.push_back({method, "sigma", v});
    }
  }

  std::vector<std::function<CellOutput()>> cells;
  for (const GridCell& g : grid)
    for (std::uint64_t seed : cfg.seeds)
      cells.push_back([&cfg, g, seed] {
        return run_cell(with_param(cfg, g), g.method, seed);
      });
  std::vector<CellOutput> outputs;
  run_cells_pooled(cells, outputs, jobs);

  SweepResult res;
  size_t idx = 0;
  for (const GridCell& g : grid) {
    std::vector<double> bests;
    int successes = 0;
    for (size_t s = 0; s < cfg.seeds.size(); ++s, ++idx) {
      bests.push_back(outputs[idx].best_value);
      successes += outputs[idx].success ? 1 : 0;
    }
    SweepRow row;
    row.method = g.method;
    row.param = g.param;
    row.value = g.value;
    row.n_seeds = static_cast<int>(bests.size());
    row.mean_best = stats::mean(bests);
    row.sem_best = bests.size() > 1 ? stats::sem(bests) : 0.0;
    row.success_rate = static_cast<double>(successes) / row.n_seeds;
    row.sem_success = std::sqrt(row.success_rate * (1.0 - row.success_rate) /
                                row.n_seeds);
    res.rows.push_back(row);
  }

  std::string dir = effective_output_dir(cfg);
  std::filesystem::create_directories(dir);

  std::ostringstream csv;
  csv << "# config_hash=" << config_hash(cfg) << "\n";
  csv << "method,param,value,n_seeds,mean_best,sem_best,success_rate,sem_success\n";
  for (const SweepRow& r : res.rows)
    csv << r.method << "," << r.param << "," << fmt_g(r.value) << "," << r.n_seeds
        << "," << fmt_g(r.mean_best) << "," << fmt_g(r.sem_best) << ","
        << fmt_g(r.success_rate) << "," << fmt_g(r.sem_success) << "\n";
  res.csv_path = dir + "/sweep.csv";
  write_text_file(res.csv_path, csv.str());

  nlohmann::json best;
  best["config_hash"] = config_hash(cfg);
  for (const std::string& method : cfg.methods) {
    const SweepRow* win = nullptr;
    for (const SweepRow& r : res.rows) {
      if (r.method != method) continue;
      if (!win || r.success_rate > win->success_rate ||
          (r.success_rate == win->success_rate && r.mean_best > win->mean_best))
        win = &r;
    }
    best[method] = {{"param", win->param},
                    {"value", win->value},
                    {"success_rate", win->success_rate},
                    {"mean_best", win->mean_best}};
  }
  res.best_path = dir + "/sweep_best.json";
  write_text_file(res.best_path, best.dump(2) + "\n");
  return res;
}

}  // namespace plalam::cli
