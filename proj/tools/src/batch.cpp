#include "plalam_cli/batch.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "plalam_cli/run_io.hpp"

#include "plalam/envs.hpp"
#include "plalam/latent.hpp"
#include "plalam/samplers.hpp"
#include "plalam/search.hpp"
#include "plalam/stats.hpp"

namespace plalam::cli {

namespace {

std::unique_ptr<latent::LatentCodec> make_codec(const RunConfig& cfg, int dim,
                                                std::uint64_t seed) {
  int latent = cfg.latent_dim > 0 ? cfg.latent_dim : dim;
  if (latent > dim) throw ConfigError("latent_dim must be <= problem dimension");
  if (cfg.codec == "identity") {
    if (latent != dim)
      throw ConfigError("identity codec cannot change the dimension");
    return std::make_unique<latent::IdentityCodec>(dim);
  }
  if (cfg.codec == "pca") return std::make_unique<latent::PcaCodec>(dim, latent);
  return std::make_unique<latent::RandomProjectionCodec>(dim, latent, seed);
}

std::unique_ptr<latent::PartitionEncoder> make_encoder(const RunConfig& cfg,
                                                       const envs::Environment& env) {
  if (cfg.encoder == "identity")
    return std::make_unique<latent::IdentityEncoder>(env.dim());
  return std::make_unique<envs::TrajectoryEncoder>(env, cfg.snapshot_stride);
}

}  // namespace

CellOutput run_cell(const RunConfig& cfg, const std::string& method,
                    std::uint64_t seed) {
  Method m = parse_method(method);
  SplitRng master(seed);
  SplitRng env_rng = master.split();
  SplitRng run_rng = master.split();
  std::unique_ptr<envs::Environment> env = envs::make_env(cfg.env, env_rng, cfg.env_dim);
  CountingOracle oracle(
      env->dim(), [&](const Eigen::VectorXd& x) { return env->evaluate(x); },
      env->bounds(), cfg.total_queries);

  RunRecord rec;
  search::PlalamArtifacts artifacts;
  bool tree_method = false;
  auto t0 = std::chrono::steady_clock::now();
  switch (m) {
    case Method::cem:
    case Method::cmaes:
    case Method::random_shooting: {
      samplers::SamplerParams sp;
      sp.sigma = cfg.sigma;
      sp.population = cfg.population;
      sp.elites = cfg.elites;
      sp.lambda = cfg.lambda;
      if (m == Method::cem) rec = samplers::run_cem(oracle, sp, run_rng);
      else if (m == Method::cmaes) rec = samplers::run_cmaes(oracle, sp, run_rng);
      else rec = samplers::run_random_shooting(oracle, sp, run_rng);
      break;
    }
    default: {
      tree_method = true;
      std::unique_ptr<latent::LatentCodec> codec = make_codec(cfg, env->dim(), seed);
      std::unique_ptr<latent::PartitionEncoder> encoder = make_encoder(cfg, *env);
      SearchBudget budget{cfg.total_queries, cfg.n_init, cfg.n_par, cfg.n_thres,
                          cfg.cp};
      search::PlalamOptions opts;
      opts.init_sigma = cfg.sigma;
      opts.sigma_mult = cfg.sigma_mult;
      opts.zk_scales = cfg.zk_scales;
      opts.keep_tree = cfg.save_artifacts;
      opts.keep_zs = cfg.save_artifacts;
      rec = search::run_plalam(oracle, budget, search::variant_for(m), *codec,
                               *encoder, run_rng, opts,
                               cfg.save_artifacts ? &artifacts : nullptr);
      break;
    }
  }
  auto t1 = std::chrono::steady_clock::now();

  rec.seed = seed;
  rec.method = m;
  rec.env = cfg.env;

  CellOutput out;
  out.method = method;
  out.seed = seed;
  out.best_value = rec.best_value();
  out.success = env->success(out.best_value);
  out.wall_ms = cfg.record_timing
                    ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                    : 0.0;
  out.document = run_document(
      config_hash(cfg), cfg.env, method, seed, rec, out.success, out.wall_ms,
      (tree_method && cfg.save_artifacts) ? &artifacts : nullptr, cfg.zk_scales);
  return out;
}

void run_cells_pooled(const std::vector<std::function<CellOutput()>>& cells,
                      std::vector<CellOutput>& out, int jobs) {
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  out.resize(cells.size());
  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::vector<std::string> errors;
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        out[i] = cells[i]();
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        errors.emplace_back(e.what());
      }
    }
  };
  int n_threads = std::min<int>(jobs, static_cast<int>(cells.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (!errors.empty()) {
    std::string msg = errors.front();
    if (errors.size() > 1)
      msg += " (and " + std::to_string(errors.size() - 1) + " more cell failures)";
    throw PlalamError(msg);
  }
}

std::vector<SummaryRow> summarize(const RunConfig& cfg,
                                  const std::vector<CellOutput>& cells) {
  std::vector<SummaryRow> rows;
  size_t idx = 0;
  for (const std::string& method : cfg.methods) {
    std::vector<double> bests, walls;
    int successes = 0;
    for (size_t s = 0; s < cfg.seeds.size(); ++s, ++idx) {
      const CellOutput& c = cells.at(idx);
      bests.push_back(c.best_value);
      walls.push_back(c.wall_ms);
      successes += c.success ? 1 : 0;
    }
    SummaryRow row;
    row.method = method;
    row.env = cfg.env;
    row.n_seeds = static_cast<int>(bests.size());
    row.mean_best = stats::mean(bests);
    row.sem_best = bests.size() > 1 ? stats::sem(bests) : 0.0;
    double p = static_cast<double>(successes) / row.n_seeds;
    row.success_rate = p;
    row.sem_success = std::sqrt(p * (1.0 - p) / row.n_seeds);
    row.wall_ms = stats::mean(walls);
    rows.push_back(row);
  }
  return rows;
}

std::string summary_csv_text(const RunConfig& cfg,
                             const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "# config_hash=" << config_hash(cfg) << "\n";
  out << "method,env,n_seeds,mean_best,sem_best,success_rate,sem_success,wall_ms\n";
  for (const SummaryRow& r : rows) {
    out << r.method << "," << r.env << "," << r.n_seeds << "," << fmt_g(r.mean_best)
        << "," << fmt_g(r.sem_best) << "," << fmt_g(r.success_rate) << ","
        << fmt_g(r.sem_success) << "," << fmt_g(r.wall_ms) << "\n";
  }
  return out.str();
}

BatchResult run_batch(const RunConfig& cfg, int jobs) {
  std::string dir = effective_output_dir(cfg);
  std::filesystem::create_directories(dir);

  std::vector<std::function<CellOutput()>> cells;
  for (const std::string& method : cfg.methods)
    for (std::uint64_t seed : cfg.seeds)
      cells.push_back([&cfg, method, seed] { return run_cell(cfg, method, seed); });

  BatchResult res;
  run_cells_pooled(cells, res.cells, jobs);

  for (const CellOutput& c : res.cells) {
    std::string path = run_file_path(dir, c.method, c.seed);
    write_text_file(path, c.document.dump() + "\n");
    res.run_paths.push_back(path);
  }
  res.rows = summarize(cfg, res.cells);
  res.summary_path = dir + "/summary.csv";
  write_text_file(res.summary_path, summary_csv_text(cfg, res.rows));
  return res;
}

}  // namespace plalam::cli
