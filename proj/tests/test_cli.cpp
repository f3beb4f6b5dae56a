#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plalam_cli/batch.hpp"
#include "plalam_cli/config.hpp"
#include "plalam_cli/diagnose.hpp"
#include "plalam_cli/run_io.hpp"
#include "plalam_cli/sweep.hpp"
#include "plalam_cli/theory_cmd.hpp"

#include "plalam/latent.hpp"
#include "plalam/oracle.hpp"
#include "plalam/search.hpp"
#include "plalam/stats.hpp"

using namespace plalam;
using namespace plalam::cli;

namespace {

namespace fs = std::filesystem;

std::string fresh_dir(const std::string& name) {
  fs::path dir = fs::path("cli_test_tmp") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

// Data rows of one of our CSVs: drops `#` stamp lines and the header.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

RunConfig small_sampler_config(const std::string& out) {
  RunConfig cfg;
  cfg.env = "deceptive_twin";
  cfg.methods = {"cem", "random_shooting"};
  cfg.seeds = {0, 1, 2};
  cfg.output_dir = out;
  cfg.total_queries = 60;
  cfg.population = 8;
  cfg.elites = 2;
  return cfg;
}

RunConfig small_tree_config(const std::string& out) {
  RunConfig cfg;
  cfg.env = "deceptive_twin";
  cfg.methods = {"plalam"};
  cfg.seeds = {0, 1, 2};
  cfg.output_dir = out;
  cfg.total_queries = 120;
  cfg.n_init = 30;
  cfg.n_par = 40;
  cfg.n_thres = 10;
  cfg.save_artifacts = true;
  return cfg;
}

struct EnvVarGuard {
  ~EnvVarGuard() { unsetenv("PLALAM_OUTPUT_DIR"); }
};

}  // namespace

TEST_CASE("config text parses, round-trips, and hashes stably") {
  std::string text =
      "# full experiment description\n"
      "env = \"select_obj\"   # navigation world\n"
      "env_dim = 2\n"
      "methods = [\"plalam\", \"cem\"]\n"
      "seeds = [0, 1, 2]\n"
      "output_dir = \"runs/demo\"\n"
      "total_queries = 4000\n"
      "n_init = 50\n"
      "n_par = 50\n"
      "n_thres = 10\n"
      "cp = 4.0\n"
      "sigma = 2.5\n"
      "population = 32\n"
      "elites = 8\n"
      "lambda = 0\n"
      "codec = \"pca\"\n"
      "latent_dim = 12\n"
      "encoder = \"trajectory\"\n"
      "snapshot_stride = 25\n"
      "zk_scales = [0.5, 1.0, 2.0]\n"
      "save_artifacts = true\n"
      "record_timing = false\n";
  RunConfig cfg = parse_config(text);
  CHECK(cfg.env == "select_obj");
  CHECK(cfg.methods == std::vector<std::string>{"plalam", "cem"});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(cfg.output_dir == "runs/demo");
  CHECK(cfg.total_queries == 4000);
  CHECK(cfg.cp == 4.0);
  CHECK(cfg.sigma == 2.5);
  CHECK(cfg.codec == "pca");
  CHECK(cfg.latent_dim == 12);
  CHECK(cfg.snapshot_stride == 25);
  CHECK(cfg.zk_scales == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(cfg.save_artifacts);
  CHECK_FALSE(cfg.record_timing);

  // Canonical serialization parses back to the identical struct, and the
  // hash is a function of the content only.
  RunConfig again = parse_config(serialize_config(cfg));
  CHECK(again == cfg);
  CHECK(serialize_config(again) == serialize_config(cfg));
  CHECK(config_hash(again) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);

  RunConfig changed = cfg;
  changed.cp = 2.0;
  CHECK(config_hash(changed) != config_hash(cfg));

  // Defaults serialize too.
  RunConfig defaults = small_sampler_config("out");
  CHECK(parse_config(serialize_config(defaults)) == defaults);
}

TEST_CASE("malformed configs are rejected with the offending key") {
  std::string base =
      "env = \"deceptive_twin\"\n"
      "methods = [\"cem\"]\n"
      "seeds = [0]\n"
      "output_dir = \"out\"\n";
  CHECK_NOTHROW(parse_config(base));

  auto bad = [&](const std::string& extra) {
    CHECK_THROWS_AS(parse_config(base + extra), ConfigError);
  };
  bad("mystery_knob = 3\n");           // unknown key
  bad("env = \"maze_s3\"\n");          // duplicate key
  bad("cp = \"high\"\n");              // wrong type
  bad("save_artifacts = 1\n");         // wrong type for a flag
  bad("sigma = -2.0\n");               // invalid range
  bad("n_thres = 1\n");                // invalid range
  bad("elites = 99\n");                // above population
  bad("codec = \"autoencoder\"\n");    // unknown codec
  bad("encoder = \"graph\"\n");        // unknown encoder
  bad("zk_scales = []\n");             // empty array
  bad("zk_scales = [0.0]\n");          // non-positive scale
  bad("seed_start = 5\n");             // clashes with explicit seeds
  bad("population = [8]\n");           // scalar expected
  bad("cp = 1.0 extra\n");             // trailing junk
  bad("name\n");                       // no assignment

  CHECK_THROWS_AS(parse_config("env = \"nowhere\"\nmethods = [\"cem\"]\n"
                               "seeds = [0]\noutput_dir = \"out\"\n"),
                  ConfigError);  // unknown environment
  CHECK_THROWS_AS(parse_config("env = \"maze_s3\"\nmethods = [\"sgd\"]\n"
                               "seeds = [0]\noutput_dir = \"out\"\n"),
                  ConfigError);  // unknown method
  CHECK_THROWS_AS(parse_config("env = \"maze_s3\"\nmethods = [\"cem\", \"cem\"]\n"
                               "seeds = [0]\noutput_dir = \"out\"\n"),
                  ConfigError);  // duplicate method
  CHECK_THROWS_AS(parse_config("env = \"maze_s3\"\nmethods = [\"cem\"]\n"
                               "seeds = [3, 3]\noutput_dir = \"out\"\n"),
                  ConfigError);  // duplicate seed
  CHECK_THROWS_AS(parse_config("env = \"maze_s3\"\nmethods = [\"cem\"]\n"
                               "output_dir = \"out\"\n"),
                  ConfigError);  // no seeds at all
  CHECK_THROWS_AS(parse_config("env = \"maze_s3\"\nmethods = [\"cem\"]\n"
                               "seeds = [0]\noutput_dir = \"out\"\n"
                               "methods = [\"cmaes\"\n"),
                  ConfigError);  // unterminated array
}

TEST_CASE("seed ranges expand to explicit lists") {
  std::string text =
      "env = \"deceptive_twin\"\nmethods = [\"cem\"]\n"
      "seed_start = 4\nseed_count = 3\noutput_dir = \"out\"\n";
  RunConfig cfg = parse_config(text);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{4, 5, 6});
  CHECK(serialize_config(cfg).find("seeds = [4, 5, 6]") != std::string::npos);

  CHECK(parse_seed_spec("0,5,9") == std::vector<std::uint64_t>{0, 5, 9});
  CHECK(parse_seed_spec("7:3") == std::vector<std::uint64_t>{7, 8, 9});
  CHECK_THROWS_AS(parse_seed_spec(""), ConfigError);
  CHECK_THROWS_AS(parse_seed_spec("a,b"), ConfigError);
  CHECK_THROWS_AS(parse_seed_spec("3:0"), ConfigError);
  CHECK_THROWS_AS(parse_seed_spec("1,-2"), ConfigError);
  CHECK_THROWS_AS(parse_seed_spec("1,1"), ConfigError);
}

TEST_CASE("a batch writes one document per cell and one summary row per method") {
  RunConfig cfg = small_sampler_config(fresh_dir("batch_basic"));
  BatchResult res = run_batch(cfg);

  CHECK(res.run_paths.size() == 6);
  for (const std::string& p : res.run_paths) CHECK(fs::exists(p));
  CHECK(fs::exists(res.summary_path));

  std::string csv = read_text_file(res.summary_path);
  CHECK(csv.find("# config_hash=" + config_hash(cfg)) == 0);
  CHECK(csv.find("method,env,n_seeds,mean_best,sem_best,success_rate,"
                 "sem_success,wall_ms") != std::string::npos);
  auto rows = csv_rows(csv);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "cem");
  CHECK(rows[1][0] == "random_shooting");
  CHECK(rows[0][1] == "deceptive_twin");
  CHECK(rows[0][2] == "3");
  CHECK(rows[0][7] == "0");  // timing off records zero
  CHECK(rows[1][7] == "0");

  nlohmann::json doc = read_json_file(run_file_path(cfg.output_dir, "cem", 1));
  CHECK(doc.at("config_hash") == config_hash(cfg));
  CHECK(doc.at("env") == "deceptive_twin");
  CHECK(doc.at("method") == "cem");
  CHECK(doc.at("seed") == 1);
  CHECK(doc.at("n_queries") == 60);
  CHECK(doc.at("values").size() == 60);
  CHECK(doc.at("best_curve").size() == 60);
  CHECK(doc.at("wall_ms") == 0.0);
  CHECK(doc.at("best_x").size() == 2);
  CHECK_FALSE(doc.contains("artifacts"));
  std::vector<double> curve = doc.at("best_curve").get<std::vector<double>>();
  for (size_t i = 1; i < curve.size(); ++i) CHECK(curve[i] >= curve[i - 1]);
  CHECK(doc.at("best_value").get<double>() == curve.back());
}

TEST_CASE("the summary equals a recomputation from the run documents") {
  RunConfig cfg = small_sampler_config(fresh_dir("batch_recompute"));
  BatchResult res = run_batch(cfg);

  auto rows = csv_rows(read_text_file(res.summary_path));
  REQUIRE(rows.size() == 2);
  for (size_t r = 0; r < cfg.methods.size(); ++r) {
    std::vector<double> bests;
    int successes = 0;
    for (std::uint64_t seed : cfg.seeds) {
      nlohmann::json doc =
          read_json_file(run_file_path(cfg.output_dir, cfg.methods[r], seed));
      bests.push_back(doc.at("best_value").get<double>());
      successes += doc.at("success").get<bool>() ? 1 : 0;
    }
    double p = successes / 3.0;
    CHECK(rows[r][3] == fmt_g(stats::mean(bests)));
    CHECK(rows[r][4] == fmt_g(stats::sem(bests)));
    CHECK(rows[r][5] == fmt_g(p));
    CHECK(rows[r][6] == fmt_g(std::sqrt(p * (1.0 - p) / 3.0)));
  }
}

TEST_CASE("reruns, thread counts, and the directory override change no byte") {
  RunConfig cfg = small_sampler_config(fresh_dir("batch_bytes"));
  run_batch(cfg, 1);
  std::string summary1 = read_text_file(cfg.output_dir + "/summary.csv");
  std::string run1 = read_text_file(run_file_path(cfg.output_dir, "cem", 2));

  run_batch(cfg, 1);  // rerun in place
  CHECK(read_text_file(cfg.output_dir + "/summary.csv") == summary1);
  CHECK(read_text_file(run_file_path(cfg.output_dir, "cem", 2)) == run1);

  // Same config, different physical directory via the environment override,
  // more threads: identical bytes (the hash covers the configured path, not
  // the override).
  EnvVarGuard guard;
  std::string other = fresh_dir("batch_bytes_jobs");
  setenv("PLALAM_OUTPUT_DIR", other.c_str(), 1);
  CHECK(effective_output_dir(cfg) == other);
  run_batch(cfg, 3);
  CHECK(read_text_file(other + "/summary.csv") == summary1);
  CHECK(read_text_file(run_file_path(other, "cem", 2)) == run1);
  unsetenv("PLALAM_OUTPUT_DIR");
  CHECK(effective_output_dir(cfg) == cfg.output_dir);
}

TEST_CASE("tree runs persist artifacts that reload consistently") {
  RunConfig cfg = small_tree_config(fresh_dir("batch_tree"));
  run_batch(cfg);

  nlohmann::json doc = read_json_file(run_file_path(cfg.output_dir, "plalam", 0));
  REQUIRE(doc.contains("artifacts"));
  const nlohmann::json& art = doc.at("artifacts");
  CHECK(art.at("encoder_dim") == 2);
  CHECK(art.at("z").size() == 120);
  std::vector<int> rebuilds = art.at("rebuild_indices").get<std::vector<int>>();
  CHECK(rebuilds == std::vector<int>{30, 70, 110});
  REQUIRE(art.at("zk_series").size() == 3);
  for (const auto& pt : art.at("zk_series"))
    for (double z : pt.at("zk").get<std::vector<double>>()) {
      CHECK(z >= 0.0);
      CHECK(z <= 1.0);
    }

  // The reloaded tree routes every recorded feature row to a leaf that holds
  // that sample.
  partition::PartitionTree tree = load_tree(art.at("tree"));
  CHECK(tree.root().n() == 120);
  for (int i : {0, 59, 119}) {
    std::vector<double> row = art.at("z")[i].get<std::vector<double>>();
    Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(row.data(), 2);
    const partition::RegionNode& leaf = tree.node(tree.route(z));
    CHECK(std::find(leaf.members.begin(), leaf.members.end(), i) !=
          leaf.members.end());
  }
}

TEST_CASE("diagnostics summaries recompute from the per-node rows") {
  RunConfig cfg = small_tree_config(fresh_dir("diagnose_basic"));
  run_batch(cfg);
  DiagnoseResult res = run_diagnostics(cfg);
  REQUIRE(res.csv_paths.size() == 3);
  for (const std::string& p : res.csv_paths) CHECK(fs::exists(p));

  auto summary = csv_rows(read_text_file(cfg.output_dir + "/diagnostics_plalam.csv"));
  auto nodes =
      csv_rows(read_text_file(cfg.output_dir + "/diagnostics_plalam_nodes.csv"));
  REQUIRE(summary.size() == 3);  // one row per seed

  for (const auto& row : summary) {
    std::string seed = row[0];
    int n_internal = std::stoi(row[1]);
    int node_count = 0, l_wins = 0, c_wins = 0;
    double learned_l_sum = 0.0;
    for (const auto& nd : nodes) {
      if (nd[0] != seed) continue;
      ++node_count;
      double learned_l = std::stod(nd[2]), random_l = std::stod(nd[3]);
      double learned_c = std::stod(nd[4]), random_c = std::stod(nd[5]);
      learned_l_sum += learned_l;
      l_wins += learned_l < random_l ? 1 : 0;
      c_wins += learned_c < random_c ? 1 : 0;
    }
    CHECK(node_count == n_internal);
    if (n_internal > 0) {
      CHECK(std::stod(row[2]) ==
            doctest::Approx(static_cast<double>(l_wins) / n_internal).epsilon(1e-9));
      CHECK(std::stod(row[3]) ==
            doctest::Approx(static_cast<double>(c_wins) / n_internal).epsilon(1e-9));
      CHECK(std::stod(row[4]) ==
            doctest::Approx(learned_l_sum / n_internal).epsilon(1e-9));
    }
  }

  // Tail-mass series: one row per (seed, rebuild, scale), eval indices on
  // the rebuild schedule.
  auto zk = csv_rows(read_text_file(cfg.output_dir + "/zk_plalam.csv"));
  CHECK(zk.size() == 9);  // 3 seeds x 3 rebuilds x 1 scale
  for (const auto& row : zk) {
    int eval_index = std::stoi(row[1]);
    CHECK((eval_index == 30 || eval_index == 70 || eval_index == 110));
    CHECK(std::stod(row[2]) == 1.0);
    CHECK(std::stod(row[3]) >= 0.0);
    CHECK(std::stod(row[3]) <= 1.0);
  }
}

TEST_CASE("diagnostics demand tree snapshots and matching configs") {
  // No tree method at all.
  RunConfig samplers = small_sampler_config(fresh_dir("diagnose_none"));
  run_batch(samplers);
  CHECK_THROWS_AS(run_diagnostics(samplers), ConfigError);

  // Tree method without persisted artifacts.
  RunConfig bare = small_tree_config(fresh_dir("diagnose_bare"));
  bare.save_artifacts = false;
  run_batch(bare);
  CHECK_THROWS_AS(run_diagnostics(bare), ConfigError);

  // Missing run files entirely.
  RunConfig missing = small_tree_config(fresh_dir("diagnose_missing"));
  CHECK_THROWS_AS(run_diagnostics(missing), ConfigError);

  // Files from a different config are refused, not silently mixed.
  RunConfig cfg = small_tree_config(fresh_dir("diagnose_mismatch"));
  run_batch(cfg);
  RunConfig other = cfg;
  other.cp = 0.5;
  CHECK_THROWS_AS(run_diagnostics(other), ConfigError);
}

TEST_CASE("constant-value runs report zero tail mass end to end") {
  RunConfig cfg = small_tree_config(fresh_dir("diagnose_const"));
  cfg.seeds = {0};

  // Hand-built run on a constant objective, persisted through the same
  // document writer the batch uses.
  CountingOracle oracle(
      2, [](const Eigen::VectorXd&) { return 1.0; },
      BoxBounds::cube(2, -1.0, 1.0), cfg.total_queries);
  latent::IdentityCodec codec(2);
  latent::IdentityEncoder encoder(2);
  SearchBudget budget{cfg.total_queries, cfg.n_init, cfg.n_par, cfg.n_thres, cfg.cp};
  search::PlalamOptions opts;
  opts.zk_scales = cfg.zk_scales;
  opts.keep_tree = true;
  opts.keep_zs = true;
  search::PlalamArtifacts artifacts;
  SplitRng master(0);
  master.split();  // world split, unused for a hand-built objective
  SplitRng run_rng = master.split();
  RunRecord rec = search::run_plalam(oracle, budget, search::variant_for(Method::plalam),
                                     codec, encoder, run_rng, opts, &artifacts);
  nlohmann::json doc = run_document(config_hash(cfg), cfg.env, "plalam", 0, rec,
                                    false, 0.0, &artifacts, cfg.zk_scales);
  write_text_file(run_file_path(cfg.output_dir, "plalam", 0), doc.dump() + "\n");

  run_diagnostics(cfg);
  auto zk = csv_rows(read_text_file(cfg.output_dir + "/zk_plalam.csv"));
  REQUIRE(zk.size() == 3);
  for (const auto& row : zk) CHECK(std::stod(row[3]) == 0.0);
}

TEST_CASE("sweeps scan the right grid per method and pick a winner") {
  RunConfig cfg = small_sampler_config(fresh_dir("sweep_basic"));
  cfg.methods = {"plalam", "cem", "random_shooting"};
  cfg.seeds = {0, 1};
  cfg.total_queries = 40;
  cfg.n_init = 10;
  cfg.n_par = 15;
  cfg.n_thres = 5;

  SweepResult res = run_sweep(cfg, 2);
  REQUIRE(res.rows.size() == 9);  // 4 cp + 4 sigma + 1 untuned
  for (int i = 0; i < 4; ++i) {
    CHECK(res.rows[i].method == "plalam");
    CHECK(res.rows[i].param == "cp");
  }
  CHECK(res.rows[0].value == 0.5);
  CHECK(res.rows[3].value == 4.0);
  for (int i = 4; i < 8; ++i) {
    CHECK(res.rows[i].method == "cem");
    CHECK(res.rows[i].param == "sigma");
  }
  CHECK(res.rows[4].value == 1.0);
  CHECK(res.rows[8].method == "random_shooting");
  CHECK(res.rows[8].value == cfg.sigma);

  CHECK(csv_rows(read_text_file(res.csv_path)).size() == 9);
  nlohmann::json best = read_json_file(res.best_path);
  CHECK(best.at("config_hash") == config_hash(cfg));
  double won = best.at("cem").at("value").get<double>();
  CHECK((won == 1.0 || won == 2.0 || won == 4.0 || won == 8.0));
  // The winner's stats must match its own grid row.
  for (const SweepRow& r : res.rows)
    if (r.method == "cem" && r.value == won)
      CHECK(best.at("cem").at("mean_best").get<double>() == r.mean_best);
}

TEST_CASE("the theory suite writes a trace and a summary that hold up") {
  TheoryOptions opts;
  opts.out_dir = fresh_dir("theory_cmd");
  opts.runs = 15;
  opts.t_max = 10000;
  opts.seed = 3;
  opts.eta = 0.1;
  std::vector<std::string> paths = run_theory(opts);
  REQUIRE(paths.size() == 2);
  for (const std::string& p : paths) CHECK(fs::exists(p));

  auto trace = csv_rows(read_text_file(paths[0]));
  CHECK(trace.size() == 5 * 2000);  // 5 runs x 2000 steps
  double last_R = 0.0;
  std::string last_run = "0";
  for (const auto& row : trace) {
    if (row[1] != last_run) {
      last_run = row[1];
      last_R = 0.0;
    }
    double R = std::stod(row[5]);
    CHECK(R >= last_R - 1e-12);  // cumulative regret never decreases
    last_R = R;
    int region = std::stoi(row[2]);
    CHECK((region == 0 || region == 1));
  }

  nlohmann::json summary = read_json_file(paths[1]);
  REQUIRE(summary.at("coverage").size() == 18);
  for (const auto& c : summary.at("coverage"))
    CHECK(std::abs(c.at("empirical").get<double>() - c.at("target").get<double>()) <
          0.02);
  CHECK(summary.at("fbound").at("violations") == 0);
  CHECK(summary.at("fbound").at("grid_points").get<int>() > 3000);
  CHECK(summary.at("slopes").at("d2").get<double>() > 0.35);
  CHECK(summary.at("slopes").at("d2").get<double>() < 0.65);
  CHECK(summary.at("slopes").at("d4").get<double>() > 0.6);
  CHECK(summary.at("slopes").at("d4").get<double>() < 0.9);
  double unsplit = summary.at("split").at("unsplit").get<double>();
  CHECK(summary.at("split").at("learned").get<double>() < 0.7 * unsplit);
  CHECK(summary.at("split").at("random").get<double>() > 0.9 * unsplit);

  // Same options, same bytes.
  std::string summary_text = read_text_file(paths[1]);
  run_theory(opts);
  CHECK(read_text_file(paths[1]) == summary_text);
}

TEST_CASE("the installed binary drives a batch end to end") {
  std::string dir = fresh_dir("cli_binary");
  RunConfig cfg = small_sampler_config(dir + "/out");
  std::string cfg_path = dir + "/exp.toml";
  write_text_file(cfg_path, serialize_config(cfg));

  std::string cmd = std::string(PLALAM_CLI_PATH) + " run --config " + cfg_path +
                    " > " + dir + "/stdout.txt 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(cfg.output_dir + "/summary.csv"));
  CHECK(csv_rows(read_text_file(cfg.output_dir + "/summary.csv")).size() == 2);
  std::string out = read_text_file(dir + "/stdout.txt");
  CHECK(out.find("wrote 6 run files") != std::string::npos);

  // Seed override narrows the batch.
  std::string cmd2 = std::string(PLALAM_CLI_PATH) + " run --config " + cfg_path +
                     " --seeds 7:2 --out " + dir + "/out2 > /dev/null 2>&1";
  REQUIRE(std::system(cmd2.c_str()) == 0);
  CHECK(fs::exists(dir + "/out2/cem_seed7.json"));
  CHECK(fs::exists(dir + "/out2/cem_seed8.json"));
  CHECK_FALSE(fs::exists(dir + "/out2/cem_seed0.json"));

  // Failures exit nonzero: missing config, bad config, no subcommand.
  CHECK(std::system((std::string(PLALAM_CLI_PATH) + " run --config " + dir +
                     "/nope.toml > /dev/null 2>&1")
                        .c_str()) != 0);
  write_text_file(dir + "/bad.toml", "env = \"deceptive_twin\"\nwhat = 1\n");
  CHECK(std::system((std::string(PLALAM_CLI_PATH) + " run --config " + dir +
                     "/bad.toml > /dev/null 2>&1")
                        .c_str()) != 0);
  CHECK(std::system((std::string(PLALAM_CLI_PATH) + " > /dev/null 2>&1").c_str()) !=
        0);
}
