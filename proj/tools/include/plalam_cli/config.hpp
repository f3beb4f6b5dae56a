#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plalam/types.hpp"

namespace plalam::cli {

// Flat `key = value` experiment description (TOML-style scalars and arrays,
// no tables). Parsing is strict: unknown keys, duplicate keys, and malformed
// values are all ConfigError, and every accepted config round-trips through
// serialize_config unchanged.
struct RunConfig {
  std::string env;                   // registered environment name
  int env_dim = 2;                   // rastrigin / ackley only
  std::vector<std::string> methods;  // config order = row order in summaries
  std::vector<std::uint64_t> seeds;  // explicit, or seed_start/seed_count
  std::string output_dir;

  int total_queries = 1000;
  int n_init = 50;
  int n_par = 50;
  int n_thres = 10;
  double cp = 2.0;
  double sigma_mult = 1.0;  // leaf proposal step-size multiplier (tree methods)

  // CEM stddev / CMA-ES initial step / random-shooting spread; also the
  // warm-start spread of the tree methods when the problem is unbounded.
  double sigma = 1.0;
  int population = 32;  // CEM
  int elites = 8;       // CEM
  int lambda = 0;       // CMA-ES, 0 = default population

  std::string codec = "identity";      // identity | pca | random_projection
  int latent_dim = 0;                  // 0 = problem dimension
  std::string encoder = "trajectory";  // trajectory | identity
  int snapshot_stride = 0;             // 0 = environment default

  std::vector<double> zk_scales{1.0};  // tail-mass scales logged per rebuild
  bool save_artifacts = false;  // persist tree, partition features, tail series
  bool record_timing = false;   // off keeps reruns byte-identical

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical form: fixed key order, one key per line, shortest-round-trip
// float formatting. parse_config(serialize_config(c)) == c for any valid c.
std::string serialize_config(const RunConfig& cfg);

// 64-bit FNV-1a of the canonical serialization, 16 hex digits. Stamped into
// every output file so results from different configs are never mixed.
std::string config_hash(const RunConfig& cfg);

// Seed list override syntax: "1,2,3" or "start:count".
std::vector<std::uint64_t> parse_seed_spec(const std::string& spec);

// output_dir, unless the PLALAM_OUTPUT_DIR environment variable is set (the
// only environment override).
std::string effective_output_dir(const RunConfig& cfg);

}  // namespace plalam::cli
