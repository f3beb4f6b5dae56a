#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plalam/partition.hpp"
#include "plalam/search.hpp"
#include "plalam/types.hpp"

namespace plalam::cli {

// Per-run JSON document. Always present: config_hash, env, method, seed,
// n_queries, best_value, best_x, success, wall_ms, values, best_curve.
// When artifacts are kept the document also carries encoder_dim, zk_scales,
// rebuild_indices, zk_series, z (partition features, one row per query) and
// the final tree, enough to rerun the partition diagnostics offline.
nlohmann::json run_document(const std::string& hash, const std::string& env_name,
                            const std::string& method, std::uint64_t seed,
                            const RunRecord& rec, bool success, double wall_ms,
                            const search::PlalamArtifacts* artifacts,
                            const std::vector<double>& zk_scales);

// The embedded "tree" artifact uses the partition module's JSON layout;
// load_tree parses it back.
partition::PartitionTree load_tree(const nlohmann::json& tree);

// %.10g, the fixed numeric format of every CSV this toolkit writes.
std::string fmt_g(double v);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);
nlohmann::json read_json_file(const std::string& path);

// Run documents live at <dir>/<method>_seed<seed>.json.
std::string run_file_path(const std::string& dir, const std::string& method,
                          std::uint64_t seed);

}  // namespace plalam::cli
