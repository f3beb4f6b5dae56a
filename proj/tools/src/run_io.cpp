#include "plalam_cli/run_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace plalam::cli {

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

nlohmann::json run_document(const std::string& hash, const std::string& env_name,
                            const std::string& method, std::uint64_t seed,
                            const RunRecord& rec, bool success, double wall_ms,
                            const search::PlalamArtifacts* artifacts,
                            const std::vector<double>& zk_scales) {
  nlohmann::json doc;
  doc["config_hash"] = hash;
  doc["env"] = env_name;
  doc["method"] = method;
  doc["seed"] = seed;
  doc["n_queries"] = rec.samples.size();
  doc["best_value"] = rec.best_value();
  doc["success"] = success;
  doc["wall_ms"] = wall_ms;

  std::vector<double> values;
  values.reserve(rec.samples.size());
  int best_idx = -1;
  for (size_t i = 0; i < rec.samples.size(); ++i) {
    values.push_back(rec.samples[i].value);
    if (best_idx < 0 || rec.samples[i].value > rec.samples[best_idx].value)
      best_idx = static_cast<int>(i);
  }
  doc["values"] = values;
  doc["best_curve"] = rec.best_curve;
  doc["best_x"] = best_idx >= 0 ? to_vec(rec.samples[best_idx].x)
                                : std::vector<double>{};

  if (artifacts) {
    nlohmann::json a;
    a["zk_scales"] = zk_scales;
    a["rebuild_indices"] = artifacts->rebuild_indices;
    nlohmann::json series = nlohmann::json::array();
    for (const search::ZkPoint& p : artifacts->zk_series)
      series.push_back({{"eval_index", p.eval_index}, {"zk", p.zk}});
    a["zk_series"] = series;
    a["encoder_dim"] = artifacts->z_s.cols();
    nlohmann::json zrows = nlohmann::json::array();
    for (long i = 0; i < artifacts->z_s.rows(); ++i)
      zrows.push_back(to_vec(artifacts->z_s.row(i)));
    a["z"] = zrows;
    if (artifacts->final_tree)
      a["tree"] = nlohmann::json::parse(
          partition::tree_to_json(*artifacts->final_tree));
    doc["artifacts"] = a;
  }
  return doc;
}

partition::PartitionTree load_tree(const nlohmann::json& tree) {
  return partition::tree_from_json(tree.dump());
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json read_json_file(const std::string& path) {
  nlohmann::json doc = nlohmann::json::parse(read_text_file(path), nullptr, true);
  return doc;
}

std::string run_file_path(const std::string& dir, const std::string& method,
                          std::uint64_t seed) {
  return dir + "/" + method + "_seed" + std::to_string(seed) + ".json";
}

}  // namespace plalam::cli
