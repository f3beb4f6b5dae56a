#include "plalam_cli/diagnose.hpp"

#include <filesystem>
#include <sstream>

#include "plalam_cli/run_io.hpp"

#include "plalam/diagnostics.hpp"
#include "plalam/partition.hpp"
#include "plalam/rng.hpp"

namespace plalam::cli {

namespace {

constexpr int kRandomSplitTrials = 32;

bool is_tree_method(const std::string& name) {
  switch (parse_method(name)) {
    case Method::cem:
    case Method::cmaes:
    case Method::random_shooting:
      return false;
    default:
      return true;
  }
}

}  // namespace

DiagnoseResult run_diagnostics(const RunConfig& cfg) {
  std::string dir = effective_output_dir(cfg);
  std::string hash = config_hash(cfg);

  std::vector<std::string> tree_methods;
  for (const std::string& m : cfg.methods)
    if (is_tree_method(m)) tree_methods.push_back(m);
  if (tree_methods.empty())
    throw ConfigError("diagnostics need at least one tree method in `methods`");

  DiagnoseResult res;
  for (const std::string& method : tree_methods) {
    std::ostringstream summary, nodes, zk;
    summary << "# config_hash=" << hash << "\n"
            << "seed,n_internal,frac_l_better,frac_c_better,mean_learned_l,"
               "mean_random_l,mean_learned_c,mean_random_c\n";
    nodes << "# config_hash=" << hash << "\n"
          << "seed,node_id,learned_l,random_l,learned_c,random_c\n";
    zk << "# config_hash=" << hash << "\n"
       << "seed,eval_index,scale,zk\n";

    for (std::uint64_t seed : cfg.seeds) {
      std::string path = run_file_path(dir, method, seed);
      if (!std::filesystem::exists(path))
        throw ConfigError("missing run file '" + path + "'; run the batch first");
      nlohmann::json doc = read_json_file(path);
      if (doc.at("config_hash").get<std::string>() != hash)
        throw ConfigError("config hash mismatch for '" + path +
                          "'; results come from a different config");
      if (!doc.contains("artifacts") || !doc.at("artifacts").contains("tree"))
        throw ConfigError("run file '" + path +
                          "' has no tree snapshot; rerun with save_artifacts = true");

      const nlohmann::json& art = doc.at("artifacts");
      partition::PartitionTree tree = load_tree(art.at("tree"));
      std::vector<double> values = doc.at("values").get<std::vector<double>>();
      const nlohmann::json& zrows = art.at("z");
      int d = art.at("encoder_dim").get<int>();
      Eigen::MatrixXd Z(static_cast<long>(zrows.size()), d);
      for (size_t i = 0; i < zrows.size(); ++i) {
        std::vector<double> row = zrows[i].get<std::vector<double>>();
        if (static_cast<int>(row.size()) != d)
          throw ConfigError("malformed partition features in '" + path + "'");
        Z.row(static_cast<long>(i)) =
            Eigen::Map<const Eigen::VectorXd>(row.data(), d);
      }
      if (Z.rows() != static_cast<long>(values.size()))
        throw ConfigError("partition features and values disagree in '" + path + "'");

      SplitRng rng(seed);
      diagnostics::PartitionComparison cmp = diagnostics::compare_random_partition(
          tree, Z, values, rng, kRandomSplitTrials);

      summary << seed << "," << cmp.n_internal << "," << fmt_g(cmp.frac_l_better)
              << "," << fmt_g(cmp.frac_c_better) << "," << fmt_g(cmp.mean_learned_l)
              << "," << fmt_g(cmp.mean_random_l) << "," << fmt_g(cmp.mean_learned_c)
              << "," << fmt_g(cmp.mean_random_c) << "\n";
      for (const auto& row : cmp.rows)
        nodes << seed << "," << row.node_id << "," << fmt_g(row.learned_l) << ","
              << fmt_g(row.random_l) << "," << fmt_g(row.learned_c) << ","
              << fmt_g(row.random_c) << "\n";

      std::vector<double> scales = art.at("zk_scales").get<std::vector<double>>();
      for (const nlohmann::json& pt : art.at("zk_series")) {
        int eval_index = pt.at("eval_index").get<int>();
        std::vector<double> zks = pt.at("zk").get<std::vector<double>>();
        if (zks.size() != scales.size())
          throw ConfigError("tail-mass series malformed in '" + path + "'");
        for (size_t s = 0; s < scales.size(); ++s)
          zk << seed << "," << eval_index << "," << fmt_g(scales[s]) << ","
             << fmt_g(zks[s]) << "\n";
      }
    }

    std::string base = dir + "/diagnostics_" + method;
    write_text_file(base + ".csv", summary.str());
    write_text_file(base + "_nodes.csv", nodes.str());
    write_text_file(dir + "/zk_" + method + ".csv", zk.str());
    res.csv_paths.push_back(base + ".csv");
    res.csv_paths.push_back(base + "_nodes.csv");
    res.csv_paths.push_back(dir + "/zk_" + method + ".csv");
  }
  return res;
}

}  // namespace plalam::cli
