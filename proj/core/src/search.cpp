#include "plalam/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plalam/diagnostics.hpp"
#include "plalam/samplers.hpp"

namespace plalam::search {

namespace {

double node_score(const RegionNode& nd, NodeScore kind) {
  return kind == NodeScore::max ? nd.score_max : nd.score_mean();
}

// Descend comparing siblings; the good child wins ties by being checked first.
int descend(const PartitionTree& tree, NodeScore kind, double cp, bool greedy) {
  int id = 0;
  while (!tree.node(id).is_leaf()) {
    const RegionNode& nd = tree.node(id);
    const RegionNode& g = tree.node(nd.child_good);
    const RegionNode& b = tree.node(nd.child_bad);
    double vg, vb;
    if (greedy) {
      vg = node_score(g, kind);
      vb = node_score(b, kind);
    } else {
      vg = ucb(node_score(g, kind), g.n(), nd.n(), cp);
      vb = ucb(node_score(b, kind), b.n(), nd.n(), cp);
    }
    id = vb > vg ? nd.child_bad : nd.child_good;
  }
  return id;
}

}  // namespace

SearchVariant variant_for(Method m) {
  switch (m) {
    case Method::plalam:
      return {NodeScore::max, Descend::tree_ucb};
    case Method::plalam_mean:
      return {NodeScore::mean, Descend::tree_ucb};
    case Method::plalam_notree:
      return {NodeScore::max, Descend::flat_leaf_ucb};
    case Method::plalam_noucb:
      return {NodeScore::max, Descend::tree_greedy};
    default:
      throw ConfigError("variant_for: " + method_name(m) + " is not a tree method");
  }
}

double ucb(double node_score, int n_child, int n_parent, double cp) {
  if (n_child <= 0) return std::numeric_limits<double>::infinity();
  return node_score + cp * std::sqrt(2.0 * std::log(static_cast<double>(n_parent)) /
                                     static_cast<double>(n_child));
}

int select_leaf(const PartitionTree& tree, SearchVariant variant, double cp) {
  if (tree.empty()) throw ConfigError("select_leaf: empty tree");
  switch (variant.descend) {
    case Descend::tree_ucb:
      return descend(tree, variant.score, cp, false);
    case Descend::tree_greedy:
      return descend(tree, variant.score, cp, true);
    case Descend::flat_leaf_ucb: {
      const int n_root = tree.root().n();
      int best_id = -1;
      double best = -std::numeric_limits<double>::infinity();
      for (int id : tree.leaf_ids()) {
        const RegionNode& nd = tree.node(id);
        double v = ucb(node_score(nd, variant.score), nd.n(), n_root, cp);
        if (best_id < 0 || v > best) {
          best_id = id;
          best = v;
        }
      }
      return best_id;
    }
  }
  throw ConfigError("select_leaf: unknown descent rule");
}

Proposal propose_in_leaf(const PartitionTree& tree, int leaf,
                         const std::vector<Sample>& samples,
                         const latent::LatentCodec& codec,
                         const latent::PartitionEncoder& encoder,
                         const std::optional<BoxBounds>& bounds, SplitRng& rng,
                         double sigma_mult, double sigma_floor, int max_retries) {
  const RegionNode& nd = tree.node(leaf);
  if (!nd.is_leaf()) throw ConfigError("propose_in_leaf: node is not a leaf");
  if (nd.members.empty()) throw ConfigError("propose_in_leaf: leaf has no members");

  Eigen::MatrixXd pts(nd.n(), codec.latent_dim());
  for (int i = 0; i < nd.n(); ++i)
    pts.row(i) = codec.encode(samples.at(nd.members[i]).x);
  samplers::CmaesState es =
      samplers::CmaesState::seed_from_samples(pts, sigma_mult, sigma_floor);

  Proposal out;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Eigen::VectorXd x = codec.decode(es.ask_one(rng));
    if (bounds) x = bounds->clamp(x);
    out.x = std::move(x);
    if (tree.route(encoder.encode(out.x)) == leaf) {
      out.rejections = attempt;
      out.in_region = true;
      return out;
    }
  }
  out.rejections = max_retries + 1;
  out.in_region = false;
  return out;
}

RunRecord run_plalam(CountingOracle& oracle, const SearchBudget& budget,
                     SearchVariant variant, latent::LatentCodec& codec,
                     const latent::PartitionEncoder& encoder, SplitRng& rng,
                     const PlalamOptions& opts, PlalamArtifacts* artifacts) {
  budget.validate();
  const int dim = oracle.dim();
  if (codec.input_dim() != dim) throw ConfigError("run_plalam: codec dim mismatch");
  const auto& bounds = oracle.bounds();

  RunRecord rec;
  std::vector<double> vals;
  std::vector<Eigen::VectorXd> zrows;

  auto record = [&](Eigen::VectorXd x, double v) {
    Sample s{std::move(x), v, oracle.used() - 1};
    double best = rec.best_curve.empty() ? v : std::max(rec.best_curve.back(), v);
    rec.best_curve.push_back(best);
    vals.push_back(v);
    zrows.push_back(encoder.encode(s.x));
    rec.samples.push_back(std::move(s));
  };

  const int n_init = std::min(budget.n_init, oracle.remaining());
  for (int i = 0; i < n_init; ++i) {
    Eigen::VectorXd x(dim);
    if (bounds) {
      for (int j = 0; j < dim; ++j) x[j] = rng.uniform(bounds->lo[j], bounds->hi[j]);
    } else {
      x = opts.init_sigma * rng.normal_vec(dim);
    }
    double v = oracle.evaluate(x);
    record(std::move(x), v);
  }

  PartitionTree tree;
  int last_rebuild = 0;  // sample count at the previous rebuild

  while (oracle.remaining() > 0) {
    const int seen = static_cast<int>(rec.samples.size());
    if (tree.empty() || seen - last_rebuild >= budget.n_par) {
      if (codec.trainable()) {
        Eigen::MatrixXd X(seen, dim);
        for (int i = 0; i < seen; ++i) X.row(i) = rec.samples[i].x;
        codec.fit(X, vals);
      }
      if (artifacts && !opts.zk_scales.empty()) {
        std::vector<double> window(vals.begin() + last_rebuild, vals.end());
        ZkPoint pt;
        pt.eval_index = seen;
        for (double c : opts.zk_scales)
          pt.zk.push_back(diagnostics::estimate_zk(window, c, encoder.out_dim()));
        artifacts->zk_series.push_back(std::move(pt));
      }
      Eigen::MatrixXd Z(seen, encoder.out_dim());
      for (int i = 0; i < seen; ++i) Z.row(i) = zrows[i];
      tree = partition::build_partition_encoded(Z, vals, budget.n_thres, rng.split());
      last_rebuild = seen;
      if (artifacts) artifacts->rebuild_indices.push_back(seen);
    }

    int leaf = select_leaf(tree, variant, budget.cp);
    Proposal prop =
        propose_in_leaf(tree, leaf, rec.samples, codec, encoder, bounds, rng,
                        opts.sigma_mult, opts.sigma_floor, opts.max_retries);
    double v = oracle.evaluate(prop.x);
    record(std::move(prop.x), v);
    tree.insert(static_cast<int>(rec.samples.size()) - 1, zrows.back(),
                rec.samples.back().value);
  }

  if (artifacts) {
    if (opts.keep_tree && !tree.empty()) artifacts->final_tree = tree;
    if (opts.keep_zs && !zrows.empty()) {
      artifacts->z_s.resize(static_cast<Eigen::Index>(zrows.size()), zrows[0].size());
      for (std::size_t i = 0; i < zrows.size(); ++i)
        artifacts->z_s.row(static_cast<Eigen::Index>(i)) = zrows[i];
    }
  }
  return rec;
}

}  // namespace plalam::search
