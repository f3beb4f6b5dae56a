#include "plalam/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include <nlohmann/json.hpp>

namespace plalam::partition {

namespace {

bool all_rows_equal(const Eigen::MatrixXd& points) {
  for (Eigen::Index i = 1; i < points.rows(); ++i)
    if (points.row(i) != points.row(0)) return false;
  return true;
}

Eigen::Index farthest_row_from(const Eigen::MatrixXd& points,
                               const Eigen::RowVectorXd& ref) {
  Eigen::Index best = 0;
  double best_d = -1.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double d = (points.row(i) - ref).squaredNorm();
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

KmeansResult kmeans2(const Eigen::MatrixXd& points, SplitRng& /*rng*/) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw DegenerateCluster("kmeans2: need at least 2 points");
  if (all_rows_equal(points)) throw DegenerateCluster("kmeans2: all points identical");

  Eigen::RowVectorXd centroid = points.colwise().mean();
  Eigen::RowVectorXd c0 = points.row(farthest_row_from(points, centroid));
  Eigen::RowVectorXd c1 = points.row(farthest_row_from(points, c0));

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double d0 = (points.row(i) - c0).squaredNorm();
      double d1 = (points.row(i) - c1).squaredNorm();
      int a = d1 < d0 ? 1 : 0;
      if (a != assign[i]) {
        assign[i] = a;
        changed = true;
      }
    }

    // Re-seed an emptied cluster with the point farthest from the other one.
    int n1 = std::accumulate(assign.begin(), assign.end(), 0);
    if (n1 == 0) {
      assign[farthest_row_from(points, c0)] = 1;
      changed = true;
    } else if (n1 == static_cast<int>(n)) {
      assign[farthest_row_from(points, c1)] = 0;
      changed = true;
    }

    Eigen::RowVectorXd s0 = Eigen::RowVectorXd::Zero(points.cols());
    Eigen::RowVectorXd s1 = Eigen::RowVectorXd::Zero(points.cols());
    int k0 = 0, k1 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (assign[i] == 0) {
        s0 += points.row(i);
        ++k0;
      } else {
        s1 += points.row(i);
        ++k1;
      }
    }
    c0 = s0 / std::max(1, k0);
    c1 = s1 / std::max(1, k1);
    if (!changed && iter > 0) break;
  }

  if ((c0 - c1).squaredNorm() == 0.0)
    throw DegenerateCluster("kmeans2: clusters collapsed onto one center");

  // Higher mean value coordinate (the last one) is the good cluster; break an
  // exact tie toward the cluster holding the lowest point index.
  bool good_is_1;
  if (c1[points.cols() - 1] > c0[points.cols() - 1]) {
    good_is_1 = true;
  } else if (c1[points.cols() - 1] < c0[points.cols() - 1]) {
    good_is_1 = false;
  } else {
    good_is_1 = assign[0] == 1;
  }

  KmeansResult out;
  out.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.labels[i] = (assign[i] == 1) == good_is_1 ? 1 : 0;
  out.center_good = (good_is_1 ? c1 : c0).transpose();
  out.center_bad = (good_is_1 ? c0 : c1).transpose();
  return out;
}

LinearBoundary fit_boundary(const Eigen::MatrixXd& good, const Eigen::MatrixXd& bad,
                            SplitRng& rng) {
  if (good.rows() == 0 || bad.rows() == 0)
    throw FitFailure("fit_boundary: both classes need at least one point");
  if (good.cols() != bad.cols())
    throw FitFailure("fit_boundary: dimension mismatch");

  const Eigen::Index d = good.cols();
  const Eigen::Index n = good.rows() + bad.rows();
  const double lambda = 1e-3;
  const int epochs = 200;

  auto point = [&](Eigen::Index i) -> Eigen::RowVectorXd {
    return i < good.rows() ? good.row(i) : bad.row(i - good.rows());
  };
  auto label = [&](Eigen::Index i) -> double { return i < good.rows() ? 1.0 : -1.0; };

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  long t = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (Eigen::Index i = n - 1; i > 0; --i)
      std::swap(order[i], order[rng.uniform_int(static_cast<std::uint64_t>(i) + 1)]);
    for (Eigen::Index k = 0; k < n; ++k) {
      ++t;
      double eta = 1.0 / (lambda * static_cast<double>(t));
      Eigen::Index i = order[k];
      double y = label(i);
      double margin = y * (point(i).dot(w) + b);
      w *= 1.0 - eta * lambda;
      if (margin < 1.0) {
        w += eta * y * point(i).transpose();
        b += eta * y;
      }
    }
  }

  if (w.norm() == 0.0) throw FitFailure("fit_boundary: zero weight vector");

  LinearBoundary out{w, b, 0.0};
  auto accuracy = [&](const LinearBoundary& lb) {
    Eigen::Index correct = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (lb.good_side(point(i).transpose()) == (label(i) > 0.0)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(n);
  };

  out.train_accuracy = accuracy(out);
  if (out.train_accuracy < 0.5) {
    out.weights = -out.weights;
    out.bias = -out.bias;
    out.train_accuracy = accuracy(out);
  }
  return out;
}

PartitionTree::PartitionTree(std::vector<RegionNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ConfigError("PartitionTree: no nodes");
}

std::vector<int> PartitionTree::leaf_ids() const {
  std::vector<int> out;
  for (const auto& nd : nodes_)
    if (nd.is_leaf()) out.push_back(nd.id);
  return out;
}

int PartitionTree::route(const Eigen::VectorXd& z) const {
  int id = 0;
  while (!nodes_[id].is_leaf()) {
    const RegionNode& nd = nodes_[id];
    id = nd.boundary.good_side(z) ? nd.child_good : nd.child_bad;
  }
  return id;
}

int PartitionTree::insert(int sample_index, const Eigen::VectorXd& z, double value) {
  int id = 0;
  for (;;) {
    RegionNode& nd = nodes_[id];
    nd.members.push_back(sample_index);
    nd.score_max = std::max(nd.score_max, value);
    nd.score_sum += value;
    if (nd.is_leaf()) return id;
    id = nd.boundary.good_side(z) ? nd.child_good : nd.child_bad;
  }
}

PartitionTree build_partition_encoded(const Eigen::MatrixXd& Z,
                                      const std::vector<double>& values,
                                      int n_thres, SplitRng rng) {
  const Eigen::Index n = Z.rows();
  if (n < 1) throw ConfigError("build_partition: no samples");
  if (static_cast<Eigen::Index>(values.size()) != n)
    throw ConfigError("build_partition: values/sample count mismatch");
  if (n_thres < 2) throw ConfigError("build_partition: n_thres must be >= 2");
  const Eigen::Index d = Z.cols();

  PartitionTree tree;
  auto& nodes = tree.nodes_;

  RegionNode root;
  root.id = 0;
  root.members.resize(n);
  std::iota(root.members.begin(), root.members.end(), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    root.score_max = std::max(root.score_max, values[i]);
    root.score_sum += values[i];
  }
  nodes.push_back(std::move(root));

  std::deque<int> queue{0};
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    const std::vector<int> members = nodes[id].members;
    const int m = static_cast<int>(members.size());
    if (m < n_thres) continue;

    // Standardize features within the node and min-max scale the values so
    // the clustering coordinate scales are comparable.
    Eigen::MatrixXd feats(m, d);
    for (int i = 0; i < m; ++i) feats.row(i) = Z.row(members[i]);
    Eigen::RowVectorXd mu = feats.colwise().mean();
    Eigen::RowVectorXd sd(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      double var = (feats.col(j).array() - mu[j]).square().sum() / m;
      sd[j] = std::sqrt(var);
      if (sd[j] < 1e-12) sd[j] = 1.0;
    }

    double vlo = values[members[0]], vhi = vlo;
    for (int i = 1; i < m; ++i) {
      vlo = std::min(vlo, values[members[i]]);
      vhi = std::max(vhi, values[members[i]]);
    }
    double vspan = vhi - vlo;

    Eigen::MatrixXd aug(m, d + 1);
    for (int i = 0; i < m; ++i) {
      aug.row(i).head(d) = (feats.row(i) - mu).cwiseQuotient(sd);
      aug(i, d) = vspan > 1e-12 ? (values[members[i]] - vlo) / vspan : 0.5;
    }

    KmeansResult km;
    try {
      km = kmeans2(aug, rng);
    } catch (const DegenerateCluster&) {
      continue;
    }

    int n_good = std::accumulate(km.labels.begin(), km.labels.end(), 0);
    Eigen::MatrixXd good_pts(n_good, d), bad_pts(m - n_good, d);
    int gi = 0, bi = 0;
    for (int i = 0; i < m; ++i) {
      Eigen::RowVectorXd std_feat = (feats.row(i) - mu).cwiseQuotient(sd);
      if (km.labels[i] == 1)
        good_pts.row(gi++) = std_feat;
      else
        bad_pts.row(bi++) = std_feat;
    }

    LinearBoundary boundary;
    try {
      SplitRng fit_rng = rng.split();
      boundary = fit_boundary(good_pts, bad_pts, fit_rng);
    } catch (const FitFailure&) {
      continue;
    }

    // Fold the standardization into the boundary so routing works on raw
    // encodings, then hand out members by the stored boundary itself: the
    // exact predicate route() will use later.
    Eigen::VectorXd w_raw = boundary.weights.cwiseQuotient(sd.transpose());
    boundary.bias -= w_raw.dot(mu.transpose());
    boundary.weights = std::move(w_raw);

    std::vector<int> to_good, to_bad;
    for (int i = 0; i < m; ++i) {
      if (boundary.good_side(Z.row(members[i]).transpose()))
        to_good.push_back(members[i]);
      else
        to_bad.push_back(members[i]);
    }
    if (to_good.empty() || to_bad.empty()) continue;

    auto make_child = [&](const std::vector<int>& idxs, int depth) {
      RegionNode c;
      c.id = static_cast<int>(nodes.size());
      c.depth = depth;
      c.parent = id;
      c.members = idxs;
      for (int s : idxs) {
        c.score_max = std::max(c.score_max, values[s]);
        c.score_sum += values[s];
      }
      nodes.push_back(std::move(c));
      return nodes.back().id;
    };

    int depth = nodes[id].depth + 1;
    int good_id = make_child(to_good, depth);
    int bad_id = make_child(to_bad, depth);
    nodes[id].boundary = std::move(boundary);
    nodes[id].child_good = good_id;
    nodes[id].child_bad = bad_id;
    queue.push_back(good_id);
    queue.push_back(bad_id);
  }

  return tree;
}

PartitionTree build_partition(const std::vector<Sample>& samples,
                              const latent::PartitionEncoder& encoder, int n_thres,
                              SplitRng rng) {
  if (samples.empty()) throw ConfigError("build_partition: no samples");
  Eigen::MatrixXd Z(static_cast<Eigen::Index>(samples.size()), encoder.out_dim());
  std::vector<double> values(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    Z.row(static_cast<Eigen::Index>(i)) = encoder.encode(samples[i].x).transpose();
    values[i] = samples[i].value;
  }
  return build_partition_encoded(Z, values, n_thres, std::move(rng));
}

std::string tree_to_json(const PartitionTree& tree) {
  nlohmann::json out;
  out["root"] = 0;
  auto& arr = out["nodes"] = nlohmann::json::array();
  for (int id = 0; id < tree.size(); ++id) {
    const RegionNode& nd = tree.node(id);
    nlohmann::json j;
    j["id"] = nd.id;
    j["depth"] = nd.depth;
    j["parent"] = nd.parent;
    j["n"] = nd.n();
    j["score_max"] = nd.score_max;
    j["score_mean"] = nd.score_mean();
    j["members"] = nd.members;
    if (nd.is_leaf()) {
      j["children"] = nullptr;
      j["boundary"] = nullptr;
    } else {
      j["children"] = {nd.child_good, nd.child_bad};
      std::vector<double> w(nd.boundary.weights.data(),
                            nd.boundary.weights.data() + nd.boundary.weights.size());
      j["boundary"] = {{"weights", w},
                       {"bias", nd.boundary.bias},
                       {"train_accuracy", nd.boundary.train_accuracy}};
    }
    arr.push_back(std::move(j));
  }
  return out.dump(2);
}

PartitionTree tree_from_json(const std::string& text) {
  nlohmann::json in = nlohmann::json::parse(text);
  std::vector<RegionNode> nodes;
  for (const auto& j : in.at("nodes")) {
    RegionNode nd;
    nd.id = j.at("id").get<int>();
    nd.depth = j.at("depth").get<int>();
    nd.parent = j.at("parent").get<int>();
    nd.members = j.at("members").get<std::vector<int>>();
    nd.score_max = j.at("score_max").get<double>();
    nd.score_sum = j.at("score_mean").get<double>() * nd.n();
    if (!j.at("children").is_null()) {
      nd.child_good = j.at("children")[0].get<int>();
      nd.child_bad = j.at("children")[1].get<int>();
      auto w = j.at("boundary").at("weights").get<std::vector<double>>();
      nd.boundary.weights =
          Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
      nd.boundary.bias = j.at("boundary").at("bias").get<double>();
      nd.boundary.train_accuracy = j.at("boundary").at("train_accuracy").get<double>();
    }
    nodes.push_back(std::move(nd));
  }
  return PartitionTree(std::move(nodes));
}

}  // namespace plalam::partition
