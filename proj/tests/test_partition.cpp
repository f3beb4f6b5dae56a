#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "plalam/partition.hpp"
#include "plalam/rng.hpp"

using namespace plalam;
using namespace plalam::partition;

namespace {

// Exhaustive 2-partition minimizing within-cluster sum of squares. Feasible
// for small n; the unit oracle kmeans2 is checked against.
std::vector<int> best_bipartition_wcss(const Eigen::MatrixXd& pts) {
  const int n = static_cast<int>(pts.rows());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    Eigen::RowVectorXd c0 = Eigen::RowVectorXd::Zero(pts.cols());
    Eigen::RowVectorXd c1 = Eigen::RowVectorXd::Zero(pts.cols());
    int n0 = 0, n1 = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        c1 += pts.row(i);
        ++n1;
      } else {
        c0 += pts.row(i);
        ++n0;
      }
    }
    c0 /= n0;
    c1 /= n1;
    double wcss = 0.0;
    for (int i = 0; i < n; ++i)
      wcss += (pts.row(i) - ((mask & (1u << i)) ? c1 : c0)).squaredNorm();
    if (wcss < best) {
      best = wcss;
      best_labels.assign(n, 0);
      for (int i = 0; i < n; ++i) best_labels[i] = (mask & (1u << i)) ? 1 : 0;
    }
  }
  return best_labels;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  bool direct = true, flipped = true;
  for (size_t i = 0; i < a.size(); ++i) {
    direct &= a[i] == b[i];
    flipped &= a[i] == 1 - b[i];
  }
  return direct || flipped;
}

std::vector<Sample> make_samples(const Eigen::MatrixXd& X, const std::vector<double>& v) {
  std::vector<Sample> out;
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    out.push_back({X.row(i).transpose(), v[i], static_cast<int>(i)});
  return out;
}

}  // namespace

TEST_CASE("kmeans2 matches the exhaustive optimum on value-augmented points") {
  Eigen::MatrixXd pts(4, 2);
  pts << 0.0, 1.0, 0.1, 1.1, 5.0, 9.0, 5.1, 9.2;
  SplitRng rng(0);
  KmeansResult r = kmeans2(pts, rng);

  CHECK(same_partition(r.labels, best_bipartition_wcss(pts)));
  // Higher mean value coordinate is the good cluster.
  CHECK(r.labels == std::vector<int>{0, 0, 1, 1});
  CHECK(r.center_good[1] > r.center_bad[1]);
}

TEST_CASE("kmeans2 agrees with brute force on random separated blobs") {
  SplitRng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 6 + static_cast<int>(rng.uniform_int(5));
    Eigen::MatrixXd pts(n, 3);
    for (int i = 0; i < n; ++i) {
      double off = i % 2 == 0 ? 0.0 : 8.0;
      for (int j = 0; j < 3; ++j) pts(i, j) = off + rng.normal();
    }
    SplitRng krng(trial);
    KmeansResult r = kmeans2(pts, krng);
    CHECK(same_partition(r.labels, best_bipartition_wcss(pts)));
  }
}

TEST_CASE("kmeans2 rejects degenerate inputs and splits a pair") {
  Eigen::MatrixXd same(3, 2);
  same << 1.0, 2.0, 1.0, 2.0, 1.0, 2.0;
  SplitRng rng(0);
  CHECK_THROWS_AS(kmeans2(same, rng), DegenerateCluster);

  Eigen::MatrixXd pair(2, 2);
  pair << 0.0, 0.0, 1.0, 1.0;
  KmeansResult r = kmeans2(pair, rng);
  CHECK(r.labels[0] + r.labels[1] == 1);
  CHECK(r.labels[1] == 1);  // second point has the higher value coordinate
}

TEST_CASE("fit_boundary separates separable data with a sane threshold") {
  Eigen::MatrixXd good(2, 1), bad(2, 1);
  good << 3.0, 4.0;
  bad << 0.0, 1.0;
  SplitRng rng(1);
  LinearBoundary b = fit_boundary(good, bad, rng);

  CHECK(b.train_accuracy == 1.0);
  for (double g : {3.0, 4.0}) {
    Eigen::VectorXd z(1);
    z << g;
    CHECK(b.good_side(z));
  }
  for (double x : {0.0, 1.0}) {
    Eigen::VectorXd z(1);
    z << x;
    CHECK_FALSE(b.good_side(z));
  }
  double threshold = -b.bias / b.weights[0];
  CHECK(threshold > 1.0);
  CHECK(threshold < 3.0);
}

TEST_CASE("fit_boundary handles single points per class") {
  Eigen::MatrixXd good(1, 1), bad(1, 1);
  good << 1.0;
  bad << -1.0;
  SplitRng rng(2);
  LinearBoundary b = fit_boundary(good, bad, rng);
  CHECK(b.train_accuracy == 1.0);
}

TEST_CASE("fit_boundary on interleaved data still reaches coin-flip accuracy") {
  Eigen::MatrixXd good(2, 1), bad(2, 1);
  good << 0.0, 2.0;
  bad << 1.0, 3.0;
  SplitRng rng(3);
  LinearBoundary b = fit_boundary(good, bad, rng);
  CHECK(b.train_accuracy >= 0.5);
}

TEST_CASE("small sample sets stay a single leaf") {
  Eigen::MatrixXd X(3, 2);
  X << 0.0, 0.0, 1.0, 1.0, 2.0, 2.0;
  auto samples = make_samples(X, {1.0, 2.0, 3.0});
  latent::IdentityEncoder enc(2);
  PartitionTree t = build_partition(samples, enc, 4, SplitRng(5));
  CHECK(t.size() == 1);
  CHECK(t.root().is_leaf());
  CHECK(t.root().n() == 3);
  CHECK(t.root().score_max == 3.0);
  CHECK(t.root().score_mean() == doctest::Approx(2.0));
  CHECK(t.route(X.row(1).transpose()) == 0);
}

TEST_CASE("two tight separated clusters split once into good and bad leaves") {
  // Four identical low-value points and four identical high-value points:
  // the root splits cleanly and both children are degenerate, so the tree
  // stops at depth one with 4 members a side.
  Eigen::MatrixXd X(8, 2);
  std::vector<double> v;
  for (int i = 0; i < 4; ++i) {
    X.row(i) << 0.0, 0.0;
    v.push_back(5.0);
  }
  for (int i = 4; i < 8; ++i) {
    X.row(i) << 6.0, 6.0;
    v.push_back(1.0);
  }
  auto samples = make_samples(X, v);
  latent::IdentityEncoder enc(2);
  PartitionTree t = build_partition(samples, enc, 4, SplitRng(7));

  REQUIRE(t.size() == 3);
  CHECK_FALSE(t.root().is_leaf());
  const RegionNode& good = t.node(t.root().child_good);
  const RegionNode& bad = t.node(t.root().child_bad);
  CHECK(good.n() == 4);
  CHECK(bad.n() == 4);
  CHECK(good.score_mean() > bad.score_mean());
  CHECK(good.members == std::vector<int>{0, 1, 2, 3});
  CHECK(bad.members == std::vector<int>{4, 5, 6, 7});
  CHECK(good.boundary.weights.size() == 0);  // leaves carry no boundary

  // Routing a training point reproduces its membership.
  CHECK(t.route(X.row(0).transpose()) == good.id);
  CHECK(t.route(X.row(7).transpose()) == bad.id);
}

TEST_CASE("identical samples produce a single leaf") {
  Eigen::MatrixXd X(6, 2);
  for (int i = 0; i < 6; ++i) X.row(i) << 1.0, -1.0;
  auto samples = make_samples(X, std::vector<double>(6, 0.5));
  latent::IdentityEncoder enc(2);
  PartitionTree t = build_partition(samples, enc, 2, SplitRng(9));
  CHECK(t.size() == 1);
}

TEST_CASE("member consistency, leaf cover, and parent partition on random data") {
  SplitRng rng(31);
  const int n = 200, d = 3;
  Eigen::MatrixXd X(n, d);
  std::vector<double> v;
  for (int i = 0; i < n; ++i) {
    X.row(i) = rng.normal_vec(d).transpose();
    v.push_back(std::sin(X(i, 0)) + 0.2 * X(i, 1));
  }
  auto samples = make_samples(X, v);
  latent::IdentityEncoder enc(d);
  PartitionTree t = build_partition(samples, enc, 10, SplitRng(32));

  CHECK(t.size() > 1);

  // Every sample routes to the leaf that lists it.
  for (int i = 0; i < n; ++i) {
    int leaf = t.route(X.row(i).transpose());
    const auto& m = t.node(leaf).members;
    CHECK(std::find(m.begin(), m.end(), i) != m.end());
  }

  // Leaves tile the sample set without overlap.
  std::set<int> seen;
  size_t total = 0;
  for (int id : t.leaf_ids()) {
    const auto& m = t.node(id).members;
    total += m.size();
    seen.insert(m.begin(), m.end());
  }
  CHECK(total == static_cast<size_t>(n));
  CHECK(seen.size() == static_cast<size_t>(n));

  // Children partition their parent's members exactly.
  for (int id = 0; id < t.size(); ++id) {
    const RegionNode& nd = t.node(id);
    if (nd.is_leaf()) continue;
    std::set<int> parent(nd.members.begin(), nd.members.end());
    std::set<int> kids;
    const auto& g = t.node(nd.child_good).members;
    const auto& b = t.node(nd.child_bad).members;
    kids.insert(g.begin(), g.end());
    kids.insert(b.begin(), b.end());
    CHECK(parent == kids);
    CHECK(g.size() + b.size() == parent.size());
    // Internal nodes meet the split threshold.
    CHECK(nd.n() >= 10);
  }

  // Root aggregates the global best.
  CHECK(t.root().score_max == doctest::Approx(*std::max_element(v.begin(), v.end())));
}

TEST_CASE("rebuild with the same data and seed is structurally identical") {
  SplitRng rng(77);
  const int n = 120;
  Eigen::MatrixXd X(n, 2);
  std::vector<double> v;
  for (int i = 0; i < n; ++i) {
    X.row(i) = rng.normal_vec(2).transpose();
    v.push_back(-X.row(i).squaredNorm());
  }
  auto samples = make_samples(X, v);
  latent::IdentityEncoder enc(2);
  PartitionTree a = build_partition(samples, enc, 10, SplitRng(123));
  PartitionTree b = build_partition(samples, enc, 10, SplitRng(123));
  CHECK(tree_to_json(a) == tree_to_json(b));

  PartitionTree c = tree_from_json(tree_to_json(a));
  CHECK(tree_to_json(c) == tree_to_json(a));
}

TEST_CASE("insert updates counts and scores along the routed path") {
  Eigen::MatrixXd X(8, 2);
  std::vector<double> v;
  for (int i = 0; i < 4; ++i) {
    X.row(i) << 0.0, 0.0;
    v.push_back(5.0);
  }
  for (int i = 4; i < 8; ++i) {
    X.row(i) << 6.0, 6.0;
    v.push_back(1.0);
  }
  auto samples = make_samples(X, v);
  latent::IdentityEncoder enc(2);
  PartitionTree t = build_partition(samples, enc, 4, SplitRng(7));
  REQUIRE(t.size() == 3);

  Eigen::VectorXd z(2);
  z << 0.1, -0.1;
  int routed = t.route(z);
  int leaf = t.insert(8, z, 9.0);
  CHECK(leaf == routed);
  CHECK(t.root().n() == 9);
  CHECK(t.root().score_max == 9.0);
  CHECK(t.node(leaf).n() == 5);
  CHECK(t.node(leaf).score_max == 9.0);
  const auto& m = t.node(leaf).members;
  CHECK(std::find(m.begin(), m.end(), 8) != m.end());
  // The untouched sibling keeps its stats.
  int sibling = leaf == t.root().child_good ? t.root().child_bad : t.root().child_good;
  CHECK(t.node(sibling).n() == 4);
}
