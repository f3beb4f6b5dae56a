#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plalam/latent.hpp"
#include "plalam/rng.hpp"
#include "plalam/types.hpp"

namespace plalam::partition {

struct LinearBoundary {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double train_accuracy = 0.0;

  double decision(const Eigen::VectorXd& z) const { return weights.dot(z) + bias; }
  bool good_side(const Eigen::VectorXd& z) const { return decision(z) >= 0.0; }
};

struct KmeansResult {
  std::vector<int> labels;  // 1 = good cluster, 0 = bad
  Eigen::VectorXd center_good;
  Eigen::VectorXd center_bad;
};

// Lloyd's algorithm with k = 2 on value-augmented points (last coordinate is
// the scaled objective value). Seeding is deterministic: first center is the
// point farthest from the centroid, second the point farthest from the first.
// The cluster with the higher mean last coordinate is labeled good. Throws
// DegenerateCluster when all points coincide.
KmeansResult kmeans2(const Eigen::MatrixXd& points, SplitRng& rng);

// Hinge-loss linear classifier (Pegasos updates, unregularized bias,
// rng-shuffled passes). Positive decision side is the good class. Throws
// FitFailure if training ends with a zero weight vector.
LinearBoundary fit_boundary(const Eigen::MatrixXd& good, const Eigen::MatrixXd& bad,
                            SplitRng& rng);

struct RegionNode {
  int id = 0;
  int depth = 0;
  int parent = -1;
  int child_good = -1;
  int child_bad = -1;
  std::vector<int> members;  // indices into the sample set
  double score_max = -std::numeric_limits<double>::infinity();
  double score_sum = 0.0;
  LinearBoundary boundary;  // meaningful only on internal nodes

  bool is_leaf() const { return child_good < 0; }
  int n() const { return static_cast<int>(members.size()); }
  double score_mean() const { return members.empty() ? 0.0 : score_sum / n(); }
};

class PartitionTree {
public:
  PartitionTree() = default;
  explicit PartitionTree(std::vector<RegionNode> nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  bool empty() const { return nodes_.empty(); }
  const RegionNode& node(int id) const { return nodes_.at(id); }
  const RegionNode& root() const { return nodes_.at(0); }
  std::vector<int> leaf_ids() const;

  // Follow boundary decisions from the root; returns the leaf id.
  int route(const Eigen::VectorXd& z) const;

  // Attach a freshly evaluated sample: appends the index and updates counts
  // and scores along the root-to-leaf path. Returns the leaf id.
  int insert(int sample_index, const Eigen::VectorXd& z, double value);

private:
  friend PartitionTree build_partition_encoded(const Eigen::MatrixXd&,
                                               const std::vector<double>&, int,
                                               SplitRng);
  std::vector<RegionNode> nodes_;
};

// Alg. BFS splitting: every node with at least n_thres members is clustered
// into good/bad in the partition space, a linear boundary is fit, and the
// children inherit members by the boundary's decision. Any failure along the
// way (degenerate clusters, unusable fit, an empty child) leaves the node a
// leaf. Z is n x d (one encoded sample per row), values the matching
// objective values.
PartitionTree build_partition_encoded(const Eigen::MatrixXd& Z,
                                      const std::vector<double>& values,
                                      int n_thres, SplitRng rng);

PartitionTree build_partition(const std::vector<Sample>& samples,
                              const latent::PartitionEncoder& encoder, int n_thres,
                              SplitRng rng);

std::string tree_to_json(const PartitionTree& tree);
PartitionTree tree_from_json(const std::string& text);

}  // namespace plalam::partition
