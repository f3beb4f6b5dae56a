#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "plalam/latent.hpp"
#include "plalam/oracle.hpp"
#include "plalam/partition.hpp"
#include "plalam/rng.hpp"
#include "plalam/types.hpp"

namespace plalam::search {

using partition::PartitionTree;
using partition::RegionNode;

enum class NodeScore { max, mean };
enum class Descend { tree_ucb, flat_leaf_ucb, tree_greedy };

struct SearchVariant {
  NodeScore score = NodeScore::max;
  Descend descend = Descend::tree_ucb;
};

// Scoring/descent rules for the four tree methods; ConfigError otherwise.
SearchVariant variant_for(Method m);

// score + cp * sqrt(2 ln(n_parent) / n_child); unvisited children rank first.
double ucb(double node_score, int n_child, int n_parent, double cp);

// Leaf choice for one proposal round. tree_ucb descends from the root picking
// the child with the higher UCB against the parent count, flat_leaf_ucb
// scores every leaf against the root count, tree_greedy descends on node
// score alone. Ties go to the good child, then the lower id.
int select_leaf(const PartitionTree& tree, SearchVariant variant, double cp);

struct Proposal {
  Eigen::VectorXd x;      // decoded candidate, clamped to bounds when present
  int rejections = 0;     // draws that routed outside the target leaf
  bool in_region = true;  // false when every retry missed and the last draw
                          // was kept anyway
};

// One candidate for `leaf`: a fresh CMA-ES distribution is moment-matched to
// the member codec encodings, draws are decoded, clamped, and membership
// checked by routing their partition features; after max_retries misses the
// final draw is accepted regardless.
Proposal propose_in_leaf(const PartitionTree& tree, int leaf,
                         const std::vector<Sample>& samples,
                         const latent::LatentCodec& codec,
                         const latent::PartitionEncoder& encoder,
                         const std::optional<BoxBounds>& bounds, SplitRng& rng,
                         double sigma_mult = 1.0, double sigma_floor = 1e-3,
                         int max_retries = 20);

// Minimal tail mass of the rebuild window at fixed concentration scales,
// one record per rebuild.
struct ZkPoint {
  int eval_index = 0;      // samples seen when the rebuild ran
  std::vector<double> zk;  // one entry per requested scale
};

struct PlalamOptions {
  double init_sigma = 1.0;  // warm-start spread when the problem is unbounded
  double sigma_mult = 1.0;  // leaf proposal step-size multiplier
  double sigma_floor = 1e-3;
  int max_retries = 20;
  std::vector<double> zk_scales;  // record window tail mass at these scales
  bool keep_tree = false;
  bool keep_zs = false;
};

struct PlalamArtifacts {
  std::vector<ZkPoint> zk_series;
  std::vector<int> rebuild_indices;         // sample counts at each rebuild
  std::optional<PartitionTree> final_tree;  // when keep_tree
  Eigen::MatrixXd z_s;                      // n x encoder dim, when keep_zs
};

// Latent-space tree search: n_init warm-start draws, then a partition rebuilt
// (and codec refit) every n_par evaluations with UCB-guided leaf proposals in
// between. Every sample is inserted into the live tree, so path statistics
// stay current between rebuilds. Consumes the oracle budget exactly; rebuilds
// are query-free.
RunRecord run_plalam(CountingOracle& oracle, const SearchBudget& budget,
                     SearchVariant variant, latent::LatentCodec& codec,
                     const latent::PartitionEncoder& encoder, SplitRng& rng,
                     const PlalamOptions& opts = {},
                     PlalamArtifacts* artifacts = nullptr);

}  // namespace plalam::search
