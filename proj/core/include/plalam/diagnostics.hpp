#pragma once

#include <vector>

#include <Eigen/Core>

#include "plalam/partition.hpp"
#include "plalam/rng.hpp"

namespace plalam::diagnostics {

using partition::PartitionTree;
using partition::RegionNode;

struct DilutionEstimate {
  double l_k = 0.0;
  double c_k = 0.0;
  double z_k = 0.0;
  int d = 1;
  int n_samples = 0;
};

// Max pairwise |f_i - f_j| / ||x_i - x_j|| over sample rows; pairs closer
// than 1e-12 are skipped. Throws EstimateError when every position
// coincides.
double estimate_lipschitz(const Eigen::MatrixXd& X, const std::vector<double>& values);

// Minimal scale c such that the empirical value CDF satisfies
// F(y) <= 1 - (y/c)^d for gaps y = g* - f on [0, c*(1-z)^(1/d)], where g* is
// the best sample value. The empirical CDF F(y) = #{f_i <= g* - y}/n is a
// left-continuous step function; the inequality is checked at every distinct
// gap inside the interval (the right limit of each constant piece) and the
// tail mass at the interval end must not exceed z. Bisection to relative
// tolerance 1e-6; all-equal values give 0.
double estimate_ck(const std::vector<double>& values, int d, double z = 0.5);

// Minimal z on the grid {0, 1/n, ..., 1} making the same inequality hold for
// a fixed scale c_k.
double estimate_zk(const std::vector<double>& values, double c_k, int d);

DilutionEstimate estimate_dilution(const Eigen::MatrixXd& X,
                                   const std::vector<double>& values);

struct PartitionComparison {
  struct NodeRow {
    int node_id = 0;
    double learned_l = 0.0;
    double random_l = 0.0;
    double learned_c = 0.0;
    double random_c = 0.0;
  };
  std::vector<NodeRow> rows;  // one per internal node
  int n_internal = 0;
  // Fraction of internal nodes where the learned split's child average is
  // strictly below the random-split average; 0.5 when there are no internal
  // nodes.
  double frac_l_better = 0.5;
  double frac_c_better = 0.5;
  double mean_learned_l = 0.0;
  double mean_random_l = 0.0;
  double mean_learned_c = 0.0;
  double mean_random_c = 0.0;
};

// For every internal node: average the children's Lipschitz and dilution
// scales, against the same averages over `trials` random splits of the
// node's members at the learned good/bad size ratio. Z holds the
// partition-space coordinates of all samples (row = sample index used in the
// tree); the dilution dimension is Z's column count. Regions with fewer than
// two members count as perfectly concentrated (0, 0) on both sides.
PartitionComparison compare_random_partition(const PartitionTree& tree,
                                             const Eigen::MatrixXd& Z,
                                             const std::vector<double>& values,
                                             SplitRng& rng, int trials);

}  // namespace plalam::diagnostics
