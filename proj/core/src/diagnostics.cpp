#include "plalam/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plalam/types.hpp"

namespace plalam::diagnostics {

namespace {

std::vector<double> sorted_gaps(const std::vector<double>& values) {
  double g_star = *std::max_element(values.begin(), values.end());
  std::vector<double> gaps(values.size());
  for (size_t i = 0; i < values.size(); ++i) gaps[i] = g_star - values[i];
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}

// Whether F(y) <= 1 - (y/c)^d holds over [0, c*(1-z)^(1/d)] for the
// empirical CDF of the (ascending) gaps.
bool dilution_holds(const std::vector<double>& gaps, double c, double z, int d) {
  const size_t n = gaps.size();
  if (c <= 0.0) return gaps.back() <= 0.0;
  const double y_end = c * std::pow(1.0 - z, 1.0 / d);
  for (size_t i = 0; i < n; ++i) {
    double y = gaps[i];
    if (y <= 0.0) continue;
    if (y > y_end) break;
    if (i > 0 && gaps[i - 1] == y) continue;  // first occurrence counts all ties
    double fhat = static_cast<double>(n - i) / n;  // #{gap_j >= y} / n
    if (fhat > 1.0 - std::pow(y / c, d) + 1e-12) return false;
  }
  size_t tail = n - (std::lower_bound(gaps.begin(), gaps.end(), y_end) - gaps.begin());
  return static_cast<double>(tail) <= z * n + 1e-9;
}

void check_dilution_inputs(const std::vector<double>& values, int d) {
  if (values.size() < 2)
    throw EstimateError("dilution estimate needs at least two samples");
  if (d < 1) throw EstimateError("dilution dimension must be >= 1");
  for (double v : values)
    if (!std::isfinite(v)) throw EstimateError("non-finite value");
}

}  // namespace

double estimate_lipschitz(const Eigen::MatrixXd& X, const std::vector<double>& values) {
  if (X.rows() < 2 || static_cast<size_t>(X.rows()) != values.size())
    throw EstimateError("lipschitz estimate needs >= 2 aligned samples");
  double best = 0.0;
  bool any = false;
  for (int i = 0; i < X.rows(); ++i)
    for (int j = i + 1; j < X.rows(); ++j) {
      double dist = (X.row(i) - X.row(j)).norm();
      if (dist < 1e-12) continue;
      any = true;
      best = std::max(best, std::abs(values[i] - values[j]) / dist);
    }
  if (!any) throw EstimateError("all sample positions identical");
  return best;
}

double estimate_ck(const std::vector<double>& values, int d, double z) {
  check_dilution_inputs(values, d);
  if (z < 0.0 || z >= 1.0) throw EstimateError("z must lie in [0, 1)");
  std::vector<double> gaps = sorted_gaps(values);
  if (gaps.back() <= 0.0) return 0.0;

  double hi = gaps.back() / std::pow(1.0 - z, 1.0 / d);
  int guard = 0;
  while (!dilution_holds(gaps, hi, z, d)) {
    hi *= 2.0;
    if (++guard > 200) throw EstimateError("no feasible dilution scale found");
  }
  double lo = 0.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-6 * hi; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (dilution_holds(gaps, mid, z, d))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double estimate_zk(const std::vector<double>& values, double c_k, int d) {
  check_dilution_inputs(values, d);
  if (c_k <= 0.0) throw EstimateError("z estimate needs a positive scale");
  std::vector<double> gaps = sorted_gaps(values);
  const size_t n = gaps.size();
  for (size_t k = 0; k <= n; ++k) {
    double z = static_cast<double>(k) / n;
    if (z < 1.0 && dilution_holds(gaps, c_k, z, d)) return z;
  }
  return 1.0;
}

DilutionEstimate estimate_dilution(const Eigen::MatrixXd& X,
                                   const std::vector<double>& values) {
  DilutionEstimate est;
  est.d = static_cast<int>(X.cols());
  est.n_samples = static_cast<int>(X.rows());
  est.l_k = estimate_lipschitz(X, values);
  est.c_k = estimate_ck(values, est.d);
  est.z_k = est.c_k > 0.0 ? estimate_zk(values, est.c_k, est.d) : 0.0;
  return est;
}

namespace {

struct RegionMetric {
  double l = 0.0;
  double c = 0.0;
};

RegionMetric region_metric(const Eigen::MatrixXd& Z, const std::vector<double>& values,
                           const std::vector<int>& members, int d) {
  if (members.size() < 2) return {0.0, 0.0};  // trivially concentrated
  Eigen::MatrixXd X(members.size(), Z.cols());
  std::vector<double> vals(members.size());
  for (size_t i = 0; i < members.size(); ++i) {
    X.row(i) = Z.row(members[i]);
    vals[i] = values[members[i]];
  }
  RegionMetric m;
  try {
    m.l = estimate_lipschitz(X, vals);
  } catch (const EstimateError&) {
    m.l = 0.0;  // identical positions: no slope evidence
  }
  m.c = estimate_ck(vals, d);
  return m;
}

}  // namespace

PartitionComparison compare_random_partition(const PartitionTree& tree,
                                             const Eigen::MatrixXd& Z,
                                             const std::vector<double>& values,
                                             SplitRng& rng, int trials) {
  if (trials < 1) throw EstimateError("comparison needs at least one trial");
  const int d = static_cast<int>(Z.cols());
  PartitionComparison out;
  int l_wins = 0, c_wins = 0;
  for (int id = 0; id < tree.size(); ++id) {
    const RegionNode& node = tree.node(id);
    if (node.is_leaf()) continue;
    const RegionNode& good = tree.node(node.child_good);
    const RegionNode& bad = tree.node(node.child_bad);

    RegionMetric gm = region_metric(Z, values, good.members, d);
    RegionMetric bm = region_metric(Z, values, bad.members, d);
    PartitionComparison::NodeRow row;
    row.node_id = id;
    row.learned_l = 0.5 * (gm.l + bm.l);
    row.learned_c = 0.5 * (gm.c + bm.c);

    std::vector<int> pool = node.members;
    const size_t n_good = good.members.size();
    double rl = 0.0, rc = 0.0;
    for (int t = 0; t < trials; ++t) {
      for (size_t i = pool.size(); i > 1; --i)
        std::swap(pool[i - 1], pool[rng.uniform_int(i)]);
      std::vector<int> side_a(pool.begin(), pool.begin() + n_good);
      std::vector<int> side_b(pool.begin() + n_good, pool.end());
      RegionMetric am = region_metric(Z, values, side_a, d);
      RegionMetric bm2 = region_metric(Z, values, side_b, d);
      rl += 0.5 * (am.l + bm2.l);
      rc += 0.5 * (am.c + bm2.c);
    }
    row.random_l = rl / trials;
    row.random_c = rc / trials;

    if (row.learned_l < row.random_l) ++l_wins;
    if (row.learned_c < row.random_c) ++c_wins;
    out.mean_learned_l += row.learned_l;
    out.mean_random_l += row.random_l;
    out.mean_learned_c += row.learned_c;
    out.mean_random_c += row.random_c;
    out.rows.push_back(row);
  }
  out.n_internal = static_cast<int>(out.rows.size());
  if (out.n_internal > 0) {
    out.frac_l_better = static_cast<double>(l_wins) / out.n_internal;
    out.frac_c_better = static_cast<double>(c_wins) / out.n_internal;
    out.mean_learned_l /= out.n_internal;
    out.mean_random_l /= out.n_internal;
    out.mean_learned_c /= out.n_internal;
    out.mean_random_c /= out.n_internal;
  }
  return out;
}

}  // namespace plalam::diagnostics
