#pragma once

#include <memory>
#include <vector>

#include "plalam/rng.hpp"
#include "plalam/types.hpp"

namespace plalam::theorylab {

// Tail profile of a region's value law: F(y) is the probability that a
// uniform sample lands at least y below the region optimum. Strictly
// decreasing from F(0) = 1 to F(support) = 0. Each family declares a
// dimension d and a (z, c) concentration pair its law satisfies, so the
// closed-form confidence bounds can be checked against it.
class RegionCdf {
 public:
  virtual ~RegionCdf() = default;
  virtual double value(double y) const = 0;
  virtual double support() const = 0;  // smallest y with F(y) = 0
  virtual int d() const = 0;
  virtual double ck() const = 0;
  virtual double zk() const = 0;

  // Generalized inverse inf{y : F(y) <= p}; families override with closed
  // forms where available. Out-of-range p clamps to [0, support].
  virtual double inverse(double p) const { return inverse_numeric(p); }

  // Bisection fallback, kept public so closed forms can be cross-checked.
  double inverse_numeric(double p) const;
};

// F(y) = 1 - (y/c)^d on [0, c]: the exact boundary of the concentration
// condition, so (z, c) = (0, c).
class PowerLawCdf final : public RegionCdf {
 public:
  PowerLawCdf(double c, int d);
  double value(double y) const override;
  double inverse(double p) const override;
  double support() const override { return c_; }
  int d() const override { return d_; }
  double ck() const override { return c_; }
  double zk() const override { return 0.0; }

 private:
  double c_;
  int d_;
};

// Exponential tail truncated at y_max. Convexity puts it below the chord
// 1 - y/y_max, so (z, c) = (0, y_max) with d = 1.
class TruncatedExpCdf final : public RegionCdf {
 public:
  TruncatedExpCdf(double rate, double y_max);
  double value(double y) const override;
  double inverse(double p) const override;
  double support() const override { return y_max_; }
  int d() const override { return 1; }
  double ck() const override { return y_max_; }
  double zk() const override { return 0.0; }

 private:
  double rate_;
  double y_max_;
};

// Power-law body carrying tail mass z: follows 1 - (y/c)^d until the tail
// boundary Y = c(1-z)^{1/d}, then decays linearly to zero at y_far > Y.
// Satisfies the concentration condition exactly at (z, c) and at no smaller
// pair.
class HeavyTailCdf final : public RegionCdf {
 public:
  HeavyTailCdf(double c, int d, double z, double y_far = 0.0);  // 0 = 2c
  double value(double y) const override;
  double inverse(double p) const override;
  double support() const override { return y_far_; }
  int d() const override { return d_; }
  double ck() const override { return c_; }
  double zk() const override { return z_; }
  double tail_start() const { return y_tail_; }

 private:
  double c_;
  int d_;
  double z_;
  double y_tail_;
  double y_far_;
};

struct RegionCdfSpec {
  double g_star = 0.0;  // the region's optimum
  std::shared_ptr<const RegionCdf> cdf;
};

// r = F^{-1}(delta^{1/n}): with probability 1 - delta the best of n uniform
// samples lies within r of the region optimum, exactly.
double confidence_radius(const RegionCdfSpec& spec, double delta, int n);

struct FBound {
  double lhs = 0.0;  // F^{-1}(delta^{1/j})
  double rhs = 0.0;  // c * (ln(1/delta) / j)^{1/d}
  bool holds = false;
};

// Closed-form domination of the confidence radius. Requires
// delta in [z_k, 1); below the declared tail mass the bound has no content.
FBound check_fbound(const RegionCdfSpec& spec, double delta, int j);

struct DilutionPair {
  double zk = 0.0;
  double ck = 0.0;
};

// An L-Lipschitz objective on a region of relative volume rel_volume
// (region volume over unit-ball volume) whose peak admits an inscribed ball
// of radius eps0 is (1 - eps0^d / rel_volume, L * rel_volume^{1/d})-diluted
// under uniform sampling.
DilutionPair lipschitz_to_dilution(double L, double eps0, double rel_volume,
                                   int d);

struct RegretRecord {
  int T = 0;
  int K = 0;
  double eta = 1.0;
  double delta = 0.0;   // eta / T^3
  double f_star = 0.0;  // max_k g*_k
  double M = 0.0;       // value range across all regions
  std::vector<int> choices;     // region index per step
  std::vector<double> regret;   // cumulative sum of f* - g_t(chosen region)
  std::vector<int> visits;      // per-region counts at T
  std::vector<double> gaps;     // per-region f* - g*_k
  // Reporting decomposition: regions split at delta_0 (half the largest gap),
  // c_good/c_bad the l_d norms of the declared c_k on each side.
  double delta_0 = 0.0;
  double c_good = 0.0;
  double c_bad = 0.0;
};

// Fixed-region UCB simulation: visit every region once in index order, then
// repeatedly pick argmax_k g_t(k) + F_k^{-1}(delta^{1/n_k}) (ties to the
// lower index) and sample f = g*_k - F_k^{-1}(U). Regret charges the chosen
// region's best including the fresh draw. All specs must share one d.
RegretRecord run_bandit(const std::vector<RegionCdfSpec>& specs, int T,
                        double eta, SplitRng& rng);

// As above with an explicit confidence level, for schedules other than
// eta / T^3.
RegretRecord run_bandit_delta(const std::vector<RegionCdfSpec>& specs, int T,
                              double eta, double delta, SplitRng& rng);

struct SplitResult {
  double regret_unsplit = 0.0;   // single parent region
  double regret_learned = 0.0;   // {good, bad} regions
  double regret_random = 0.0;    // two copies of the parent
};

// Mean final regret over `runs` independent simulations of each arm layout.
SplitResult split_experiment(const RegionCdfSpec& parent,
                             const RegionCdfSpec& good,
                             const RegionCdfSpec& bad, int T, double eta,
                             SplitRng& rng, int runs);

// Least-squares slope of log mean-regret against log T over the upper half
// of a (geometric) horizon grid; fresh runs per horizon since delta depends
// on T.
double regret_slope(const std::vector<RegionCdfSpec>& specs,
                    const std::vector<int>& T_grid, double eta, SplitRng& rng,
                    int runs);

}  // namespace plalam::theorylab
