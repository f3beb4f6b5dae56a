#include "plalam/theorylab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plalam::theorylab {

double RegionCdf::inverse_numeric(double p) const {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return support();
  double lo = 0.0, hi = support();
  // F is decreasing: keep F(lo) > p >= F(hi).
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, support()); ++it) {
    double mid = 0.5 * (lo + hi);
    if (value(mid) > p)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

PowerLawCdf::PowerLawCdf(double c, int d) : c_(c), d_(d) {
  if (c <= 0.0) throw ConfigError("PowerLawCdf: c must be positive");
  if (d < 1) throw ConfigError("PowerLawCdf: d must be >= 1");
}

double PowerLawCdf::value(double y) const {
  if (y <= 0.0) return 1.0;
  if (y >= c_) return 0.0;
  return 1.0 - std::pow(y / c_, d_);
}

double PowerLawCdf::inverse(double p) const {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return c_;
  return c_ * std::pow(1.0 - p, 1.0 / d_);
}

TruncatedExpCdf::TruncatedExpCdf(double rate, double y_max)
    : rate_(rate), y_max_(y_max) {
  if (rate <= 0.0) throw ConfigError("TruncatedExpCdf: rate must be positive");
  if (y_max <= 0.0) throw ConfigError("TruncatedExpCdf: y_max must be positive");
}

double TruncatedExpCdf::value(double y) const {
  if (y <= 0.0) return 1.0;
  if (y >= y_max_) return 0.0;
  double floor = std::exp(-rate_ * y_max_);
  return (std::exp(-rate_ * y) - floor) / (1.0 - floor);
}

double TruncatedExpCdf::inverse(double p) const {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return y_max_;
  double floor = std::exp(-rate_ * y_max_);
  return -std::log(p * (1.0 - floor) + floor) / rate_;
}

HeavyTailCdf::HeavyTailCdf(double c, int d, double z, double y_far)
    : c_(c), d_(d), z_(z) {
  if (c <= 0.0) throw ConfigError("HeavyTailCdf: c must be positive");
  if (d < 1) throw ConfigError("HeavyTailCdf: d must be >= 1");
  if (z <= 0.0 || z >= 1.0) throw ConfigError("HeavyTailCdf: z must be in (0, 1)");
  y_tail_ = c_ * std::pow(1.0 - z_, 1.0 / d_);
  y_far_ = y_far > 0.0 ? y_far : 2.0 * c_;
  if (y_far_ <= y_tail_) throw ConfigError("HeavyTailCdf: y_far must exceed the tail start");
}

double HeavyTailCdf::value(double y) const {
  if (y <= 0.0) return 1.0;
  if (y >= y_far_) return 0.0;
  if (y <= y_tail_) return 1.0 - std::pow(y / c_, d_);
  return z_ * (y_far_ - y) / (y_far_ - y_tail_);
}

double HeavyTailCdf::inverse(double p) const {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return y_far_;
  if (p >= z_) return c_ * std::pow(1.0 - p, 1.0 / d_);
  return y_far_ - p / z_ * (y_far_ - y_tail_);
}

namespace {

void check_spec(const RegionCdfSpec& spec) {
  if (!spec.cdf) throw ConfigError("region spec has no tail profile");
}

}  // namespace

double confidence_radius(const RegionCdfSpec& spec, double delta, int n) {
  check_spec(spec);
  if (delta <= 0.0 || delta >= 1.0)
    throw ConfigError("confidence_radius: delta must be in (0, 1)");
  if (n < 1) throw ConfigError("confidence_radius: n must be >= 1");
  return spec.cdf->inverse(std::pow(delta, 1.0 / n));
}

FBound check_fbound(const RegionCdfSpec& spec, double delta, int j) {
  check_spec(spec);
  if (j < 1) throw ConfigError("check_fbound: j must be >= 1");
  if (delta >= 1.0) throw ConfigError("check_fbound: delta must be below 1");
  if (delta < spec.cdf->zk())
    throw EstimateError("check_fbound: delta below the declared tail mass");
  FBound out;
  out.lhs = spec.cdf->inverse(std::pow(delta, 1.0 / j));
  out.rhs = spec.cdf->ck() *
            std::pow(std::log(1.0 / delta) / j, 1.0 / spec.cdf->d());
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

DilutionPair lipschitz_to_dilution(double L, double eps0, double rel_volume,
                                   int d) {
  if (L < 0.0) throw ConfigError("lipschitz_to_dilution: L must be >= 0");
  if (eps0 <= 0.0) throw ConfigError("lipschitz_to_dilution: eps0 must be positive");
  if (d < 1) throw ConfigError("lipschitz_to_dilution: d must be >= 1");
  double ball = std::pow(eps0, d);
  if (rel_volume < ball)
    throw ConfigError("lipschitz_to_dilution: region smaller than the inscribed ball");
  return {1.0 - ball / rel_volume, L * std::pow(rel_volume, 1.0 / d)};
}

RegretRecord run_bandit_delta(const std::vector<RegionCdfSpec>& specs, int T,
                              double eta, double delta, SplitRng& rng) {
  const int K = static_cast<int>(specs.size());
  if (K < 1) throw ConfigError("run_bandit: need at least one region");
  if (T < K) throw ConfigError("run_bandit: T must be >= the region count");
  if (delta <= 0.0 || delta >= 1.0)
    throw ConfigError("run_bandit: delta must be in (0, 1)");
  for (const auto& s : specs) check_spec(s);
  const int d0 = specs[0].cdf->d();
  for (const auto& s : specs)
    if (s.cdf->d() != d0)
      throw ConfigError("run_bandit: regions must share one dimension");

  RegretRecord rec;
  rec.T = T;
  rec.K = K;
  rec.eta = eta;
  rec.delta = delta;

  double lowest = std::numeric_limits<double>::infinity();
  rec.f_star = -lowest;
  for (const auto& s : specs) {
    rec.f_star = std::max(rec.f_star, s.g_star);
    lowest = std::min(lowest, s.g_star - s.cdf->support());
  }
  rec.M = rec.f_star - lowest;
  for (const auto& s : specs) rec.gaps.push_back(rec.f_star - s.g_star);

  // Reporting decomposition at half the largest gap (any positive threshold
  // yields a valid split; this one is deterministic and scale-free).
  double max_gap = *std::max_element(rec.gaps.begin(), rec.gaps.end());
  rec.delta_0 = max_gap > 0.0 ? 0.5 * max_gap : 1.0;
  double good = 0.0, bad = 0.0;
  for (int k = 0; k < K; ++k) {
    double cd = std::pow(specs[k].cdf->ck(), d0);
    (rec.gaps[k] <= rec.delta_0 ? good : bad) += cd;
  }
  rec.c_good = std::pow(good, 1.0 / d0);
  rec.c_bad = bad > 0.0 ? std::pow(bad, 1.0 / d0) : 0.0;

  std::vector<double> g(K, -std::numeric_limits<double>::infinity());
  rec.visits.assign(K, 0);
  rec.choices.reserve(T);
  rec.regret.reserve(T);
  double cum = 0.0;

  auto pull = [&](int k) {
    double f = specs[k].g_star - specs[k].cdf->inverse(rng.uniform());
    rec.visits[k] += 1;
    g[k] = std::max(g[k], f);
    cum += rec.f_star - g[k];
    rec.choices.push_back(k);
    rec.regret.push_back(cum);
  };

  for (int k = 0; k < K; ++k) pull(k);
  for (int t = K; t < T; ++t) {
    int pick = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      double r = specs[k].cdf->inverse(std::pow(delta, 1.0 / rec.visits[k]));
      double score = g[k] + r;
      if (score > best) {
        best = score;
        pick = k;
      }
    }
    pull(pick);
  }
  return rec;
}

RegretRecord run_bandit(const std::vector<RegionCdfSpec>& specs, int T,
                        double eta, SplitRng& rng) {
  double delta = eta / (static_cast<double>(T) * T * T);
  return run_bandit_delta(specs, T, eta, delta, rng);
}

SplitResult split_experiment(const RegionCdfSpec& parent,
                             const RegionCdfSpec& good,
                             const RegionCdfSpec& bad, int T, double eta,
                             SplitRng& rng, int runs) {
  if (runs < 1) throw ConfigError("split_experiment: runs must be >= 1");
  SplitResult out;
  std::vector<RegionCdfSpec> unsplit{parent};
  std::vector<RegionCdfSpec> learned{good, bad};
  std::vector<RegionCdfSpec> random{parent, parent};
  for (int r = 0; r < runs; ++r) {
    out.regret_unsplit += run_bandit(unsplit, T, eta, rng).regret.back();
    out.regret_learned += run_bandit(learned, T, eta, rng).regret.back();
    out.regret_random += run_bandit(random, T, eta, rng).regret.back();
  }
  out.regret_unsplit /= runs;
  out.regret_learned /= runs;
  out.regret_random /= runs;
  return out;
}

double regret_slope(const std::vector<RegionCdfSpec>& specs,
                    const std::vector<int>& T_grid, double eta, SplitRng& rng,
                    int runs) {
  if (T_grid.size() < 2) throw ConfigError("regret_slope: need at least two horizons");
  if (runs < 1) throw ConfigError("regret_slope: runs must be >= 1");
  std::vector<double> xs, ys;
  std::size_t start = T_grid.size() >= 4 ? T_grid.size() / 2 : 0;
  for (std::size_t i = start; i < T_grid.size(); ++i) {
    double mean = 0.0;
    for (int r = 0; r < runs; ++r)
      mean += run_bandit(specs, T_grid[i], eta, rng).regret.back();
    mean /= runs;
    if (mean <= 0.0) throw EstimateError("regret_slope: mean regret vanished");
    xs.push_back(std::log(static_cast<double>(T_grid[i])));
    ys.push_back(std::log(mean));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx <= 0.0) throw EstimateError("regret_slope: degenerate horizon grid");
  return sxy / sxx;
}

}  // namespace plalam::theorylab
