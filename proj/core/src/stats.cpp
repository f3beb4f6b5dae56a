#include "plalam/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace plalam::stats {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty vector");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double sem(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

namespace {

// Continued fraction for the regularized incomplete beta function.
double betacf(double a, double b, double x) {
  const int max_iter = 300;
  const double eps = 3e-14;
  const double fpmin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  double bt = std::exp(lbeta + a * std::log(x) + b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

std::vector<double> midranks(const std::vector<double>& xs) {
  size_t n = xs.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
    double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double student_t_cdf(double t, double df) {
  if (df <= 0.0) throw std::invalid_argument("student_t_cdf: df must be positive");
  double x = df / (df + t * t);
  double p = 0.5 * betai(0.5 * df, 0.5, x);
  return t >= 0.0 ? 1.0 - p : p;
}

double binom_tail_p(int k, int n, double p0) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("binom_tail_p: bad k/n");
  if (p0 <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p0 >= 1.0) return 1.0;
  double tail = 0.0;
  double lp = std::log(p0), lq = std::log1p(-p0);
  for (int i = k; i <= n; ++i) {
    double lc = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
    tail += std::exp(lc + i * lp + (n - i) * lq);
  }
  return std::min(1.0, tail);
}

double welch_one_sided_p(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2 || ys.size() < 2)
    throw std::invalid_argument("welch_one_sided_p: need at least 2 samples per group");
  double nx = static_cast<double>(xs.size()), ny = static_cast<double>(ys.size());
  double vx = sample_sd(xs), vy = sample_sd(ys);
  vx *= vx;
  vy *= vy;
  double se2 = vx / nx + vy / ny;
  if (se2 <= 0.0) return mean(xs) > mean(ys) ? 0.0 : 1.0;
  double t = (mean(xs) - mean(ys)) / std::sqrt(se2);
  double df = se2 * se2 /
              (vx * vx / (nx * nx * (nx - 1.0)) + vy * vy / (ny * ny * (ny - 1.0)));
  return 1.0 - student_t_cdf(t, df);
}

double spearman_trend_p(const std::vector<std::pair<double, double>>& pairs) {
  size_t n = pairs.size();
  if (n < 3) throw std::invalid_argument("spearman_trend_p: need at least 3 pairs");
  std::vector<double> a(n), b(n);
  for (size_t i = 0; i < n; ++i) {
    a[i] = pairs[i].first;
    b[i] = pairs[i].second;
  }
  double rho = pearson(midranks(a), midranks(b));
  rho = std::clamp(rho, -0.999999999, 0.999999999);
  double df = static_cast<double>(n) - 2.0;
  double t = rho * std::sqrt(df / (1.0 - rho * rho));
  return student_t_cdf(t, df);  // P[T <= t]: small iff trend is negative
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ls_slope: need matching vectors of size >= 2");
  double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx <= 0.0) throw std::invalid_argument("ls_slope: degenerate x");
  return sxy / sxx;
}

}  // namespace plalam::stats
