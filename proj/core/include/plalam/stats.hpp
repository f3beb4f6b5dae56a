#pragma once

#include <utility>
#include <vector>

namespace plalam::stats {

double mean(const std::vector<double>& xs);
double sample_sd(const std::vector<double>& xs);  // n-1 denominator
double sem(const std::vector<double>& xs);        // sample_sd / sqrt(n)

double normal_cdf(double z);
double student_t_cdf(double t, double df);

// P[X >= k] for X ~ Binomial(n, p0), exact in log space.
double binom_tail_p(int k, int n, double p0);

// One-sided Welch test, H1: mean(xs) > mean(ys).
double welch_one_sided_p(const std::vector<double>& xs, const std::vector<double>& ys);

// One-sided Spearman rank test on (t, y) pairs, H1: decreasing trend.
// Midranks for ties, Student-t approximation for the null.
double spearman_trend_p(const std::vector<std::pair<double, double>>& pairs);

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace plalam::stats
