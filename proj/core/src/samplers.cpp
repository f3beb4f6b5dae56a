#include "plalam/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace plalam::samplers {

namespace {

int default_lambda(int n) {
  return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(n))));
}

Eigen::VectorXd start_mean(const CountingOracle& oracle, const SamplerParams& params) {
  if (params.mean0.size() > 0) {
    if (params.mean0.size() != oracle.dim())
      throw ConfigError("mean0 dimension mismatch");
    return params.mean0;
  }
  if (oracle.bounds())
    return 0.5 * (oracle.bounds()->lo + oracle.bounds()->hi);
  return Eigen::VectorXd::Zero(oracle.dim());
}

void push_sample(RunRecord& rec, Sample s) {
  rec.best_curve.push_back(rec.best_curve.empty()
                               ? s.value
                               : std::max(rec.best_curve.back(), s.value));
  rec.samples.push_back(std::move(s));
}

// Indices of `values` sorted by value descending, ties by original order.
std::vector<int> rank_desc(const std::vector<double>& values) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  return idx;
}

}  // namespace

CmaesState::CmaesState(Eigen::VectorXd mean, double sigma, int lambda)
    : mean_(std::move(mean)), sigma_(sigma) {
  const int n = static_cast<int>(mean_.size());
  if (n < 1) throw ConfigError("cmaes: empty mean");
  if (!(sigma_ > 0.0)) throw ConfigError("cmaes: sigma must be positive");
  lambda_ = lambda > 0 ? lambda : default_lambda(n);
  if (lambda_ < 2) throw ConfigError("cmaes: lambda must be >= 2");
  mu_ = lambda_ / 2;

  weights_.resize(mu_);
  for (int i = 0; i < mu_; ++i)
    weights_[i] = std::log((lambda_ + 1) / 2.0) - std::log(i + 1.0);
  weights_ /= weights_.sum();
  mueff_ = 1.0 / weights_.squaredNorm();

  cs_ = (mueff_ + 2.0) / (n + mueff_ + 5.0);
  ds_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff_ - 1.0) / (n + 1.0)) - 1.0) + cs_;
  cc_ = (4.0 + mueff_ / n) / (n + 4.0 + 2.0 * mueff_ / n);
  c1_ = 2.0 / ((n + 1.3) * (n + 1.3) + mueff_);
  cmu_ = std::min(1.0 - c1_, 2.0 * (mueff_ - 2.0 + 1.0 / mueff_) /
                                 ((n + 2.0) * (n + 2.0) + mueff_));
  chi_n_ = std::sqrt(static_cast<double>(n)) *
           (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  C_ = Eigen::MatrixXd::Identity(n, n);
  B_ = Eigen::MatrixXd::Identity(n, n);
  D_ = Eigen::VectorXd::Ones(n);
  p_sigma_ = Eigen::VectorXd::Zero(n);
  p_c_ = Eigen::VectorXd::Zero(n);
  eigen_interval_ = std::max(1, static_cast<int>(1.0 / (10.0 * n * (c1_ + cmu_))));
}

CmaesState CmaesState::seed_from_samples(const Eigen::MatrixXd& points,
                                         double sigma_mult, double sigma_floor,
                                         int lambda) {
  if (points.rows() < 1 || points.cols() < 1)
    throw ConfigError("cmaes: seed_from_samples needs at least one point");
  const int n = static_cast<int>(points.cols());
  Eigen::VectorXd mean = points.colwise().mean();
  Eigen::VectorXd sd = Eigen::VectorXd::Zero(n);
  if (points.rows() >= 2) {
    Eigen::MatrixXd centered = points.rowwise() - mean.transpose();
    sd = (centered.array().square().colwise().sum() / (points.rows() - 1.0))
             .sqrt()
             .matrix();
  }
  CmaesState st(std::move(mean), 1.0, lambda);
  for (int i = 0; i < n; ++i) {
    double s = std::max(sd[i] * sigma_mult, sigma_floor);
    st.D_[i] = s;
    st.C_(i, i) = s * s;
  }
  // B_ stays identity: the seeded covariance is diagonal by construction.
  return st;
}

Eigen::MatrixXd CmaesState::ask(SplitRng& rng) {
  const int n = dim();
  Eigen::MatrixXd xs(lambda_, n);
  for (int k = 0; k < lambda_; ++k) xs.row(k) = ask_one(rng).transpose();
  return xs;
}

Eigen::VectorXd CmaesState::ask_one(SplitRng& rng) {
  const int n = dim();
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = rng.normal();
  return mean_ + sigma_ * (B_ * (D_.asDiagonal() * z));
}

void CmaesState::tell(const Eigen::MatrixXd& xs, const std::vector<double>& values) {
  const int n = dim();
  if (xs.rows() != lambda_ || xs.cols() != n)
    throw ConfigError("cmaes: tell expects lambda full-dimension candidates");
  if (static_cast<int>(values.size()) != lambda_)
    throw ConfigError("cmaes: tell values size mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw ConfigError("cmaes: non-finite value in tell");

  const std::vector<int> order = rank_desc(values);

  const Eigen::VectorXd mean_old = mean_;
  Eigen::VectorXd mean_new = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < mu_; ++i)
    mean_new += weights_[i] * xs.row(order[i]).transpose();

  const Eigen::VectorXd y_w = (mean_new - mean_old) / sigma_;
  // C^{-1/2} y_w via the cached eigendecomposition.
  const Eigen::VectorXd c_inv_sqrt_y =
      B_ * (D_.cwiseInverse().asDiagonal() * (B_.transpose() * y_w));

  p_sigma_ = (1.0 - cs_) * p_sigma_ +
             std::sqrt(cs_ * (2.0 - cs_) * mueff_) * c_inv_sqrt_y;
  const double ps_norm = p_sigma_.norm();
  const double denom = std::sqrt(1.0 - std::pow(1.0 - cs_, 2.0 * (gen_ + 1)));
  const bool h_sigma = ps_norm / denom < (1.4 + 2.0 / (n + 1.0)) * chi_n_;

  p_c_ = (1.0 - cc_) * p_c_;
  if (h_sigma) p_c_ += std::sqrt(cc_ * (2.0 - cc_) * mueff_) * y_w;

  Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < mu_; ++i) {
    const Eigen::VectorXd y = (xs.row(order[i]).transpose() - mean_old) / sigma_;
    rank_mu.noalias() += weights_[i] * (y * y.transpose());
  }
  const double delta_h = h_sigma ? 0.0 : cc_ * (2.0 - cc_);
  C_ = (1.0 - c1_ - cmu_) * C_ +
       c1_ * (p_c_ * p_c_.transpose() + delta_h * C_) + cmu_ * rank_mu;

  sigma_ *= std::exp((cs_ / ds_) * (ps_norm / chi_n_ - 1.0));
  mean_ = mean_new;
  ++gen_;

  if (gen_ - last_eigen_gen_ >= eigen_interval_) refresh_eigen();
}

void CmaesState::refresh_eigen() {
  C_ = 0.5 * (C_ + C_.transpose());
  if (!C_.allFinite()) throw FitFailure("cmaes: covariance diverged");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C_);
  if (es.info() != Eigen::Success) throw FitFailure("cmaes: eigensolve failed");
  Eigen::VectorXd evals = es.eigenvalues();
  const double floor = std::max(evals.maxCoeff(), 1e-30) * 1e-14;
  bool repaired = false;
  for (int i = 0; i < evals.size(); ++i) {
    if (evals[i] < floor) {
      evals[i] = floor;
      repaired = true;
    }
  }
  B_ = es.eigenvectors();
  D_ = evals.cwiseSqrt();
  if (repaired)
    C_ = B_ * evals.asDiagonal() * B_.transpose();
  last_eigen_gen_ = gen_;
}

std::vector<Sample> cem_step(CemState& state, CountingOracle& oracle, SplitRng& rng) {
  if (state.population < 1 || state.elites < 1 || state.elites > state.population)
    throw ConfigError("cem: need 1 <= elites <= population");
  if (state.stddev.size() != state.mean.size() || state.mean.size() != oracle.dim())
    throw ConfigError("cem: state dimension mismatch");

  const int k = std::min<long long>(state.population, oracle.remaining());
  std::vector<Sample> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd x = state.mean;
    for (int j = 0; j < x.size(); ++j) x[j] += state.stddev[j] * rng.normal();
    x = oracle.clamp(x);
    Sample s;
    s.x = x;
    s.eval_index = static_cast<int>(oracle.used());
    s.value = oracle.evaluate(x);
    out.push_back(std::move(s));
  }
  if (k == state.population) {
    std::vector<double> values(out.size());
    for (size_t i = 0; i < out.size(); ++i) values[i] = out[i].value;
    const std::vector<int> order = rank_desc(values);
    Eigen::VectorXd elite_mean = Eigen::VectorXd::Zero(state.mean.size());
    for (int i = 0; i < state.elites; ++i) elite_mean += out[order[i]].x;
    state.mean = elite_mean / state.elites;
  }
  return out;
}

RunRecord run_cem(CountingOracle& oracle, const SamplerParams& params, SplitRng& rng) {
  CemState state;
  state.mean = start_mean(oracle, params);
  state.stddev = Eigen::VectorXd::Constant(oracle.dim(), params.sigma);
  state.population = params.population;
  state.elites = params.elites;

  RunRecord rec;
  while (oracle.remaining() > 0) {
    std::vector<Sample> gen = cem_step(state, oracle, rng);
    for (auto& s : gen) push_sample(rec, std::move(s));
  }
  return rec;
}

RunRecord run_cmaes(CountingOracle& oracle, const SamplerParams& params, SplitRng& rng) {
  CmaesState state(start_mean(oracle, params), params.sigma, params.lambda);

  RunRecord rec;
  while (oracle.remaining() > 0) {
    const Eigen::MatrixXd xs = state.ask(rng);
    const int k = std::min<long long>(state.lambda(), oracle.remaining());
    std::vector<double> values;
    values.reserve(k);
    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd x = oracle.clamp(xs.row(i).transpose());
      Sample s;
      s.x = x;
      s.eval_index = static_cast<int>(oracle.used());
      s.value = oracle.evaluate(x);
      values.push_back(s.value);
      push_sample(rec, std::move(s));
    }
    // Final short generation just spends the tail of the budget.
    if (k == state.lambda()) state.tell(xs, values);
  }
  return rec;
}

RunRecord run_random_shooting(CountingOracle& oracle, const SamplerParams& params,
                              SplitRng& rng) {
  RunRecord rec;
  const int n = oracle.dim();
  while (oracle.remaining() > 0) {
    Eigen::VectorXd x(n);
    if (oracle.bounds()) {
      const auto& b = *oracle.bounds();
      for (int i = 0; i < n; ++i) x[i] = b.lo[i] + (b.hi[i] - b.lo[i]) * rng.uniform();
    } else {
      for (int i = 0; i < n; ++i) x[i] = params.sigma * rng.normal();
    }
    Sample s;
    s.x = x;
    s.eval_index = static_cast<int>(oracle.used());
    s.value = oracle.evaluate(x);
    push_sample(rec, std::move(s));
  }
  return rec;
}

}  // namespace plalam::samplers
