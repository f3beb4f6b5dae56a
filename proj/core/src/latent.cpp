#include "plalam/latent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "plalam/rng.hpp"

namespace plalam::latent {

std::vector<double> rank_weights(const std::vector<double>& values, double beta) {
  size_t n = values.size();
  if (n == 0) throw ConfigError("rank_weights: empty values");
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });

  std::vector<double> pct(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    double midrank = 0.5 * static_cast<double>(i + j);
    double p = n > 1 ? midrank / static_cast<double>(n - 1) : 1.0;
    for (size_t k = i; k <= j; ++k) pct[idx[k]] = p;
    i = j + 1;
  }

  std::vector<double> w(n);
  double total = 0.0;
  for (size_t k = 0; k < n; ++k) {
    w[k] = std::exp(beta * pct[k]);
    total += w[k];
  }
  for (double& x : w) x /= total;
  return w;
}

WeightedPca fit_weighted_pca(const Eigen::MatrixXd& X,
                             const std::vector<double>& weights, int latent_dim) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n < 1) throw ConfigError("fit_weighted_pca: no samples");
  if (static_cast<Eigen::Index>(weights.size()) != n)
    throw ConfigError("fit_weighted_pca: weights/sample count mismatch");
  if (latent_dim < 1 || latent_dim > d)
    throw ConfigError("fit_weighted_pca: latent_dim out of range");

  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("fit_weighted_pca: negative weight");
    wsum += w;
  }
  if (wsum <= 0.0) throw ConfigError("fit_weighted_pca: weights sum to zero");

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) mean += weights[i] * X.row(i).transpose();
  mean /= wsum;

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd c = X.row(i).transpose() - mean;
    cov.noalias() += weights[i] * c * c.transpose();
  }
  cov /= wsum;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  Eigen::VectorXd evals = solver.eigenvalues();   // ascending
  Eigen::MatrixXd evecs = solver.eigenvectors();

  WeightedPca out;
  out.mean = mean;
  out.components = Eigen::MatrixXd::Zero(latent_dim, d);
  out.eigenvalues = Eigen::VectorXd::Zero(latent_dim);

  const double rank_eps = 1e-12 * std::max(1.0, evals.cwiseAbs().maxCoeff());
  for (int k = 0; k < latent_dim; ++k) {
    Eigen::Index src = d - 1 - k;
    if (evals[src] <= rank_eps) break;  // past the data rank: leave row zero
    Eigen::VectorXd v = evecs.col(src);
    // Deterministic sign: largest-magnitude entry positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    out.components.row(k) = v.transpose();
    out.eigenvalues[k] = evals[src];
  }
  return out;
}

PcaCodec::PcaCodec(int input_dim, int latent_dim, double beta)
    : input_dim_(input_dim), latent_dim_(latent_dim), beta_(beta) {
  if (latent_dim_ < 1 || latent_dim_ > input_dim_)
    throw ConfigError("PcaCodec: latent_dim out of range");
  model_.mean = Eigen::VectorXd::Zero(input_dim_);
  model_.components = Eigen::MatrixXd::Zero(latent_dim_, input_dim_);
  model_.components.leftCols(latent_dim_) =
      Eigen::MatrixXd::Identity(latent_dim_, latent_dim_);
  model_.eigenvalues = Eigen::VectorXd::Zero(latent_dim_);
}

Eigen::VectorXd PcaCodec::encode(const Eigen::VectorXd& x) const {
  return model_.encode(x);
}

Eigen::VectorXd PcaCodec::decode(const Eigen::VectorXd& z) const {
  return model_.decode(z);
}

void PcaCodec::fit(const Eigen::MatrixXd& X, const std::vector<double>& values) {
  model_ = fit_weighted_pca(X, rank_weights(values, beta_), latent_dim_);
}

namespace {

Eigen::MatrixXd gaussian_projection(int out_dim, int input_dim, std::uint64_t seed) {
  SplitRng rng(seed);
  Eigen::MatrixXd p(out_dim, input_dim);
  for (int i = 0; i < out_dim; ++i)
    for (int j = 0; j < input_dim; ++j)
      p(i, j) = rng.normal() / std::sqrt(static_cast<double>(out_dim));
  return p;
}

}  // namespace

RandomProjectionCodec::RandomProjectionCodec(int input_dim, int latent_dim,
                                             std::uint64_t seed)
    : input_dim_(input_dim), latent_dim_(latent_dim) {
  if (latent_dim_ < 1 || latent_dim_ > input_dim_)
    throw ConfigError("RandomProjectionCodec: latent_dim out of range");
  proj_ = gaussian_projection(latent_dim_, input_dim_, seed);
  pinv_ = proj_.completeOrthogonalDecomposition().pseudoInverse();
}

RandomProjectionEncoder::RandomProjectionEncoder(int input_dim, int out_dim,
                                                 std::uint64_t seed) {
  if (out_dim < 1) throw ConfigError("RandomProjectionEncoder: out_dim must be >= 1");
  proj_ = gaussian_projection(out_dim, input_dim, seed);
}

Eigen::VectorXd snapshot_encode(const std::vector<Eigen::VectorXd>& states, int stride) {
  if (states.empty()) throw ConfigError("snapshot_encode: no states");
  if (stride < 1) throw ConfigError("snapshot_encode: stride must be >= 1");
  const int n = static_cast<int>(states.size());
  const Eigen::Index sd = states[0].size();

  std::vector<int> picks;
  for (int pos = stride; pos <= n; pos += stride) picks.push_back(pos - 1);
  if (picks.empty() || picks.back() != n - 1) picks.push_back(n - 1);

  Eigen::VectorXd out(static_cast<Eigen::Index>(picks.size()) * sd);
  for (size_t k = 0; k < picks.size(); ++k) {
    if (states[picks[k]].size() != sd)
      throw ConfigError("snapshot_encode: inconsistent state dimensions");
    out.segment(static_cast<Eigen::Index>(k) * sd, sd) = states[picks[k]];
  }
  return out;
}

}  // namespace plalam::latent
