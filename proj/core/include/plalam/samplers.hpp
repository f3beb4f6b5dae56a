#pragma once

#include <vector>

#include <Eigen/Core>

#include "plalam/oracle.hpp"
#include "plalam/rng.hpp"
#include "plalam/types.hpp"

namespace plalam::samplers {

// (mu/mu_w, lambda) CMA-ES with rank-one and rank-mu covariance adaptation and
// cumulative step-size adaptation, standard published defaults. Maximizes:
// tell() ranks candidates by value, best first.
class CmaesState {
public:
  CmaesState(Eigen::VectorXd mean, double sigma, int lambda = 0);

  // Diagonal moment-matched start: mean and per-dimension standard deviation
  // of the given points (rows), each scaled by sigma_mult and floored.
  static CmaesState seed_from_samples(const Eigen::MatrixXd& points,
                                      double sigma_mult, double sigma_floor,
                                      int lambda = 0);

  int dim() const { return static_cast<int>(mean_.size()); }
  int lambda() const { return lambda_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  double sigma() const { return sigma_; }
  const Eigen::MatrixXd& covariance() const { return C_; }
  int generation() const { return gen_; }

  Eigen::MatrixXd ask(SplitRng& rng);      // lambda x dim
  Eigen::VectorXd ask_one(SplitRng& rng);  // one candidate, same distribution

  // xs must be the lambda candidates of the current generation (rows), values
  // their objective values. Updates mean, paths, covariance and step size.
  void tell(const Eigen::MatrixXd& xs, const std::vector<double>& values);

private:
  void refresh_eigen();

  Eigen::VectorXd mean_;
  double sigma_;
  int lambda_;
  int mu_;
  Eigen::VectorXd weights_;
  double mueff_;
  double cs_, ds_, cc_, c1_, cmu_, chi_n_;
  Eigen::MatrixXd C_, B_;
  Eigen::VectorXd D_;
  Eigen::VectorXd p_sigma_, p_c_;
  int gen_ = 0;
  int eigen_interval_ = 1;
  int last_eigen_gen_ = 0;
};

struct CemState {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;  // fixed over the run
  int population = 32;
  int elites = 8;
};

// One generation: draw up to `population` candidates (never past the budget),
// clamp to bounds, evaluate, and move the mean to the elite mean when the
// generation completed in full. Returns the recorded samples.
std::vector<Sample> cem_step(CemState& state, CountingOracle& oracle, SplitRng& rng);

struct SamplerParams {
  double sigma = 1.0;      // CEM stddev / CMA-ES initial step / unbounded spread
  int population = 32;     // CEM
  int elites = 8;          // CEM
  int lambda = 0;          // CMA-ES, 0 = 4 + floor(3 ln n)
  Eigen::VectorXd mean0;   // optional explicit start mean (empty = bounds center)
};

RunRecord run_cem(CountingOracle& oracle, const SamplerParams& params, SplitRng& rng);
RunRecord run_cmaes(CountingOracle& oracle, const SamplerParams& params, SplitRng& rng);
RunRecord run_random_shooting(CountingOracle& oracle, const SamplerParams& params,
                              SplitRng& rng);

}  // namespace plalam::samplers
