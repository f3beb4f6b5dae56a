#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace plalam {

struct PlalamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Objective returned a NaN/inf, or was queried with an ill-formed input.
struct OracleError : PlalamError {
  using PlalamError::PlalamError;
};

// More evaluations requested than the budget allows.
struct BudgetError : PlalamError {
  using PlalamError::PlalamError;
};

// k-means could not produce two distinct clusters.
struct DegenerateCluster : PlalamError {
  using PlalamError::PlalamError;
};

// Linear boundary training failed to produce a usable separator.
struct FitFailure : PlalamError {
  using PlalamError::PlalamError;
};

// A statistical estimate is undefined for the given inputs.
struct EstimateError : PlalamError {
  using PlalamError::PlalamError;
};

struct ConfigError : PlalamError {
  using PlalamError::PlalamError;
};

struct Sample {
  Eigen::VectorXd x;
  double value = 0.0;
  int eval_index = 0;
};

// Query budget plus the search constants shared by the tree methods.
struct SearchBudget {
  int total_queries = 1000;
  int n_init = 50;   // uniform warm-start draws
  int n_par = 50;    // queries between partition rebuilds
  int n_thres = 10;  // minimum node size eligible for splitting
  double cp = 2.0;   // exploration constant

  void validate() const {
    if (n_init < 1) throw ConfigError("n_init must be >= 1");
    if (total_queries < n_init) throw ConfigError("total_queries must be >= n_init");
    if (n_par < 1) throw ConfigError("n_par must be >= 1");
    if (n_thres < 2) throw ConfigError("n_thres must be >= 2");
    if (cp < 0.0) throw ConfigError("cp must be >= 0");
  }
};

enum class Method {
  plalam,
  plalam_mean,
  plalam_notree,
  plalam_noucb,
  cem,
  cmaes,
  random_shooting,
};

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct RunRecord {
  std::uint64_t seed = 0;
  Method method = Method::plalam;
  std::string env;
  std::vector<Sample> samples;
  std::vector<double> best_curve;  // best_curve[i] = max value over samples[0..i]

  double best_value() const {
    return best_curve.empty() ? -std::numeric_limits<double>::infinity()
                              : best_curve.back();
  }
};

// Running maximum, one entry per input value.
std::vector<double> record_best(const std::vector<double>& values);

}  // namespace plalam
