#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "plalam/types.hpp"

namespace plalam {

struct BoxBounds {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  bool contains(const Eigen::VectorXd& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const {
    return x.cwiseMax(lo).cwiseMin(hi);
  }
  static BoxBounds cube(int dim, double lo, double hi) {
    return {Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi)};
  }
};

// Single owner of query accounting. Every objective evaluation in a run goes
// through evaluate(); callers check remaining() before drawing a candidate so
// a run consumes its budget exactly. Non-finite values are a hard error: the
// convention everywhere is maximize, and silent NaN ordering bugs are worse
// than a failed run.
class CountingOracle {
public:
  using Fn = std::function<double(const Eigen::VectorXd&)>;

  CountingOracle(int dim, Fn fn, std::optional<BoxBounds> bounds, int total_queries)
      : dim_(dim), fn_(std::move(fn)), bounds_(std::move(bounds)), total_(total_queries) {
    if (dim_ < 1) throw ConfigError("oracle dim must be >= 1");
    if (total_ < 0) throw ConfigError("total_queries must be >= 0");
  }

  double evaluate(const Eigen::VectorXd& x) {
    if (used_ >= total_) throw BudgetError("query budget exhausted");
    if (x.size() != dim_) throw OracleError("oracle query has wrong dimension");
    if (!x.allFinite()) throw OracleError("oracle query contains non-finite values");
    double v = fn_(x);
    if (!std::isfinite(v)) throw OracleError("objective returned a non-finite value");
    ++used_;
    return v;
  }

  int dim() const { return dim_; }
  int used() const { return used_; }
  int total() const { return total_; }
  int remaining() const { return total_ - used_; }
  const std::optional<BoxBounds>& bounds() const { return bounds_; }

  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const {
    return bounds_ ? bounds_->clamp(x) : x;
  }

private:
  int dim_;
  Fn fn_;
  std::optional<BoxBounds> bounds_;
  int total_;
  int used_ = 0;
};

}  // namespace plalam
