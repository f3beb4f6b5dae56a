#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "plalam/types.hpp"

namespace plalam::latent {

// Rank-based reconstruction weights: w_i proportional to
// exp(beta * rank_percentile(values_i)), midranks for ties, normalized to
// sum 1. beta = 0 gives uniform weights; larger beta concentrates
// reconstruction accuracy where the search actually samples (near the top).
std::vector<double> rank_weights(const std::vector<double>& values, double beta = 2.0);

struct WeightedPca {
  Eigen::VectorXd mean;        // d
  Eigen::MatrixXd components;  // latent_dim x d, orthonormal rows; all-zero
                               // rows stand for directions past the data rank
  Eigen::VectorXd eigenvalues; // latent_dim, descending

  Eigen::VectorXd encode(const Eigen::VectorXd& x) const {
    return components * (x - mean);
  }
  Eigen::VectorXd decode(const Eigen::VectorXd& z) const {
    return mean + components.transpose() * z;
  }
};

// Weighted mean + weighted covariance eigendecomposition. X is n x d, one
// sample per row. Directions beyond the rank of the weighted covariance get
// zero rows, so decode pads them with the mean.
WeightedPca fit_weighted_pca(const Eigen::MatrixXd& X,
                             const std::vector<double>& weights, int latent_dim);

// Invertible-ish sampling map h / h^{-1}: candidates are drawn in the latent
// space and decoded back before evaluation.
class LatentCodec {
public:
  virtual ~LatentCodec() = default;
  virtual int input_dim() const = 0;
  virtual int latent_dim() const = 0;
  virtual Eigen::VectorXd encode(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd decode(const Eigen::VectorXd& z) const = 0;
  virtual bool trainable() const { return false; }
  virtual void fit(const Eigen::MatrixXd&, const std::vector<double>&) {}
};

class IdentityCodec final : public LatentCodec {
public:
  explicit IdentityCodec(int dim) : dim_(dim) {}
  int input_dim() const override { return dim_; }
  int latent_dim() const override { return dim_; }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const override { return x; }
  Eigen::VectorXd decode(const Eigen::VectorXd& z) const override { return z; }

private:
  int dim_;
};

// Refit on the rebuild schedule with rank_weights over current sample values.
class PcaCodec final : public LatentCodec {
public:
  PcaCodec(int input_dim, int latent_dim, double beta = 2.0);
  int input_dim() const override { return input_dim_; }
  int latent_dim() const override { return latent_dim_; }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd decode(const Eigen::VectorXd& z) const override;
  bool trainable() const override { return true; }
  void fit(const Eigen::MatrixXd& X, const std::vector<double>& values) override;
  const WeightedPca& model() const { return model_; }

private:
  int input_dim_;
  int latent_dim_;
  double beta_;
  WeightedPca model_;
};

// Fixed seeded Gaussian projection; decode is the Moore-Penrose inverse.
class RandomProjectionCodec final : public LatentCodec {
public:
  RandomProjectionCodec(int input_dim, int latent_dim, std::uint64_t seed);
  int input_dim() const override { return input_dim_; }
  int latent_dim() const override { return latent_dim_; }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const override { return proj_ * x; }
  Eigen::VectorXd decode(const Eigen::VectorXd& z) const override { return pinv_ * z; }

private:
  int input_dim_;
  int latent_dim_;
  Eigen::MatrixXd proj_;
  Eigen::MatrixXd pinv_;
};

// One-way map into the space the partition tree lives in. Never decoded.
class PartitionEncoder {
public:
  virtual ~PartitionEncoder() = default;
  virtual int out_dim() const = 0;
  virtual Eigen::VectorXd encode(const Eigen::VectorXd& x) const = 0;
};

class IdentityEncoder final : public PartitionEncoder {
public:
  explicit IdentityEncoder(int dim) : dim_(dim) {}
  int out_dim() const override { return dim_; }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const override { return x; }

private:
  int dim_;
};

class RandomProjectionEncoder final : public PartitionEncoder {
public:
  RandomProjectionEncoder(int input_dim, int out_dim, std::uint64_t seed);
  int out_dim() const override { return static_cast<int>(proj_.rows()); }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const override { return proj_ * x; }

private:
  Eigen::MatrixXd proj_;
};

// Concatenate the states at 1-based positions stride, 2*stride, ... plus the
// final state when it is not already the last snapshot. Output dimension is
// fixed given (number of states, stride).
Eigen::VectorXd snapshot_encode(const std::vector<Eigen::VectorXd>& states, int stride);

}  // namespace plalam::latent
