#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "plalam/latent.hpp"
#include "plalam/rng.hpp"

using namespace plalam;
using namespace plalam::latent;

namespace {

// Reference PCA straight from the SVD of centered data, no weights, used as
// an independent check on the covariance-eigensolver path.
Eigen::MatrixXd plain_pca_components(const Eigen::MatrixXd& X, int k) {
  Eigen::RowVectorXd mean = X.colwise().mean();
  Eigen::MatrixXd centered = X.rowwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  return svd.matrixV().leftCols(k).transpose();
}

double recon_error(const WeightedPca& p, const Eigen::MatrixXd& X) {
  double err = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::VectorXd x = X.row(i).transpose();
    err += (p.decode(p.encode(x)) - x).squaredNorm();
  }
  return err;
}

}  // namespace

TEST_CASE("rank weights: normalized, monotone, ties equal") {
  auto w = rank_weights({3.0, 1.0, 2.0, 2.0}, 2.0);
  double sum = 0.0;
  for (double x : w) sum += x;
  CHECK(sum == doctest::Approx(1.0));
  CHECK(w[0] > w[2]);   // best sample weighs most
  CHECK(w[2] == w[3]);  // tied values share a midrank
  CHECK(w[2] > w[1]);

  auto u = rank_weights({5.0, -1.0, 0.0}, 0.0);
  for (double x : u) CHECK(x == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("weighted pca reconstructs full-rank data exactly") {
  Eigen::MatrixXd X(4, 2);
  X << 0.0, 0.0, 1.0, 0.2, 0.3, 1.5, -1.0, 0.7;
  auto p = fit_weighted_pca(X, {0.1, 0.4, 0.3, 0.2}, 2);
  CHECK(recon_error(p, X) == doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("weighted pca finds the exact direction of a line") {
  Eigen::MatrixXd X(5, 2);
  for (int i = 0; i < 5; ++i) {
    double t = -2.0 + i;
    X(i, 0) = t;
    X(i, 1) = 2.0 * t;
  }
  auto p = fit_weighted_pca(X, std::vector<double>(5, 0.2), 1);
  Eigen::Vector2d dir(1.0 / std::sqrt(5.0), 2.0 / std::sqrt(5.0));
  CHECK(std::fabs(std::fabs(p.components.row(0).dot(dir)) - 1.0) < 1e-12);
  CHECK(recon_error(p, X) == doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("heavily weighted cluster dominates the weighted mean") {
  Eigen::MatrixXd X(4, 1);
  X << 0.0, 0.1, 10.0, 10.1;
  std::vector<double> w{1000.0, 1000.0, 1.0, 1.0};
  auto p = fit_weighted_pca(X, w, 1);
  double expected = (1000.0 * 0.0 + 1000.0 * 0.1 + 10.0 + 10.1) / 2002.0;
  CHECK(p.mean[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(p.mean[0] < 0.1);
}

TEST_CASE("uniform weights reduce to plain pca") {
  SplitRng rng(17);
  Eigen::MatrixXd X(40, 5);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::VectorXd base = rng.normal_vec(2);
    for (int j = 0; j < 5; ++j)
      X(i, j) = base[0] * (j + 1) + base[1] * (j % 2) + 0.01 * rng.normal();
  }
  auto p = fit_weighted_pca(X, std::vector<double>(40, 1.0 / 40.0), 2);
  Eigen::MatrixXd ref = plain_pca_components(X, 2);

  // Components match up to sign.
  for (int k = 0; k < 2; ++k) {
    double dot = std::fabs(p.components.row(k).dot(ref.row(k)));
    CHECK(dot == doctest::Approx(1.0).epsilon(1e-8));
  }

  // And reconstruction errors agree to high precision.
  Eigen::RowVectorXd mean = X.colwise().mean();
  Eigen::MatrixXd centered = X.rowwise() - mean;
  Eigen::MatrixXd proj = centered * ref.transpose() * ref;
  double ref_err = (centered - proj).squaredNorm();
  CHECK(recon_error(p, X) == doctest::Approx(ref_err).epsilon(1e-10));
}

TEST_CASE("rank-deficient data keeps available rank and pads with the mean") {
  Eigen::MatrixXd X(3, 3);
  X << 1.0, 2.0, 3.0, 1.0, 2.0, 3.0, 1.0, 2.0, 3.0;
  auto p = fit_weighted_pca(X, std::vector<double>(3, 1.0), 2);
  CHECK(p.components.norm() == 0.0);
  Eigen::VectorXd z = p.encode(X.row(0).transpose());
  CHECK(z.norm() == 0.0);
  Eigen::VectorXd back = p.decode(z);
  CHECK((back - X.row(0).transpose()).norm() < 1e-12);
}

TEST_CASE("identity codec is exact") {
  IdentityCodec c(3);
  Eigen::VectorXd x(3);
  x << 1.0, -2.0, 0.5;
  CHECK((c.decode(c.encode(x)) - x).norm() == 0.0);
  CHECK_FALSE(c.trainable());
}

TEST_CASE("pca codec refits on new data") {
  PcaCodec c(3, 2);
  CHECK(c.trainable());
  SplitRng rng(5);
  Eigen::MatrixXd X(30, 3);
  std::vector<double> values;
  for (int i = 0; i < 30; ++i) {
    double a = rng.normal(), b = rng.normal();
    X(i, 0) = a;
    X(i, 1) = b;
    X(i, 2) = a + b;  // rank 2 data
    values.push_back(-a * a);
  }
  c.fit(X, values);
  for (int i = 0; i < 30; ++i) {
    Eigen::VectorXd x = X.row(i).transpose();
    CHECK((c.decode(c.encode(x)) - x).norm() < 1e-9);
  }
}

TEST_CASE("random projection codec is seed-stable and invertible when square") {
  RandomProjectionCodec a(4, 4, 99), b(4, 4, 99), other(4, 4, 100);
  Eigen::VectorXd x(4);
  x << 0.3, -1.0, 2.0, 0.0;
  CHECK((a.encode(x) - b.encode(x)).norm() == 0.0);
  CHECK((a.encode(x) - other.encode(x)).norm() > 1e-6);
  CHECK((a.decode(a.encode(x)) - x).norm() < 1e-9);

  RandomProjectionEncoder enc(6, 2, 42), enc2(6, 2, 42);
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(6, 0.0, 1.0);
  CHECK(enc.out_dim() == 2);
  CHECK((enc.encode(y) - enc2.encode(y)).norm() == 0.0);
}

TEST_CASE("snapshot encoding picks strided states plus the final state") {
  std::vector<Eigen::VectorXd> states;
  for (int i = 1; i <= 4; ++i) {
    Eigen::VectorXd s(2);
    s << static_cast<double>(i), static_cast<double>(10 * i);
    states.push_back(s);
  }

  // stride 2 over 4 states: positions 2 and 4; the final state is position 4
  // already, so nothing is appended twice.
  Eigen::VectorXd z = snapshot_encode(states, 2);
  REQUIRE(z.size() == 4);
  CHECK(z[0] == 2.0);
  CHECK(z[1] == 20.0);
  CHECK(z[2] == 4.0);
  CHECK(z[3] == 40.0);

  // stride beyond the horizon: only the final state.
  Eigen::VectorXd zf = snapshot_encode(states, 99);
  REQUIRE(zf.size() == 2);
  CHECK(zf[0] == 4.0);
  CHECK(zf[1] == 40.0);

  // stride 3 over 7 states: positions 3, 6, then final 7 appended.
  std::vector<Eigen::VectorXd> seven;
  for (int i = 1; i <= 7; ++i) {
    Eigen::VectorXd s(1);
    s << static_cast<double>(i);
    seven.push_back(s);
  }
  Eigen::VectorXd z7 = snapshot_encode(seven, 3);
  REQUIRE(z7.size() == 3);
  CHECK(z7[0] == 3.0);
  CHECK(z7[1] == 6.0);
  CHECK(z7[2] == 7.0);
}
