#include <cmath>
#include <vector>

#include "doctest.h"
#include "plalam/oracle.hpp"
#include "plalam/types.hpp"

using namespace plalam;

TEST_CASE("record_best keeps a running maximum") {
  CHECK(record_best({1.0, 3.0, 2.0}) == std::vector<double>{1.0, 3.0, 3.0});
  CHECK(record_best({5.0}) == std::vector<double>{5.0});
  CHECK(record_best({-2.0, -1.0, -3.0, 0.0}) ==
        std::vector<double>{-2.0, -1.0, -1.0, 0.0});
  CHECK(record_best({}).empty());
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::plalam, Method::plalam_mean, Method::plalam_notree,
                   Method::plalam_noucb, Method::cem, Method::cmaes,
                   Method::random_shooting}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("gradient_descent"), ConfigError);
}

TEST_CASE("budget validation") {
  SearchBudget ok;
  CHECK_NOTHROW(ok.validate());

  SearchBudget b;
  b.n_init = 0;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  b = SearchBudget{};
  b.total_queries = b.n_init - 1;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  b = SearchBudget{};
  b.n_thres = 1;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  b = SearchBudget{};
  b.cp = -0.1;
  CHECK_THROWS_AS(b.validate(), ConfigError);
}

TEST_CASE("oracle counts every evaluation and enforces the budget") {
  int calls = 0;
  CountingOracle oracle(
      2, [&](const Eigen::VectorXd& x) { ++calls; return -x.squaredNorm(); },
      BoxBounds::cube(2, -1.0, 1.0), 3);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  CHECK(oracle.evaluate(x) == 0.0);
  CHECK(oracle.used() == 1);
  CHECK(oracle.remaining() == 2);
  oracle.evaluate(x);
  oracle.evaluate(x);
  CHECK(oracle.remaining() == 0);
  CHECK_THROWS_AS(oracle.evaluate(x), BudgetError);
  CHECK(calls == 3);
  CHECK(oracle.used() == 3);
}

TEST_CASE("oracle rejects non-finite values in either direction") {
  CountingOracle bad_fn(1, [](const Eigen::VectorXd&) { return std::nan(""); },
                        std::nullopt, 10);
  Eigen::VectorXd x(1);
  x << 0.5;
  CHECK_THROWS_AS(bad_fn.evaluate(x), OracleError);

  CountingOracle inf_fn(
      1, [](const Eigen::VectorXd&) { return std::numeric_limits<double>::infinity(); },
      std::nullopt, 10);
  CHECK_THROWS_AS(inf_fn.evaluate(x), OracleError);

  CountingOracle ok(1, [](const Eigen::VectorXd&) { return 0.0; }, std::nullopt, 10);
  Eigen::VectorXd nanx(1);
  nanx << std::nan("");
  CHECK_THROWS_AS(ok.evaluate(nanx), OracleError);

  Eigen::VectorXd wrong(2);
  wrong << 0.0, 0.0;
  CHECK_THROWS_AS(ok.evaluate(wrong), OracleError);
}

TEST_CASE("bounds clamp and containment") {
  BoxBounds b = BoxBounds::cube(2, -1.0, 2.0);
  Eigen::VectorXd x(2);
  x << -3.0, 5.0;
  Eigen::VectorXd c = b.clamp(x);
  CHECK(c[0] == -1.0);
  CHECK(c[1] == 2.0);
  CHECK(b.contains(c));
  CHECK_FALSE(b.contains(x));
}
