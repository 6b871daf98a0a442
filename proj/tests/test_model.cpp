#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "hhc/errors.hpp"
#include "hhc/model.hpp"
#include "hhc/rng.hpp"
#include "support/oracles.hpp"

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::vector<std::string> names(int p) {
  std::vector<std::string> out;
  for (int j = 0; j < p; ++j) out.push_back("x" + std::to_string(j + 1));
  return out;
}

MatrixXd random_matrix(std::mt19937_64& eng, int n, int p) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = g(eng);
  return X;
}

double ridge_objective(const MatrixXd& X, const VectorXd& y, double lambda,
                       const VectorXd& h, double intercept) {
  const VectorXd r = y - X * h - VectorXd::Constant(y.size(), intercept);
  return r.squaredNorm() + lambda * h.squaredNorm();
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("penalized fit matches the long-double normal-equations oracle") {
  std::mt19937_64 eng(101);
  std::uniform_int_distribution<int> n_d(12, 60);
  std::uniform_int_distribution<int> p_d(1, 8);
  const double lambdas[] = {0.0, 0.01, 1.0, 100.0};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = n_d(eng);
    const int p = std::min(p_d(eng), n - 2);
    const double lambda = lambdas[trial % 4];
    const MatrixXd X = random_matrix(eng, n, p);
    VectorXd y(n);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < n; ++i) y(i) = g(eng) * 2.0 + 0.3;
    const auto fit = hhc::ridge_fit(X, y, lambda);

    std::vector<std::vector<double>> xr(n, std::vector<double>(p));
    std::vector<double> yr(n);
    for (int i = 0; i < n; ++i) {
      yr[i] = y(i);
      for (int j = 0; j < p; ++j) xr[i][j] = X(i, j);
    }
    const auto ref = oracle::ridge(xr, yr, lambda);
    const double scale = std::max(1.0, std::abs(ref.intercept));
    CHECK(std::abs(fit.intercept - ref.intercept) < 1e-8 * scale);
    for (int j = 0; j < p; ++j) {
      const double s = std::max(1.0, std::abs(ref.coefficients[j]));
      CHECK(std::abs(fit.coefficients(j) - ref.coefficients[j]) < 1e-8 * s);
    }
  }
}

TEST_CASE("unpenalized fit recovers exact linear data") {
  std::mt19937_64 eng(7);
  const MatrixXd X = random_matrix(eng, 40, 4);
  VectorXd truth(4);
  truth << 1.5, -2.0, 0.25, 3.0;
  const VectorXd y = X * truth + VectorXd::Constant(40, 0.7);
  const auto fit = hhc::ridge_fit(X, y, 0.0);
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(fit.coefficients(j) - truth(j)) < 1e-10);
  CHECK(std::abs(fit.intercept - 0.7) < 1e-10);
}

TEST_CASE("penalty shrinks toward the intercept-only model") {
  std::mt19937_64 eng(13);
  const MatrixXd X = random_matrix(eng, 50, 3);
  VectorXd y(50);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 50; ++i) y(i) = g(eng) + 2.0;
  const auto heavy = hhc::ridge_fit(X, y, 1e12);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(heavy.coefficients(j)) < 1e-6);
  CHECK(std::abs(heavy.intercept - y.mean()) < 1e-6);

  double prev = 1e300;
  for (double lambda : {0.0, 0.1, 1.0, 10.0, 1000.0}) {
    const auto fit = hhc::ridge_fit(X, y, lambda);
    const double norm = fit.coefficients.norm();
    CHECK(norm <= prev + 1e-12);
    prev = norm;
  }
}

TEST_CASE("fit is a local minimum of the penalized objective") {
  std::mt19937_64 eng(31);
  const MatrixXd X = random_matrix(eng, 30, 5);
  VectorXd y(30);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 30; ++i) y(i) = g(eng);
  for (double lambda : {0.0, 2.5}) {
    const auto fit = hhc::ridge_fit(X, y, lambda);
    const double base = ridge_objective(X, y, lambda, fit.coefficients,
                                        fit.intercept);
    for (int j = 0; j < 5; ++j) {
      for (double d : {1e-4, -1e-4}) {
        VectorXd h = fit.coefficients;
        h(j) += d;
        CHECK(ridge_objective(X, y, lambda, h, fit.intercept) >=
              base - 1e-12);
      }
    }
    CHECK(ridge_objective(X, y, lambda, fit.coefficients,
                          fit.intercept + 1e-4) >= base - 1e-12);
  }
}

TEST_CASE("rank-deficient design without a penalty is rejected") {
  std::mt19937_64 eng(3);
  MatrixXd X = random_matrix(eng, 20, 3);
  X.col(2) = X.col(0) + X.col(1);
  VectorXd y = VectorXd::LinSpaced(20, 0.0, 1.0);
  CHECK_THROWS_AS((void)hhc::ridge_fit(X, y, 0.0), hhc::InferenceError);
  CHECK_NOTHROW((void)hhc::ridge_fit(X, y, 0.5));
  CHECK_THROWS_AS((void)hhc::ridge_fit(X, y, -1.0), hhc::ConfigError);
}

TEST_CASE("t-test p-values match a long-double reference computation") {
  std::mt19937_64 eng(57);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 30 + trial;
    const int p = 3;
    const MatrixXd X = random_matrix(eng, n, p);
    VectorXd y = X.col(0) * 0.4;
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < n; ++i) y(i) += g(eng);
    const auto inf = hhc::ols_inference(X, y);
    REQUIRE(inf.p_values.size() == p);

    // Reference: full-design normal equations in long double, residual
    // variance, covariance diagonal via explicit inversion, Simpson p-values.
    const int m = p + 1;
    std::vector<std::vector<long double>> xtx(
        m, std::vector<long double>(m, 0.0L));
    std::vector<long double> xty(m, 0.0L);
    for (int i = 0; i < n; ++i) {
      long double row[4] = {1.0L, X(i, 0), X(i, 1), X(i, 2)};
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) xtx[r][c] += row[r] * row[c];
        xty[r] += row[r] * (long double)y(i);
      }
    }
    const auto beta = oracle::solve_dense(xtx, xty);
    long double rss = 0.0L;
    for (int i = 0; i < n; ++i) {
      long double fit = beta[0];
      for (int j = 0; j < p; ++j) fit += beta[j + 1] * (long double)X(i, j);
      const long double r = (long double)y(i) - fit;
      rss += r * r;
    }
    const long double s2 = rss / (n - m);
    for (int j = 0; j < p; ++j) {
      std::vector<long double> unit(m, 0.0L);
      unit[j + 1] = 1.0L;
      const auto col = oracle::solve_dense(xtx, unit);
      const double se = std::sqrt((double)(s2 * col[j + 1]));
      const double t = (double)beta[j + 1] / se;
      const double ref_p = oracle::t_two_sided_p(t, n - m);
      CHECK(std::abs(inf.coefficients(j) - (double)beta[j + 1]) < 1e-9);
      CHECK(std::abs(inf.p_values(j) - ref_p) < 1e-6);
    }
    CHECK(std::abs(inf.intercept - (double)beta[0]) < 1e-9);
  }
}

TEST_CASE("aliased columns get zero coefficient and p-value one") {
  std::mt19937_64 eng(71);
  MatrixXd X = random_matrix(eng, 40, 3);
  X.col(2) = 2.0 * X.col(1);
  VectorXd y = X.col(0) + X.col(1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 40; ++i) y(i) += 0.1 * g(eng);
  const auto inf = hhc::ols_inference(X, y);
  CHECK(inf.rank == 2);
  CHECK(inf.coefficients(2) == 0.0);
  CHECK(inf.p_values(2) == 1.0);
  CHECK(inf.p_values(0) < 1e-6);
}

TEST_CASE("p-values on pure noise are roughly uniform") {
  std::mt19937_64 eng(91);
  int below_half = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const MatrixXd X = random_matrix(eng, 50, 2);
    VectorXd y(50);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 50; ++i) y(i) = g(eng);
    const auto inf = hhc::ols_inference(X, y);
    if (inf.p_values(0) < 0.5) ++below_half;
  }
  CHECK(below_half > 70);
  CHECK(below_half < 130);
}

TEST_CASE("insufficient residual degrees of freedom are rejected") {
  std::mt19937_64 eng(5);
  const MatrixXd X = random_matrix(eng, 4, 3);
  VectorXd y(4);
  y << 1, 2, 3, 4;
  CHECK_THROWS_AS((void)hhc::ols_inference(X, y), hhc::InferenceError);
}

TEST_CASE("magnitude pruning drops a pure-noise feature") {
  // One strongly predictive feature, one with true coefficient zero. The
  // pruning criterion tolerates roughly |t| < 2 on the null feature, so a
  // handful of seeds legitimately keep it; the frozen seed set stays well
  // above the 95-of-100 bar.
  int success = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    hhc::rng::Engine eng(seed * 7919 + 1);
    const int n = 400;
    MatrixXd X(n, 2);
    VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = hhc::rng::normal(eng);
      X(i, 1) = hhc::rng::normal(eng);
      y(i) = 0.8 * X(i, 0) + 0.05 * hhc::rng::normal(eng);
    }
    const auto cols = hhc::m5_select(X, y, 0.1);
    if (cols == std::vector<Index>{0}) ++success;
  }
  CHECK(success >= 95);
}

TEST_CASE("magnitude pruning keeps everything when all features matter") {
  std::mt19937_64 eng(19);
  const int n = 300;
  MatrixXd X = random_matrix(eng, n, 4);
  VectorXd truth(4);
  truth << 0.9, -0.8, 0.85, 0.95;
  VectorXd y = X * truth;
  std::normal_distribution<double> g(0.0, 0.05);
  for (int i = 0; i < n; ++i) y(i) += g(eng);
  const auto cols = hhc::m5_select(X, y, 0.1);
  CHECK(cols == std::vector<Index>{0, 1, 2, 3});
}

TEST_CASE("magnitude pruning never empties the model") {
  std::mt19937_64 eng(23);
  const MatrixXd X = random_matrix(eng, 50, 3);
  VectorXd y(50);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 50; ++i) y(i) = g(eng);
  const auto cols = hhc::m5_select(X, y, 0.1);
  CHECK(cols.size() >= 1);
}

TEST_CASE("p-value elimination removes the planted noise column") {
  hhc::rng::Engine eng(2024);
  const int n = 2000;
  MatrixXd X(n, 2);
  VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = hhc::rng::normal(eng);
    X(i, 1) = hhc::rng::normal(eng);
    y(i) = 0.3 * X(i, 0) + hhc::rng::normal(eng);
  }
  auto result = hhc::backward_eliminate(X, y, names(2), {0, 1}, 1.0, 0.05, {});
  REQUIRE(result.columns == std::vector<Index>{0});
  CHECK(result.hypothesis.feature_names ==
        std::vector<std::string>{"x1"});
  CHECK(result.hypothesis.p_values(0) < 0.001);
  CHECK(std::abs(result.hypothesis.coefficients(0) - 0.3) < 0.05);
  REQUIRE(result.eliminated.size() == 1);
  CHECK(result.eliminated[0].feature == "x2");
  CHECK(result.eliminated[0].stage == "pvalue");
}

TEST_CASE("elimination keeps strong features and stops at one survivor") {
  std::mt19937_64 eng(43);
  const int n = 500;
  MatrixXd X = random_matrix(eng, n, 3);
  VectorXd truth(3);
  truth << 0.5, 0.6, -0.4;
  VectorXd y = X * truth;
  std::normal_distribution<double> g(0.0, 0.3);
  for (int i = 0; i < n; ++i) y(i) += g(eng);
  const auto strong =
      hhc::backward_eliminate(X, y, names(3), {0, 1, 2}, 0.5, 0.05, {});
  CHECK(strong.columns == std::vector<Index>{0, 1, 2});
  CHECK(strong.eliminated.empty());

  VectorXd noise(n);
  for (int i = 0; i < n; ++i) noise(i) = g(eng);
  const auto null =
      hhc::backward_eliminate(X, noise, names(3), {0, 1, 2}, 0.5, 0.05, {});
  CHECK(null.columns.size() >= 1);
}

TEST_CASE("retained features always pass the significance gate") {
  std::mt19937_64 eng(87);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 150;
    const int p = 5;
    const MatrixXd X = random_matrix(eng, n, p);
    VectorXd y(n);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      y(i) = 0.4 * X(i, 0) - 0.3 * X(i, 2) + g(eng);
    const auto result = hhc::select_and_fit(X, y, names(p), 1.0, 0.05);
    if (result.columns.size() > 1)
      for (Index j = 0; j < result.hypothesis.p_values.size(); ++j)
        CHECK(result.hypothesis.p_values(j) <= 0.05);
    CHECK(result.hypothesis.feature_names.size() == result.columns.size());
  }
}

TEST_CASE("fold labels are balanced, seeded, and validated") {
  const auto folds = hhc::fold_assignment(103, 10, 42);
  REQUIRE(folds.size() == 103);
  std::vector<int> sizes(10, 0);
  for (int f : folds) {
    REQUIRE(f >= 0);
    REQUIRE(f < 10);
    ++sizes[f];
  }
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  CHECK(*hi - *lo <= 1);
  CHECK(hhc::fold_assignment(103, 10, 42) == folds);
  CHECK(hhc::fold_assignment(103, 10, 43) != folds);
  CHECK_THROWS_AS((void)hhc::fold_assignment(103, 1, 42), hhc::ConfigError);
  CHECK_THROWS_AS((void)hhc::fold_assignment(5, 10, 42), hhc::ConfigError);
}

TEST_CASE("cross-validation is near-perfect on noiseless linear data") {
  std::mt19937_64 eng(61);
  const int n = 200;
  const MatrixXd X = random_matrix(eng, n, 3);
  VectorXd truth(3);
  truth << 1.0, -0.5, 0.75;
  const VectorXd y = X * truth + VectorXd::Constant(n, 0.2);
  const auto report = hhc::cross_validate(X, y, names(3), 0.0, 10, 7);
  CHECK(report.cv_correlation >= 1.0 - 1e-6);
  CHECK(report.cv_rmse <= 1e-6);
  CHECK(report.fold_count == 10);
}

TEST_CASE("cross-validation stays honest on pure noise") {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    hhc::rng::Engine eng(seed + 1);
    const int n = 5000;
    MatrixXd X(n, 3);
    VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) X(i, j) = hhc::rng::normal(eng);
      y(i) = hhc::rng::normal(eng);
    }
    const auto report = hhc::cross_validate(X, y, names(3), 1.0, 10, seed);
    worst = std::max(worst, std::abs(report.cv_correlation));
  }
  CHECK(worst <= 0.1);
}

TEST_CASE("cross-validation recovers a planted noise floor") {
  hhc::rng::Engine eng(99);
  const int n = 4000;
  MatrixXd X(n, 2);
  VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = hhc::rng::normal(eng);
    X(i, 1) = hhc::rng::normal(eng);
    y(i) = 0.5 * X(i, 0) + 0.17 * hhc::rng::normal(eng);
  }
  const auto report = hhc::cross_validate(X, y, names(2), 1.0, 10, 5);
  CHECK(report.cv_rmse > 0.17 * 0.95);
  CHECK(report.cv_rmse < 0.17 * 1.05);
}

TEST_CASE("fold parallelism does not change any reported number") {
  std::mt19937_64 eng(77);
  const int n = 600;
  const MatrixXd X = random_matrix(eng, n, 6);
  VectorXd y(n);
  std::normal_distribution<double> g(0.0, 0.2);
  for (int i = 0; i < n; ++i)
    y(i) = 0.3 * X(i, 0) - 0.2 * X(i, 3) + g(eng);
  const auto serial = hhc::cross_validate(X, y, names(6), 1.0, 10, 11, 1);
  const auto parallel = hhc::cross_validate(X, y, names(6), 1.0, 10, 11, 4);
  CHECK(serial.cv_correlation == parallel.cv_correlation);
  CHECK(serial.cv_rmse == parallel.cv_rmse);
  REQUIRE(serial.hypothesis.coefficients.size() ==
          parallel.hypothesis.coefficients.size());
  for (Index j = 0; j < serial.hypothesis.coefficients.size(); ++j)
    CHECK(serial.hypothesis.coefficients(j) ==
          parallel.hypothesis.coefficients(j));
  CHECK(serial.hypothesis.intercept == parallel.hypothesis.intercept);
}

TEST_CASE("validation rejects degenerate cross-validation configs") {
  std::mt19937_64 eng(1);
  const MatrixXd X = random_matrix(eng, 8, 2);
  VectorXd y = VectorXd::Zero(8);
  CHECK_THROWS_AS((void)hhc::cross_validate(X, y, names(2), 1.0, 1, 0),
                  hhc::ConfigError);
  CHECK_THROWS_AS((void)hhc::cross_validate(X, y, names(2), 1.0, 9, 0),
                  hhc::ConfigError);
}

TEST_CASE("correlation and error helpers") {
  VectorXd a(4), b(4);
  a << 1, 2, 3, 4;
  b << 2, 4, 6, 8;
  CHECK(std::abs(hhc::pearson(a, b) - 1.0) < 1e-12);
  b = -b;
  CHECK(std::abs(hhc::pearson(a, b) + 1.0) < 1e-12);
  const VectorXd flat = VectorXd::Constant(4, 3.0);
  CHECK(hhc::pearson(a, flat) == 0.0);
  VectorXd p(3), q(3);
  p << 1, 2, 3;
  q << 1, 2, 5;
  CHECK(std::abs(hhc::rmse(p, q) - std::sqrt(4.0 / 3.0)) < 1e-12);
}

}  // TEST_SUITE
