#include "hhc/model.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <thread>

#include "hhc/errors.hpp"
#include "hhc/rng.hpp"

namespace hhc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd column_sds(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  Eigen::VectorXd sds(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    double var = 0.0;
    if (n > 1)
      var = (X.col(j).array() - mean).square().sum() /
            static_cast<double>(n - 1);
    sds(j) = std::sqrt(std::max(var, 0.0));
  }
  return sds;
}

double training_rmse(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const RidgeSolution& s) {
  Eigen::VectorXd pred =
      (X * s.coefficients).array() + s.intercept;
  return rmse(pred, y);
}

/// rmse * (n + p') / (n - p'); +inf when p' >= n so pruning can proceed.
double adjusted_error(double err, Eigen::Index n, Eigen::Index p) {
  if (n <= p) return kInf;
  return err * static_cast<double>(n + p) / static_cast<double>(n - p);
}

/// Earliest linearly independent columns of a centered design, found by
/// modified Gram-Schmidt: a column whose residual against the span of the
/// earlier kept columns drops below a relative tolerance is dependent. This
/// makes the dropped side of an aliased pair deterministic (the later column
/// loses), matching the elimination tie-break.
std::vector<Eigen::Index> independent_columns(const Eigen::MatrixXd& Xc) {
  const Eigen::Index n = Xc.rows();
  std::vector<Eigen::Index> kept;
  Eigen::MatrixXd basis(n, std::min(n, Xc.cols()));
  Eigen::Index r = 0;
  for (Eigen::Index j = 0; j < Xc.cols(); ++j) {
    Eigen::VectorXd v = Xc.col(j);
    const double orig = v.norm();
    if (orig == 0.0) continue;  // constant column, aliased with the intercept
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index b = 0; b < r; ++b)
        v -= basis.col(b).dot(v) * basis.col(b);
    const double left = v.norm();
    if (left > orig * 1e-10 && r < basis.cols()) {
      basis.col(r++) = v / left;
      kept.push_back(j);
    }
  }
  return kept;
}

}  // namespace

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X,
                               const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = X.col(cols[i]);
  return out;
}

RidgeSolution ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        double lambda) {
  if (lambda < 0.0)
    throw ConfigError("lambda must be non-negative, got " +
                      std::to_string(lambda));
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n == 0) throw InputError("cannot fit a model on zero rows");
  if (n != y.size())
    throw InputError("design and target row counts differ");

  RidgeSolution s;
  const double y_mean = y.mean();
  if (p == 0) {
    s.coefficients.resize(0);
    s.intercept = y_mean;
    return s;
  }
  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  if (lambda > 0.0) {
    const Eigen::MatrixXd A =
        Xc.transpose() * Xc +
        lambda * Eigen::MatrixXd::Identity(p, p);
    s.coefficients = A.ldlt().solve(Xc.transpose() * yc);
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xc);
    if (qr.rank() < p)
      throw InferenceError(
          "rank-deficient design with lambda = 0; set lambda > 0");
    s.coefficients = qr.solve(yc);
  }
  s.intercept = y_mean - x_mean * s.coefficients;
  return s;
}

OlsInference ols_inference(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n == 0 || p == 0)
    throw InferenceError("cannot run t-tests on an empty design");

  const double y_mean = y.mean();
  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  const std::vector<Eigen::Index> kept = independent_columns(Xc);
  const Eigen::Index r = static_cast<Eigen::Index>(kept.size());
  const Eigen::Index df = n - r - 1;
  if (df <= 0)
    throw InferenceError("not enough residual degrees of freedom (n=" +
                         std::to_string(n) + ", rank=" + std::to_string(r) +
                         ")");

  Eigen::MatrixXd Xk(n, r);
  for (Eigen::Index i = 0; i < r; ++i)
    Xk.col(i) = Xc.col(kept[static_cast<std::size_t>(i)]);

  const Eigen::MatrixXd XtX = Xk.transpose() * Xk;
  const Eigen::VectorXd hk = XtX.ldlt().solve(Xk.transpose() * yc);
  const Eigen::VectorXd resid = yc - Xk * hk;
  const double s2 = resid.squaredNorm() / static_cast<double>(df);
  const Eigen::MatrixXd cov = s2 * XtX.inverse();

  OlsInference out;
  out.coefficients = Eigen::VectorXd::Zero(p);
  out.p_values = Eigen::VectorXd::Ones(p);
  out.rank = r;
  const boost::math::students_t_distribution<double> dist(
      static_cast<double>(df));
  for (Eigen::Index i = 0; i < r; ++i) {
    const Eigen::Index j = kept[static_cast<std::size_t>(i)];
    const double h = hk(i);
    const double se = std::sqrt(std::max(cov(i, i), 0.0));
    out.coefficients(j) = h;
    if (se <= 0.0 || !std::isfinite(se)) {
      out.p_values(j) = h == 0.0 ? 1.0 : 0.0;
    } else {
      const double t = h / se;
      out.p_values(j) = 2.0 * cdf(complement(dist, std::fabs(t)));
    }
  }
  out.intercept = y_mean - x_mean * out.coefficients;
  return out;
}

std::vector<Eigen::Index> m5_select(const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& y, double lambda) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (p == 0) throw InputError("feature pruning needs at least one feature");

  const Eigen::VectorXd sds = column_sds(X);
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) cols[static_cast<std::size_t>(j)] = j;

  Eigen::MatrixXd sub = X;
  RidgeSolution fit = ridge_fit(sub, y, lambda);
  double criterion = adjusted_error(
      training_rmse(sub, y, fit), n, static_cast<Eigen::Index>(cols.size()));

  while (cols.size() > 1) {
    // Smallest scaled coefficient magnitude; ties go to the later column.
    std::size_t candidate = 0;
    double best = kInf;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const double score =
          std::fabs(fit.coefficients(static_cast<Eigen::Index>(i))) *
          sds(cols[i]);
      if (score <= best) {
        best = score;
        candidate = i;
      }
    }
    std::vector<Eigen::Index> trial = cols;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(candidate));
    Eigen::MatrixXd trial_sub = select_columns(X, trial);
    const RidgeSolution trial_fit = ridge_fit(trial_sub, y, lambda);
    const double trial_criterion =
        adjusted_error(training_rmse(trial_sub, y, trial_fit), n,
                       static_cast<Eigen::Index>(trial.size()));
    if (trial_criterion > criterion) break;
    cols = std::move(trial);
    sub = std::move(trial_sub);
    fit = trial_fit;
    criterion = trial_criterion;
  }
  return cols;
}

SelectionResult backward_eliminate(
    const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
    const std::vector<std::string>& feature_names,
    std::vector<Eigen::Index> columns, double lambda, double alpha,
    std::vector<EliminationRecord> eliminated) {
  if (columns.empty())
    throw InputError("elimination needs a non-empty starting subset");

  OlsInference inf;
  while (true) {
    inf = ols_inference(select_columns(X, columns), y);
    std::ptrdiff_t worst = -1;
    double worst_p = alpha;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const double pv = inf.p_values(static_cast<Eigen::Index>(i));
      if (pv > alpha && pv >= worst_p) {
        worst_p = pv;
        worst = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (worst < 0 || columns.size() == 1) break;
    eliminated.push_back(
        {feature_names.at(static_cast<std::size_t>(columns[worst])), "pvalue"});
    columns.erase(columns.begin() + worst);
  }

  const RidgeSolution ridge = ridge_fit(select_columns(X, columns), y, lambda);
  SelectionResult result;
  result.hypothesis.lambda = lambda;
  result.hypothesis.intercept = ridge.intercept;
  result.hypothesis.coefficients = ridge.coefficients;
  result.hypothesis.p_values = inf.p_values;
  for (const Eigen::Index c : columns)
    result.hypothesis.feature_names.push_back(
        feature_names.at(static_cast<std::size_t>(c)));
  result.columns = std::move(columns);
  result.eliminated = std::move(eliminated);
  return result;
}

SelectionResult select_and_fit(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const std::vector<std::string>& feature_names,
                               double lambda, double alpha) {
  if (static_cast<std::size_t>(X.cols()) != feature_names.size())
    throw InputError("feature name count does not match design columns");
  const std::vector<Eigen::Index> kept = m5_select(X, y, lambda);
  std::vector<EliminationRecord> eliminated;
  std::vector<bool> surviving(static_cast<std::size_t>(X.cols()), false);
  for (const Eigen::Index c : kept)
    surviving[static_cast<std::size_t>(c)] = true;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    if (!surviving[static_cast<std::size_t>(j)])
      eliminated.push_back(
          {feature_names[static_cast<std::size_t>(j)], "m5"});
  return backward_eliminate(X, y, feature_names, kept, lambda, alpha,
                            std::move(eliminated));
}

std::vector<int> fold_assignment(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (n < static_cast<std::size_t>(k))
    throw ConfigError("more folds (" + std::to_string(k) + ") than rows (" +
                      std::to_string(n) + ")");
  rng::Engine eng(seed);
  const std::vector<std::size_t> perm = rng::sample_indices(eng, n, n);
  std::vector<int> fold(n);
  for (std::size_t i = 0; i < n; ++i)
    fold[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return fold;
}

FitReport cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const std::vector<std::string>& feature_names,
                         double lambda, int k, std::uint64_t seed,
                         int threads) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (n < static_cast<std::size_t>(k))
    throw ConfigError("more folds (" + std::to_string(k) + ") than rows (" +
                      std::to_string(n) + ")");

  const std::vector<int> fold = fold_assignment(n, k, seed);
  Eigen::VectorXd oof = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));

  const auto run_fold = [&](int f) {
    try {
      std::vector<Eigen::Index> train, test;
      for (std::size_t i = 0; i < n; ++i)
        (fold[i] == f ? test : train).push_back(static_cast<Eigen::Index>(i));
      Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(train.size()), X.cols());
      Eigen::VectorXd ytr(static_cast<Eigen::Index>(train.size()));
      for (std::size_t i = 0; i < train.size(); ++i) {
        Xtr.row(static_cast<Eigen::Index>(i)) = X.row(train[i]);
        ytr(static_cast<Eigen::Index>(i)) = y(train[i]);
      }
      const SelectionResult sel =
          select_and_fit(Xtr, ytr, feature_names, lambda);
      for (const Eigen::Index i : test) {
        double pred = sel.hypothesis.intercept;
        for (std::size_t t = 0; t < sel.columns.size(); ++t)
          pred += sel.hypothesis.coefficients(static_cast<Eigen::Index>(t)) *
                  X(i, sel.columns[t]);
        oof(i) = pred;
      }
    } catch (...) {
      errors[static_cast<std::size_t>(f)] = std::current_exception();
    }
  };

  if (threads <= 1) {
    for (int f = 0; f < k; ++f) run_fold(f);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int f = t; f < k; f += threads) run_fold(f);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  FitReport report;
  report.fold_count = k;
  report.cv_correlation = pearson(oof, y);
  report.cv_rmse = rmse(oof, y);
  SelectionResult full = select_and_fit(X, y, feature_names, lambda);
  report.hypothesis = std::move(full.hypothesis);
  report.eliminated = std::move(full.eliminated);
  return report;
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.size();
  if (n == 0 || n != b.size())
    throw InputError("correlation needs two equal-length vectors");
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double denom = std::sqrt(da.square().sum() * db.square().sum());
  if (denom <= 0.0) return 0.0;
  return (da * db).sum() / denom;
}

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual) {
  if (predicted.size() == 0 || predicted.size() != actual.size())
    throw InputError("rmse needs two equal-length vectors");
  return std::sqrt((predicted - actual).squaredNorm() /
                   static_cast<double>(predicted.size()));
}

}  // namespace hhc
