#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace hhc {

/// Penalized linear fit; the intercept is never penalized.
struct RidgeSolution {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
};

/// Least-squares t-test results used for elimination decisions. Columns that
/// are linearly dependent on earlier ones get coefficient 0 and p-value 1.
struct OlsInference {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd p_values;
  double intercept = 0.0;
  Eigen::Index rank = 0;
};

/// Fitted model over the surviving feature subset: ridge coefficients with
/// the p-values of the matching unpenalized refit.
struct Hypothesis {
  std::vector<std::string> feature_names;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd p_values;
  double intercept = 0.0;
  double lambda = 0.0;
};

/// stage is "m5" (coefficient-magnitude pruning) or "pvalue" (t-test pruning).
struct EliminationRecord {
  std::string feature;
  std::string stage;
};

struct SelectionResult {
  std::vector<Eigen::Index> columns;
  Hypothesis hypothesis;
  std::vector<EliminationRecord> eliminated;
};

struct FitReport {
  Hypothesis hypothesis;
  double cv_correlation = 0.0;
  double cv_rmse = 0.0;
  int fold_count = 0;
  std::vector<EliminationRecord> eliminated;
};

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X,
                               const std::vector<Eigen::Index>& cols);

/// Minimize ||Xh - y||^2 + lambda*||h||^2 with unpenalized intercept (fit on
/// centered data). lambda = 0 on a rank-deficient design throws
/// InferenceError advising a positive lambda.
RidgeSolution ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        double lambda);

/// Classical t-tests from an unpenalized fit. Throws InferenceError when
/// residual degrees of freedom (n - rank - 1) are not positive.
OlsInference ols_inference(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Greedy pruning: repeatedly drop the feature with the smallest
/// |coefficient| * column-sd while the adjusted training error
/// rmse * (n + p') / (n - p') does not increase. At least one feature
/// survives. Returns surviving column indices in ascending order.
std::vector<Eigen::Index> m5_select(const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& y, double lambda);

/// Starting from `columns`, repeatedly drop the feature with the largest
/// t-test p-value above alpha (ties go to the later column) and refit, until
/// all survivors pass or one feature remains. Reported coefficients are the
/// ridge fit on the survivors; p-values come from the final unpenalized
/// refit. Removals are appended to `eliminated` with stage "pvalue".
SelectionResult backward_eliminate(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& y,
                                   const std::vector<std::string>& feature_names,
                                   std::vector<Eigen::Index> columns,
                                   double lambda, double alpha,
                                   std::vector<EliminationRecord> eliminated);

/// m5_select then backward_eliminate over the full column set.
SelectionResult select_and_fit(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const std::vector<std::string>& feature_names,
                               double lambda, double alpha = 0.05);

/// Seeded fold labels in [0, k): a shuffled index sequence dealt round-robin.
std::vector<int> fold_assignment(std::size_t n, int k, std::uint64_t seed);

/// k-fold evaluation: each fold runs the full selection pipeline on its
/// training split and predicts its test split; correlation and RMSE are
/// computed over the pooled out-of-fold predictions. The returned hypothesis
/// is the selection pipeline refit on all rows. Results are identical for any
/// `threads` value.
FitReport cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const std::vector<std::string>& feature_names,
                         double lambda, int k, std::uint64_t seed,
                         int threads = 1);

/// Pearson correlation; 0 when either side has zero variance.
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual);

}  // namespace hhc
