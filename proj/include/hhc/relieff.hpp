#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace hhc {

struct ReliefConfig {
  int neighbor_count = 10;
  std::int64_t sample_count = -1;  // -1 = use every instance
  double sigma = 20.0;
  std::uint64_t seed = 0;
};

/// Instance-based feature weights for a regression target. Features and the
/// target are internally rescaled to [0,1] by range; distance is Manhattan
/// with a 0/1 difference on discrete attributes. For each sampled seed
/// instance the k nearest neighbors contribute with influence
/// exp(-(rank/sigma)^2), normalized per seed. The returned weight is
///   W_j = P_j/D - (A_j - P_j)/(m' - D)
/// where D accumulates target differences, A_j attribute differences, P_j
/// their products, and m' the total influence. Weights lie in [-1, 1].
Eigen::VectorXd relief_weights(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const std::vector<bool>& discrete,
                               const ReliefConfig& cfg);

/// relief_weights on each training split of a seeded k-fold partition (the
/// same fold assignment cross_validate uses for `fold_seed`).
std::vector<Eigen::VectorXd> relief_cv(const Eigen::MatrixXd& X,
                                       const Eigen::VectorXd& y,
                                       const std::vector<bool>& discrete,
                                       const ReliefConfig& cfg, int folds,
                                       std::uint64_t fold_seed,
                                       int threads = 1);

struct RankedFeature {
  std::string feature;
  double mean_weight = 0.0;
  double mean_rank = 0.0;
  double rank_sd = 0.0;
};

/// Aggregate per-fold weights: rank features 1..p within each fold by
/// descending weight, then report mean weight, mean rank, and the population
/// standard deviation of the rank, ordered by mean rank.
std::vector<RankedFeature> rank_features(
    const std::vector<Eigen::VectorXd>& fold_weights,
    const std::vector<std::string>& names);

}  // namespace hhc
