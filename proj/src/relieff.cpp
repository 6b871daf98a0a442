#include "hhc/relieff.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "hhc/errors.hpp"
#include "hhc/model.hpp"
#include "hhc/rng.hpp"

namespace hhc {

namespace {

void validate(const ReliefConfig& cfg) {
  if (cfg.neighbor_count < 1)
    throw ConfigError("neighbor count must be at least 1");
  if (cfg.sample_count == 0 || cfg.sample_count < -1)
    throw ConfigError("sample count must be positive (or -1 for all)");
  if (!(cfg.sigma > 0.0)) throw ConfigError("sigma must be positive");
}

}  // namespace

Eigen::VectorXd relief_weights(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const std::vector<bool>& discrete,
                               const ReliefConfig& cfg) {
  validate(cfg);
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (static_cast<std::size_t>(p) != discrete.size())
    throw InputError("discrete mask size does not match feature count");
  if (n != y.size()) throw InputError("feature and target row counts differ");
  const int k = cfg.neighbor_count;
  if (n <= k)
    throw ConfigError("need more than " + std::to_string(k) +
                      " instances for " + std::to_string(k) + " neighbors");

  // Range-scale everything once; zero-range columns contribute no distance.
  Eigen::MatrixXd S(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double lo = X.col(j).minCoeff();
    const double range = X.col(j).maxCoeff() - lo;
    if (range > 0.0)
      S.col(j) = (X.col(j).array() - lo) / range;
    else
      S.col(j).setZero();
  }
  Eigen::VectorXd ys(n);
  {
    const double lo = y.minCoeff();
    const double range = y.maxCoeff() - lo;
    if (range > 0.0)
      ys = (y.array() - lo) / range;
    else
      ys.setZero();
  }

  Eigen::VectorXd rank_w(k);
  for (int r = 1; r <= k; ++r) {
    const double z = static_cast<double>(r) / cfg.sigma;
    rank_w(r - 1) = std::exp(-z * z);
  }
  rank_w /= rank_w.sum();

  rng::Engine eng(cfg.seed);
  const std::size_t m =
      cfg.sample_count < 0
          ? static_cast<std::size_t>(n)
          : std::min<std::size_t>(static_cast<std::size_t>(cfg.sample_count),
                                  static_cast<std::size_t>(n));
  const std::vector<std::size_t> seeds =
      rng::sample_indices(eng, static_cast<std::size_t>(n), m);

  double nd_c = 0.0;
  Eigen::VectorXd nd_a = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd nd_ca = Eigen::VectorXd::Zero(p);
  double total_influence = 0.0;

  std::vector<std::pair<double, Eigen::Index>> dist;
  dist.reserve(static_cast<std::size_t>(n) - 1);
  for (const std::size_t s : seeds) {
    const auto si = static_cast<Eigen::Index>(s);
    dist.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == si) continue;
      double d = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (discrete[static_cast<std::size_t>(j)])
          d += S(si, j) != S(i, j) ? 1.0 : 0.0;
        else
          d += std::fabs(S(si, j) - S(i, j));
      }
      dist.emplace_back(d, i);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (int r = 0; r < k; ++r) {
      const Eigen::Index nb = dist[static_cast<std::size_t>(r)].second;
      const double w = rank_w(r);
      const double dy = std::fabs(ys(si) - ys(nb));
      nd_c += dy * w;
      total_influence += w;
      for (Eigen::Index j = 0; j < p; ++j) {
        const double da = discrete[static_cast<std::size_t>(j)]
                              ? (S(si, j) != S(nb, j) ? 1.0 : 0.0)
                              : std::fabs(S(si, j) - S(nb, j));
        nd_a(j) += da * w;
        nd_ca(j) += dy * da * w;
      }
    }
  }

  Eigen::VectorXd weights = Eigen::VectorXd::Zero(p);
  if (nd_c <= 0.0) return weights;
  const double rest = total_influence - nd_c;
  for (Eigen::Index j = 0; j < p; ++j) {
    weights(j) = nd_ca(j) / nd_c;
    if (rest > 0.0) weights(j) -= (nd_a(j) - nd_ca(j)) / rest;
  }
  return weights;
}

std::vector<Eigen::VectorXd> relief_cv(const Eigen::MatrixXd& X,
                                       const Eigen::VectorXd& y,
                                       const std::vector<bool>& discrete,
                                       const ReliefConfig& cfg, int folds,
                                       std::uint64_t fold_seed, int threads) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (n < static_cast<std::size_t>(folds))
    throw ConfigError("more folds (" + std::to_string(folds) +
                      ") than rows (" + std::to_string(n) + ")");
  const std::vector<int> fold = fold_assignment(n, folds, fold_seed);

  std::vector<Eigen::VectorXd> out(static_cast<std::size_t>(folds));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(folds));
  const auto run_fold = [&](int f) {
    try {
      std::vector<Eigen::Index> train;
      for (std::size_t i = 0; i < n; ++i)
        if (fold[i] != f) train.push_back(static_cast<Eigen::Index>(i));
      Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(train.size()), X.cols());
      Eigen::VectorXd ytr(static_cast<Eigen::Index>(train.size()));
      for (std::size_t i = 0; i < train.size(); ++i) {
        Xtr.row(static_cast<Eigen::Index>(i)) = X.row(train[i]);
        ytr(static_cast<Eigen::Index>(i)) = y(train[i]);
      }
      out[static_cast<std::size_t>(f)] =
          relief_weights(Xtr, ytr, discrete, cfg);
    } catch (...) {
      errors[static_cast<std::size_t>(f)] = std::current_exception();
    }
  };

  if (threads <= 1) {
    for (int f = 0; f < folds; ++f) run_fold(f);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int f = t; f < folds; f += threads) run_fold(f);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<RankedFeature> rank_features(
    const std::vector<Eigen::VectorXd>& fold_weights,
    const std::vector<std::string>& names) {
  if (fold_weights.empty())
    throw InputError("ranking needs at least one fold of weights");
  const auto p = static_cast<std::size_t>(fold_weights.front().size());
  if (p != names.size())
    throw InputError("weight count does not match feature names");
  for (const auto& w : fold_weights)
    if (static_cast<std::size_t>(w.size()) != p)
      throw InputError("inconsistent weight counts across folds");

  const double folds = static_cast<double>(fold_weights.size());
  std::vector<std::vector<double>> ranks(p);
  std::vector<double> weight_sum(p, 0.0);
  for (const auto& w : fold_weights) {
    std::vector<std::size_t> order(p);
    for (std::size_t j = 0; j < p; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (w(static_cast<Eigen::Index>(a)) != w(static_cast<Eigen::Index>(b)))
        return w(static_cast<Eigen::Index>(a)) >
               w(static_cast<Eigen::Index>(b));
      return a < b;
    });
    for (std::size_t r = 0; r < p; ++r) {
      ranks[order[r]].push_back(static_cast<double>(r + 1));
      weight_sum[order[r]] += w(static_cast<Eigen::Index>(order[r]));
    }
  }

  std::vector<RankedFeature> out(p);
  for (std::size_t j = 0; j < p; ++j) {
    RankedFeature& f = out[j];
    f.feature = names[j];
    f.mean_weight = weight_sum[j] / folds;
    double mean_rank = 0.0;
    for (const double r : ranks[j]) mean_rank += r;
    mean_rank /= folds;
    f.mean_rank = mean_rank;
    double var = 0.0;
    for (const double r : ranks[j]) var += (r - mean_rank) * (r - mean_rank);
    f.rank_sd = std::sqrt(var / folds);
  }
  std::sort(out.begin(), out.end(),
            [](const RankedFeature& a, const RankedFeature& b) {
              if (a.mean_rank != b.mean_rank) return a.mean_rank < b.mean_rank;
              return a.feature < b.feature;
            });
  return out;
}

}  // namespace hhc
