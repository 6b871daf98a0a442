#include "hhc/analyze.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "hhc/errors.hpp"

namespace hhc {

namespace {

double quantile_type7(std::vector<double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - std::floor(pos);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double silverman_bandwidth(const std::vector<double>& sample) {
  const auto n = static_cast<double>(sample.size());
  double mean = 0.0;
  for (const double v : sample) mean += v;
  mean /= n;
  double var = 0.0;
  for (const double v : sample) var += (v - mean) * (v - mean);
  const double sd = sample.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  std::vector<double> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      quantile_type7(sorted, 0.75) - quantile_type7(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  if (spread <= 0.0) spread = sd > 0.0 ? sd : 1.0;
  return 0.9 * spread * std::pow(n, -0.2);
}

}  // namespace

std::vector<double> kernel_density(const std::vector<double>& sample,
                                   const std::vector<double>& grid) {
  if (sample.empty()) throw InputError("density estimate needs data");
  const double bw = silverman_bandwidth(sample);
  const double norm =
      1.0 / (static_cast<double>(sample.size()) * bw *
             std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out;
  out.reserve(grid.size());
  for (const double v : grid) {
    double acc = 0.0;
    for (const double x : sample) {
      const double z = (v - x) / bw;
      acc += std::exp(-0.5 * z * z);
    }
    out.push_back(acc * norm);
  }
  return out;
}

MarginalCurve marginal_effect(const Hypothesis& h, const DesignMatrix& d,
                              const std::string& feature) {
  const auto hit = std::find(h.feature_names.begin(), h.feature_names.end(),
                             feature);
  if (hit == h.feature_names.end())
    throw InputError("feature '" + feature +
                     "' is not retained by the fitted model");
  const auto h_idx =
      static_cast<std::size_t>(hit - h.feature_names.begin());

  // Column index in the design for every retained feature.
  std::vector<std::size_t> design_col(h.feature_names.size());
  for (std::size_t t = 0; t < h.feature_names.size(); ++t) {
    const auto it = std::find(d.feature_names.begin(), d.feature_names.end(),
                              h.feature_names[t]);
    if (it == d.feature_names.end())
      throw InputError("feature '" + h.feature_names[t] +
                       "' missing from the design matrix");
    design_col[t] = static_cast<std::size_t>(it - d.feature_names.begin());
  }

  double base = h.intercept;
  for (std::size_t t = 0; t < design_col.size(); ++t) {
    if (t == h_idx) continue;
    base += h.coefficients(static_cast<Eigen::Index>(t)) *
            d.X.col(static_cast<Eigen::Index>(design_col[t])).mean();
  }

  MarginalCurve curve;
  curve.feature = feature;
  curve.continuous = d.kinds[design_col[h_idx]] == ColumnKind::continuous;
  const double slope = h.coefficients(static_cast<Eigen::Index>(h_idx));
  if (curve.continuous) {
    const auto col = d.X.col(static_cast<Eigen::Index>(design_col[h_idx]));
    std::vector<double> observed(col.data(), col.data() + col.size());
    std::vector<double> values = observed;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    curve.values = values;
    curve.density = kernel_density(observed, values);
  } else {
    curve.values = {0.0, 1.0};
  }
  curve.predicted.reserve(curve.values.size());
  for (const double v : curve.values) curve.predicted.push_back(base + slope * v);
  return curve;
}

TTestResult decile_ttest(const std::vector<JoinedShift>& shifts,
                         const std::string& feature) {
  if (shifts.empty()) throw InputError("paired test needs shifts");
  for (const auto& s : shifts)
    if (s.shift.facility_id != shifts.front().shift.facility_id)
      throw InputError("paired test expects a single facility, found '" +
                       s.shift.facility_id + "' and '" +
                       shifts.front().shift.facility_id + "'");

  const bool temp = feature == "temperature";
  if (!temp && feature != "humidity")
    throw InputError("unknown paired-test feature '" + feature +
                     "' (expected temperature or humidity)");
  const auto value = [&](const JoinedShift& s) {
    return temp ? s.air_temp_k : s.rel_humidity_pct;
  };

  const std::size_t n = shifts.size();
  const std::size_t q = n / 10;
  if (q < 2)
    throw InputError("facility '" + shifts.front().shift.facility_id +
                     "' has too few shifts (" + std::to_string(n) +
                     ") for a decile comparison");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const ShiftRecord& ra = shifts[a].shift;
    const ShiftRecord& rb = shifts[b].shift;
    if (ra.compliance != rb.compliance) return ra.compliance < rb.compliance;
    if (ra.shift_date != rb.shift_date) return ra.shift_date < rb.shift_date;
    return ra.night_shift < rb.night_shift;
  });

  double lo = value(shifts[0]);
  double hi = lo;
  for (const auto& s : shifts) {
    lo = std::min(lo, value(s));
    hi = std::max(hi, value(s));
  }
  const double range = hi - lo;
  const auto scaled = [&](std::size_t i) {
    return range > 0.0 ? (value(shifts[i]) - lo) / range : 0.0;
  };

  std::vector<double> diffs(q);
  for (std::size_t i = 0; i < q; ++i)
    diffs[i] = scaled(order[n - q + i]) - scaled(order[i]);

  double mean = 0.0;
  for (const double d : diffs) mean += d;
  mean /= static_cast<double>(q);
  double var = 0.0;
  for (const double d : diffs) var += (d - mean) * (d - mean);
  var /= static_cast<double>(q - 1);
  const double sd = std::sqrt(var);

  TTestResult r;
  r.facility_id = shifts.front().shift.facility_id;
  r.feature = feature;
  r.mean_diff = mean;
  r.sample_size = q;
  if (sd <= 0.0) {
    r.degenerate = true;
    if (mean == 0.0) {
      r.t_statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_statistic = std::copysign(
          std::numeric_limits<double>::infinity(), mean);
      r.p_value = 0.0;
    }
    return r;
  }
  r.t_statistic = mean / (sd / std::sqrt(static_cast<double>(q)));
  const boost::math::students_t_distribution<double> dist(
      static_cast<double>(q - 1));
  r.p_value = 2.0 * cdf(complement(dist, std::fabs(r.t_statistic)));
  return r;
}

}  // namespace hhc
