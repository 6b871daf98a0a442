#pragma once

#include <string>
#include <vector>

#include "hhc/featurize.hpp"
#include "hhc/model.hpp"

namespace hhc {

/// Predicted compliance as one retained feature sweeps its observed values
/// while every other retained feature sits at its column mean. Values are in
/// design units (standardized for continuous features). Continuous curves
/// carry a Gaussian kernel density estimate; binary curves are the two
/// points {0,1} with no density.
struct MarginalCurve {
  std::string feature;
  bool continuous = false;
  std::vector<double> values;
  std::vector<double> predicted;
  std::vector<double> density;
};

MarginalCurve marginal_effect(const Hypothesis& h, const DesignMatrix& d,
                              const std::string& feature);

/// Gaussian KDE with Silverman's bandwidth 0.9 * min(sd, IQR/1.34) * n^-0.2,
/// evaluated at `grid`.
std::vector<double> kernel_density(const std::vector<double>& sample,
                                   const std::vector<double>& grid);

struct TTestResult {
  std::string facility_id;
  std::string feature;  // "temperature" or "humidity"
  double mean_diff = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  std::size_t sample_size = 0;  // per side
  bool degenerate = false;
};

/// Paired comparison of one facility's weather between its top and bottom
/// compliance deciles. Shifts are sorted by compliance, the bottom and top
/// q = floor(n/10) taken, the feature scaled to [0,1] by the facility's own
/// min/max, and pairs matched by rank within each decile. Two-sided p from
/// Student's t with q-1 degrees of freedom. Throws InputError when q < 2 or
/// the rows span multiple facilities.
TTestResult decile_ttest(const std::vector<JoinedShift>& shifts,
                         const std::string& feature);

}  // namespace hhc
