#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "hhc/dates.hpp"
#include "hhc/ingest.hpp"

namespace hhc {

inline constexpr int kHolidayCount = 10;

/// Column-name keys for the ten US federal holidays, in calendar order.
const std::array<std::string, kHolidayCount>& holiday_keys();

/// Index into holiday_keys() for the holiday on `d`, or -1. Dates follow the
/// literal statutory rules (nth-weekday or fixed date); observed-day shifts
/// for weekend holidays are not applied.
int holiday_index(const Date& d);

/// 0 for Saturday/Sunday, 1 otherwise.
int weekday_indicator(const Date& d);

/// 1 for July 1-7 of any year.
int july_effect_indicator(const Date& d);

/// Shift record with its weather and flu covariates attached.
struct JoinedShift {
  ShiftRecord shift;
  double air_temp_k = 0.0;
  double rel_humidity_pct = 0.0;
  double flu_severity = 0.0;
};

enum class ColumnKind { binary, continuous };

enum class AssembleMode { global, single_facility };

/// Regression design: standardized continuous columns, raw 0/1 binaries,
/// compliance target. Means/scales are the standardization parameters
/// (identity 0/1 for binary columns) so raw values can be reconstructed.
struct DesignMatrix {
  std::vector<std::string> feature_names;
  std::vector<ColumnKind> kinds;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<double> column_means;
  std::vector<double> column_scales;
  std::vector<std::string> warnings;
};

/// Build the design matrix: facility one-hot columns (global mode only, ids
/// sorted), then air_temp / rel_humidity / flu_severity standardized to zero
/// mean and unit sample variance, then night_shift, weekday, the ten holiday
/// indicators, and july_effect. A zero-variance continuous column is kept
/// unscaled and noted in `warnings`. Throws InputError on empty input.
DesignMatrix assemble(const std::vector<JoinedShift>& rows, AssembleMode mode);

/// Instance-based analysis view of the same rows: one discrete facility
/// attribute instead of one-hot columns, one discrete holiday attribute
/// (0 = none, else 1-based calendar index), continuous covariates raw.
struct ReliefView {
  std::vector<std::string> attribute_names;
  std::vector<bool> discrete;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

ReliefView assemble_relief(const std::vector<JoinedShift>& rows);

}  // namespace hhc
