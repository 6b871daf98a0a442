#include "hhc/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hhc/errors.hpp"

namespace hhc {

namespace {

/// Date of the nth (1-based) `dow` (0=Sunday) of the month.
Date nth_weekday(int year, int month, int dow, int n) {
  const Date first{year, month, 1};
  const int shift = (dow - day_of_week(first) + 7) % 7;
  return add_days(first, shift + 7 * (n - 1));
}

Date last_weekday(int year, int month, int dow) {
  const Date next_first = month == 12 ? Date{year + 1, 1, 1}
                                      : Date{year, month + 1, 1};
  const Date last = add_days(next_first, -1);
  const int shift = (day_of_week(last) - dow + 7) % 7;
  return add_days(last, -shift);
}

}  // namespace

const std::array<std::string, kHolidayCount>& holiday_keys() {
  static const std::array<std::string, kHolidayCount> keys = {
      "new_years_day", "mlk_day",      "presidents_day", "memorial_day",
      "independence_day", "labor_day", "columbus_day",   "veterans_day",
      "thanksgiving",  "christmas"};
  return keys;
}

int holiday_index(const Date& d) {
  if (d.month == 1 && d.day == 1) return 0;
  if (d.month == 1 && d == nth_weekday(d.year, 1, 1, 3)) return 1;
  if (d.month == 2 && d == nth_weekday(d.year, 2, 1, 3)) return 2;
  if (d.month == 5 && d == last_weekday(d.year, 5, 1)) return 3;
  if (d.month == 7 && d.day == 4) return 4;
  if (d.month == 9 && d == nth_weekday(d.year, 9, 1, 1)) return 5;
  if (d.month == 10 && d == nth_weekday(d.year, 10, 1, 2)) return 6;
  if (d.month == 11 && d.day == 11) return 7;
  if (d.month == 11 && d == nth_weekday(d.year, 11, 4, 4)) return 8;
  if (d.month == 12 && d.day == 25) return 9;
  return -1;
}

int weekday_indicator(const Date& d) {
  const int dow = day_of_week(d);
  return (dow == 0 || dow == 6) ? 0 : 1;
}

int july_effect_indicator(const Date& d) {
  return (d.month == 7 && d.day >= 1 && d.day <= 7) ? 1 : 0;
}

DesignMatrix assemble(const std::vector<JoinedShift>& rows,
                      AssembleMode mode) {
  if (rows.empty())
    throw InputError("cannot assemble a design matrix from zero shifts");

  std::vector<std::string> facility_ids;
  if (mode == AssembleMode::global) {
    for (const auto& r : rows) facility_ids.push_back(r.shift.facility_id);
    std::sort(facility_ids.begin(), facility_ids.end());
    facility_ids.erase(std::unique(facility_ids.begin(), facility_ids.end()),
                       facility_ids.end());
  }
  std::map<std::string, int> facility_col;
  for (std::size_t i = 0; i < facility_ids.size(); ++i)
    facility_col[facility_ids[i]] = static_cast<int>(i);

  DesignMatrix d;
  for (const auto& id : facility_ids) {
    d.feature_names.push_back("facility_" + id);
    d.kinds.push_back(ColumnKind::binary);
  }
  const int c_temp = static_cast<int>(d.feature_names.size());
  for (const char* name : {"air_temp", "rel_humidity", "flu_severity"}) {
    d.feature_names.emplace_back(name);
    d.kinds.push_back(ColumnKind::continuous);
  }
  for (const char* name : {"night_shift", "weekday"}) {
    d.feature_names.emplace_back(name);
    d.kinds.push_back(ColumnKind::binary);
  }
  const int c_holiday = static_cast<int>(d.feature_names.size());
  for (const auto& key : holiday_keys()) {
    d.feature_names.push_back("holiday_" + key);
    d.kinds.push_back(ColumnKind::binary);
  }
  const int c_july = static_cast<int>(d.feature_names.size());
  d.feature_names.emplace_back("july_effect");
  d.kinds.push_back(ColumnKind::binary);

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(d.feature_names.size());
  d.X = Eigen::MatrixXd::Zero(n, p);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const JoinedShift& r = rows[static_cast<std::size_t>(i)];
    if (mode == AssembleMode::global)
      d.X(i, facility_col.at(r.shift.facility_id)) = 1.0;
    d.X(i, c_temp) = r.air_temp_k;
    d.X(i, c_temp + 1) = r.rel_humidity_pct;
    d.X(i, c_temp + 2) = r.flu_severity;
    d.X(i, c_temp + 3) = r.shift.night_shift;
    d.X(i, c_temp + 4) = weekday_indicator(r.shift.shift_date);
    const int h = holiday_index(r.shift.shift_date);
    if (h >= 0) d.X(i, c_holiday + h) = 1.0;
    d.X(i, c_july) = july_effect_indicator(r.shift.shift_date);
    d.y(i) = r.shift.compliance;
  }

  d.column_means.assign(static_cast<std::size_t>(p), 0.0);
  d.column_scales.assign(static_cast<std::size_t>(p), 1.0);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (d.kinds[static_cast<std::size_t>(j)] != ColumnKind::continuous)
      continue;
    const double mean = d.X.col(j).mean();
    double var = 0.0;
    if (n > 1) var = (d.X.col(j).array() - mean).square().sum() /
                     static_cast<double>(n - 1);
    if (var <= 0.0) {
      d.warnings.push_back("feature '" +
                           d.feature_names[static_cast<std::size_t>(j)] +
                           "' has zero variance; left unscaled");
      continue;
    }
    const double sd = std::sqrt(var);
    d.X.col(j) = (d.X.col(j).array() - mean) / sd;
    d.column_means[static_cast<std::size_t>(j)] = mean;
    d.column_scales[static_cast<std::size_t>(j)] = sd;
  }
  return d;
}

ReliefView assemble_relief(const std::vector<JoinedShift>& rows) {
  if (rows.empty())
    throw InputError("cannot assemble an attribute view from zero shifts");

  std::vector<std::string> facility_ids;
  for (const auto& r : rows) facility_ids.push_back(r.shift.facility_id);
  std::sort(facility_ids.begin(), facility_ids.end());
  facility_ids.erase(std::unique(facility_ids.begin(), facility_ids.end()),
                     facility_ids.end());
  std::map<std::string, int> facility_code;
  for (std::size_t i = 0; i < facility_ids.size(); ++i)
    facility_code[facility_ids[i]] = static_cast<int>(i);

  ReliefView v;
  v.attribute_names = {"facility",    "air_temp", "rel_humidity",
                       "flu_severity", "night_shift", "weekday",
                       "holiday",     "july_effect"};
  v.discrete = {true, false, false, false, true, true, true, true};
  const auto n = static_cast<Eigen::Index>(rows.size());
  v.X.resize(n, 8);
  v.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const JoinedShift& r = rows[static_cast<std::size_t>(i)];
    v.X(i, 0) = facility_code.at(r.shift.facility_id);
    v.X(i, 1) = r.air_temp_k;
    v.X(i, 2) = r.rel_humidity_pct;
    v.X(i, 3) = r.flu_severity;
    v.X(i, 4) = r.shift.night_shift;
    v.X(i, 5) = weekday_indicator(r.shift.shift_date);
    v.X(i, 6) = holiday_index(r.shift.shift_date) + 1;
    v.X(i, 7) = july_effect_indicator(r.shift.shift_date);
    v.y(i) = r.shift.compliance;
  }
  return v;
}

}  // namespace hhc
