#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hhc/dates.hpp"

namespace hhc {

/// Generator controls. Coefficients are in standardized units: continuous
/// covariates are drawn as z-scores, so a coefficient is the compliance
/// change per 1 sd of the covariate; binary coefficients are level shifts.
struct SynthSpec {
  int facility_count = 7;
  int days = 120;
  std::int64_t record_limit = -1;  // -1 = every (facility, day, shift) slot
  double base_compliance = 0.5;
  double coef_air_temp = 0.0;
  double coef_rel_humidity = 0.0;
  double coef_flu_severity = 0.0;
  double coef_night_shift = 0.0;
  double coef_weekday = 0.0;
  double coef_july_effect = 0.0;
  std::vector<double> facility_effects;  // empty = all zero
  double noise_sd = 0.0;
  std::int64_t door_min = 200;  // drawn even so exact rates stay exact
  std::int64_t door_max = 2000;
  int violations_low_door = 0;
  int violations_low_dispenser = 0;
  int violations_over_one = 0;
  int weather_gap_count = 0;
  Date start_date{2014, 1, 6};
  std::uint64_t seed = 1;
};

struct SynthPaths {
  std::string events;
  std::string facilities;
  std::string centroids;
  std::string weather;
  std::string flu;
  std::string ground_truth;
};

/// Per-facility totals over records that survive the ingest filter.
struct FacilityTruth {
  std::int64_t door_total = 0;
  std::int64_t dispenser_total = 0;
  int reporting_days = 0;
};

/// Everything the generator knows that the pipeline must rediscover.
struct GroundTruth {
  std::int64_t record_count = 0;
  std::int64_t kept_count = 0;
  std::int64_t clamp_count = 0;
  std::map<std::string, std::int64_t> violation_counts;
  // (facility_id, iso shift_date, night_shift) -> drop reason
  std::map<std::tuple<std::string, std::string, int>, std::string> drop_labels;
  std::map<std::string, FacilityTruth> facilities;
  std::vector<std::tuple<std::string, std::string, int>> weather_gaps;
};

/// Write the five input CSVs plus a ground-truth JSON document. Output is
/// byte-identical for identical specs. Throws ConfigError when the spec
/// cannot keep compliance inside (0,1) or would create unplanned filter
/// violations.
GroundTruth generate(const SynthSpec& spec, const SynthPaths& paths);

/// Default file layout inside a directory.
SynthPaths synth_paths(const std::string& dir);

}  // namespace hhc
