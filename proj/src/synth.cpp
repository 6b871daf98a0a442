#include "hhc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "hhc/csv.hpp"
#include "hhc/errors.hpp"
#include "hhc/featurize.hpp"
#include "hhc/rng.hpp"
#include "json.hpp"

namespace hhc {

namespace {

constexpr double kMinCompliance = 0.06;
constexpr double kTempMean = 285.0, kTempSd = 10.0;
constexpr double kHumMean = 60.0, kHumSd = 12.0;
constexpr double kSevMean = 0.06, kSevSd = 0.02;
constexpr std::int64_t kSevTotalDeaths = 1000;

struct FacilityPlan {
  std::string id;
  std::string state;
  std::string division;
  std::string zipcode;
  std::string timezone;
  double lat = 0.0;
  double lon = 0.0;
};

struct Rec {
  int fac = 0;
  Date date;
  int night = 0;
  double temp = 0.0;  // values as written to the weather file
  double hum = 0.0;
  std::int64_t door = 0;
  std::int64_t disp = 0;
  int violation = -1;  // 0 low_door, 1 low_dispenser, 2 over_one
  bool weather_gap = false;
};

double clip(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

double round_to(double v, double step) {
  return std::round(v / step) * step;
}

std::string fmt(const char* f, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void check_spec(const SynthSpec& s) {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (s.facility_count < 1 || s.facility_count > 20)
    fail("facility_count must be in [1,20]");
  if (s.days < 1) fail("days must be positive");
  if (s.noise_sd < 0.0) fail("noise_sd must be non-negative");
  if (s.door_min > s.door_max) fail("door_min exceeds door_max");
  if (std::llround(kMinCompliance * static_cast<double>(s.door_min)) < 10)
    fail("door_min too small: minimum compliance could yield dispenser "
         "counts under the keep threshold");
  if (s.violations_low_door < 0 || s.violations_low_dispenser < 0 ||
      s.violations_over_one < 0)
    fail("violation quotas must be non-negative");
  if (!s.facility_effects.empty() &&
      s.facility_effects.size() != static_cast<std::size_t>(s.facility_count))
    fail("facility_effects must be empty or one per facility");
  if (s.weather_gap_count < 0) fail("weather_gap_count must be non-negative");

  double max_fac = 0.0;
  for (const double e : s.facility_effects)
    max_fac = std::max(max_fac, std::fabs(e));
  const double dev = 3.0 * (std::fabs(s.coef_air_temp) +
                            std::fabs(s.coef_rel_humidity) +
                            std::fabs(s.coef_flu_severity)) +
                     std::fabs(s.coef_night_shift) + std::fabs(s.coef_weekday) +
                     std::fabs(s.coef_july_effect) + max_fac;
  if (s.base_compliance - dev <= 0.0 || s.base_compliance + dev >= 1.0)
    fail("infeasible spec: base compliance plus worst-case planted effects "
         "leaves (0,1)");

  const std::int64_t slots =
      static_cast<std::int64_t>(s.facility_count) * s.days * 2;
  if (s.record_limit == 0 || s.record_limit < -1 || s.record_limit > slots)
    fail("record_limit must be -1 or in [1, facility_count*days*2]");
  const std::int64_t records = s.record_limit < 0 ? slots : s.record_limit;
  const std::int64_t violations = s.violations_low_door +
                                  s.violations_low_dispenser +
                                  s.violations_over_one;
  if (violations > records) fail("violation quotas exceed record count");
}

std::vector<FacilityPlan> plan_facilities(const SynthSpec& s) {
  static const std::pair<const char*, const char*> kStates[] = {
      {"IA", "West North Central"}, {"IL", "East North Central"},
      {"MO", "West North Central"}, {"WI", "East North Central"},
      {"MN", "West North Central"}, {"NE", "West North Central"},
      {"KS", "West North Central"}, {"OH", "East North Central"},
      {"MI", "East North Central"}, {"SD", "West North Central"}};
  std::vector<FacilityPlan> out;
  for (int i = 0; i < s.facility_count; ++i) {
    FacilityPlan f;
    f.id = std::to_string(91 + i);
    f.state = kStates[i % 10].first;
    f.division = kStates[i % 10].second;
    char zip[16];
    std::snprintf(zip, sizeof zip, "%05d", 50000 + 97 * i);
    f.zipcode = zip;
    f.timezone = i % 2 ? "-05:00" : "-06:00";
    // One grid cell per facility so every facility has its own weather.
    f.lat = 25.3 + 2.5 * i;
    f.lon = -99.6 + 2.5 * i;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

SynthPaths synth_paths(const std::string& dir) {
  SynthPaths p;
  p.events = dir + "/events.csv";
  p.facilities = dir + "/facilities.csv";
  p.centroids = dir + "/centroids.csv";
  p.weather = dir + "/weather.csv";
  p.flu = dir + "/flu.csv";
  p.ground_truth = dir + "/ground_truth.json";
  return p;
}

GroundTruth generate(const SynthSpec& spec, const SynthPaths& paths) {
  check_spec(spec);
  const std::vector<FacilityPlan> facilities = plan_facilities(spec);
  rng::Engine eng(spec.seed);

  // Weekly flu draws, one city per facility, quantized to whole deaths.
  std::vector<MmwrWeek> weeks;
  {
    std::set<std::pair<int, int>> seen;
    for (int d = 0; d < spec.days; ++d) {
      const MmwrWeek w = mmwr_week(add_days(spec.start_date, d));
      if (seen.emplace(w.year, w.week).second) weeks.push_back(w);
    }
    std::sort(weeks.begin(), weeks.end());
  }
  std::vector<std::vector<std::int64_t>> flu_deaths(
      static_cast<std::size_t>(spec.facility_count));
  for (auto& per_week : flu_deaths) {
    per_week.reserve(weeks.size());
    for (std::size_t w = 0; w < weeks.size(); ++w) {
      const double z = clip(rng::normal(eng), -2.9, 2.9);
      per_week.push_back(std::llround((kSevMean + kSevSd * z) *
                                      static_cast<double>(kSevTotalDeaths)));
    }
  }
  std::map<std::pair<int, int>, std::size_t> week_index;
  for (std::size_t w = 0; w < weeks.size(); ++w)
    week_index[{weeks[w].year, weeks[w].week}] = w;

  // Main pass: covariates are quantized exactly as written to disk before
  // the target is computed, so the files carry the whole truth.
  const std::int64_t slots =
      static_cast<std::int64_t>(spec.facility_count) * spec.days * 2;
  const std::int64_t limit = spec.record_limit < 0 ? slots : spec.record_limit;
  std::vector<Rec> recs;
  recs.reserve(static_cast<std::size_t>(limit));
  GroundTruth truth;
  for (int i = 0; i < spec.facility_count; ++i) {
    for (int d = 0; d < spec.days; ++d) {
      const Date date = add_days(spec.start_date, d);
      for (int night = 0; night <= 1; ++night) {
        if (static_cast<std::int64_t>(recs.size()) >= limit) continue;
        Rec r;
        r.fac = i;
        r.date = date;
        r.night = night;
        const double zt = clip(rng::normal(eng), -3.0, 3.0);
        const double zh = clip(rng::normal(eng), -3.0, 3.0);
        r.temp = round_to(kTempMean + kTempSd * zt, 0.01);
        r.hum = round_to(kHumMean + kHumSd * zh, 0.1);
        r.door = 2 * rng::uniform_int(eng, spec.door_min / 2,
                                      spec.door_max / 2);
        const double eps = rng::normal(eng, 0.0, spec.noise_sd);

        const double zt_q = (r.temp - kTempMean) / kTempSd;
        const double zh_q = (r.hum - kHumMean) / kHumSd;
        const std::size_t w =
            week_index.at({mmwr_week(date).year, mmwr_week(date).week});
        const double sev =
            static_cast<double>(flu_deaths[static_cast<std::size_t>(i)][w]) /
            static_cast<double>(kSevTotalDeaths);
        const double zs_q = (sev - kSevMean) / kSevSd;

        double y = spec.base_compliance + spec.coef_air_temp * zt_q +
                   spec.coef_rel_humidity * zh_q +
                   spec.coef_flu_severity * zs_q +
                   spec.coef_night_shift * night +
                   spec.coef_weekday * weekday_indicator(date) +
                   spec.coef_july_effect * july_effect_indicator(date) + eps;
        if (!spec.facility_effects.empty())
          y += spec.facility_effects[static_cast<std::size_t>(i)];
        const double clamped = clip(y, kMinCompliance, 1.0);
        if (clamped != y) ++truth.clamp_count;
        r.disp = std::llround(clamped * static_cast<double>(r.door));
        recs.push_back(r);
      }
    }
  }
  truth.record_count = static_cast<std::int64_t>(recs.size());

  // Overwrite sampled records with planted filter violations.
  const int violation_total = spec.violations_low_door +
                              spec.violations_low_dispenser +
                              spec.violations_over_one;
  const std::vector<std::size_t> chosen = rng::sample_indices(
      eng, recs.size(), static_cast<std::size_t>(violation_total));
  for (std::size_t v = 0; v < chosen.size(); ++v) {
    Rec& r = recs[chosen[v]];
    if (v < static_cast<std::size_t>(spec.violations_low_door)) {
      r.violation = 0;
      r.door = 2 * rng::uniform_int(eng, 1, 4);
      r.disp = std::llround(kMinCompliance * static_cast<double>(r.door));
    } else if (v < static_cast<std::size_t>(spec.violations_low_door +
                                            spec.violations_low_dispenser)) {
      r.violation = 1;
      r.door = 2 * rng::uniform_int(eng, 100, 1000);
      r.disp = rng::uniform_int(eng, 0, 9);
    } else {
      r.violation = 2;
      r.door = 2 * rng::uniform_int(eng, 5, 50);
      r.disp = r.door + rng::uniform_int(eng, 1, 50);
    }
  }

  // Weather gaps: earliest clean day shifts of the first facility.
  if (spec.weather_gap_count > 0) {
    int remaining = spec.weather_gap_count;
    for (Rec& r : recs) {
      if (remaining == 0) break;
      if (r.fac != 0 || r.night != 0 || r.violation >= 0) continue;
      r.weather_gap = true;
      --remaining;
    }
    if (remaining > 0)
      throw ConfigError("weather_gap_count exceeds clean day shifts of the "
                        "first facility");
  }

  static const char* kReasons[] = {"low_door", "low_dispenser", "over_one"};
  truth.violation_counts = {{"low_door", spec.violations_low_door},
                            {"low_dispenser", spec.violations_low_dispenser},
                            {"zero_compliance", 0},
                            {"over_one", spec.violations_over_one}};
  truth.kept_count = truth.record_count - violation_total;
  std::map<std::string, std::set<std::string>> kept_dates;
  for (const Rec& r : recs) {
    const std::string& fid = facilities[static_cast<std::size_t>(r.fac)].id;
    if (r.violation >= 0) {
      truth.drop_labels[{fid, iso_date(r.date), r.night}] =
          kReasons[r.violation];
      continue;
    }
    FacilityTruth& f = truth.facilities[fid];
    f.door_total += r.door;
    f.dispenser_total += r.disp;
    kept_dates[fid].insert(iso_date(r.date));
    if (r.weather_gap)
      truth.weather_gaps.emplace_back(fid, iso_date(r.date), r.night);
  }
  for (auto& [fid, dates] : kept_dates)
    truth.facilities[fid].reporting_days = static_cast<int>(dates.size());

  // ---- facilities.csv / centroids.csv ----
  {
    std::ofstream out(paths.facilities);
    if (!out) throw InputError("cannot write " + paths.facilities);
    csv::write_row(out, {"facility_id", "state", "cdc_division", "zipcode",
                         "timezone"});
    for (const auto& f : facilities)
      csv::write_row(out, {f.id, f.state, f.division, f.zipcode, f.timezone});
  }
  {
    std::ofstream out(paths.centroids);
    if (!out) throw InputError("cannot write " + paths.centroids);
    csv::write_row(out, {"zipcode", "latitude", "longitude"});
    for (const auto& f : facilities)
      csv::write_row(out,
                     {f.zipcode, fmt("%.4f", f.lat), fmt("%.4f", f.lon)});
  }

  // ---- events.csv ----
  {
    std::ofstream out(paths.events);
    if (!out) throw InputError("cannot write " + paths.events);
    csv::write_row(out,
                   {"facility_id", "sensor_id", "sensor_kind", "timestamp",
                    "count"});
    const auto emit = [&](const std::string& fid, const std::string& sensor,
                          const char* kind, const Date& date, const char* hms,
                          std::int64_t count) {
      csv::write_row(out, {fid, fid + "-" + sensor, kind,
                           iso_date(date) + "T" + hms,
                           std::to_string(count)});
    };
    for (const Rec& r : recs) {
      const std::string& fid = facilities[static_cast<std::size_t>(r.fac)].id;
      const std::int64_t d1 = r.door / 3;
      const std::int64_t d2 = r.door / 3;
      const std::int64_t d3 = r.door - d1 - d2;
      const std::int64_t s1 = r.disp / 2;
      const std::int64_t s2 = r.disp - s1;
      if (r.night == 0) {
        emit(fid, "d1", "door", r.date, "08:00:00", d1);
        emit(fid, "d2", "door", r.date, "12:30:00", d2);
        emit(fid, "d3", "door", r.date, "17:45:00", d3);
        emit(fid, "s1", "dispenser", r.date, "09:15:00", s1);
        emit(fid, "s2", "dispenser", r.date, "16:20:00", s2);
      } else {
        const Date next = add_days(r.date, 1);
        emit(fid, "d1", "door", r.date, "19:30:00", d1);
        emit(fid, "d2", "door", r.date, "23:10:00", d2);
        emit(fid, "d3", "door", next, "02:15:00", d3);
        emit(fid, "s1", "dispenser", r.date, "21:05:00", s1);
        emit(fid, "s2", "dispenser", next, "05:40:00", s2);
      }
    }
  }

  // ---- weather.csv (one observation per generated shift) ----
  {
    std::ofstream out(paths.weather);
    if (!out) throw InputError("cannot write " + paths.weather);
    csv::write_row(out, {"latitude", "longitude", "timestamp_utc",
                         "air_temp_k", "rel_humidity_pct"});
    for (const Rec& r : recs) {
      if (r.weather_gap) continue;
      const auto& f = facilities[static_cast<std::size_t>(r.fac)];
      csv::write_row(out, {fmt("%.4f", f.lat), fmt("%.4f", f.lon),
                           iso_date(r.date) +
                               (r.night ? "T18:00:00" : "T06:00:00"),
                           fmt("%.2f", r.temp), fmt("%.1f", r.hum)});
    }
  }

  // ---- flu.csv ----
  {
    std::ofstream out(paths.flu);
    if (!out) throw InputError("cannot write " + paths.flu);
    csv::write_row(out, {"city", "latitude", "longitude", "mmwr_year",
                         "mmwr_week", "flu_deaths", "total_deaths"});
    for (int i = 0; i < spec.facility_count; ++i) {
      const auto& f = facilities[static_cast<std::size_t>(i)];
      for (std::size_t w = 0; w < weeks.size(); ++w)
        csv::write_row(
            out, {"city_" + f.id, fmt("%.4f", f.lat), fmt("%.4f", f.lon),
                  std::to_string(weeks[w].year), std::to_string(weeks[w].week),
                  std::to_string(flu_deaths[static_cast<std::size_t>(i)][w]),
                  std::to_string(kSevTotalDeaths)});
    }
  }

  // ---- ground_truth.json ----
  {
    nlohmann::ordered_json j;
    j["seed"] = spec.seed;
    j["facility_count"] = spec.facility_count;
    j["days"] = spec.days;
    j["record_count"] = truth.record_count;
    j["kept_count"] = truth.kept_count;
    j["clamp_count"] = truth.clamp_count;
    j["base_compliance"] = spec.base_compliance;
    j["noise_sd"] = spec.noise_sd;
    j["coefficients"] = {{"air_temp", spec.coef_air_temp},
                         {"rel_humidity", spec.coef_rel_humidity},
                         {"flu_severity", spec.coef_flu_severity},
                         {"night_shift", spec.coef_night_shift},
                         {"weekday", spec.coef_weekday},
                         {"july_effect", spec.coef_july_effect}};
    nlohmann::ordered_json fac_eff = nlohmann::ordered_json::object();
    for (int i = 0; i < spec.facility_count; ++i)
      fac_eff[facilities[static_cast<std::size_t>(i)].id] =
          spec.facility_effects.empty()
              ? 0.0
              : spec.facility_effects[static_cast<std::size_t>(i)];
    j["facility_effects"] = fac_eff;
    j["population"] = {{"air_temp_mean", kTempMean}, {"air_temp_sd", kTempSd},
                       {"rel_humidity_mean", kHumMean},
                       {"rel_humidity_sd", kHumSd},
                       {"flu_severity_mean", kSevMean},
                       {"flu_severity_sd", kSevSd}};
    j["violations"] = {{"low_door", spec.violations_low_door},
                       {"low_dispenser", spec.violations_low_dispenser},
                       {"zero_compliance", 0},
                       {"over_one", spec.violations_over_one}};
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (const auto& [key, reason] : truth.drop_labels)
      labels.push_back({{"facility", std::get<0>(key)},
                        {"shift_date", std::get<1>(key)},
                        {"night_shift", std::get<2>(key)},
                        {"reason", reason}});
    j["drop_labels"] = labels;
    nlohmann::ordered_json fac_sum = nlohmann::ordered_json::object();
    for (const auto& [fid, f] : truth.facilities)
      fac_sum[fid] = {{"door_total", f.door_total},
                      {"dispenser_total", f.dispenser_total},
                      {"reporting_days", f.reporting_days}};
    j["facility_summary"] = fac_sum;
    nlohmann::ordered_json gaps = nlohmann::ordered_json::array();
    for (const auto& [fid, date, night] : truth.weather_gaps)
      gaps.push_back(
          {{"facility", fid}, {"shift_date", date}, {"night_shift", night}});
    j["weather_gaps"] = gaps;
    std::ofstream out(paths.ground_truth);
    if (!out) throw InputError("cannot write " + paths.ground_truth);
    out << j.dump(2) << '\n';
  }

  return truth;
}

}  // namespace hhc
