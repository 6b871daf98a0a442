#include "hhc/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>
#include <unordered_map>

#include "hhc/csv.hpp"
#include "hhc/errors.hpp"

namespace hhc {

std::string drop_reason_name(DropReason r) {
  switch (r) {
    case DropReason::low_door: return "low_door";
    case DropReason::low_dispenser: return "low_dispenser";
    case DropReason::zero_compliance: return "zero_compliance";
    case DropReason::over_one: return "over_one";
  }
  return "unknown";
}

ShiftSlot classify_shift(const DateTime& local_time) {
  ShiftSlot slot;
  if (local_time.hour >= 19) {
    slot.shift_date = local_time.date;
    slot.night_shift = 1;
  } else if (local_time.hour < 7) {
    slot.shift_date = add_days(local_time.date, -1);
    slot.night_shift = 1;
  } else {
    slot.shift_date = local_time.date;
    slot.night_shift = 0;
  }
  return slot;
}

std::vector<ShiftRecord> aggregate_shifts(
    const std::vector<EventRecord>& events) {
  using Key = std::tuple<std::string, std::int64_t, int>;
  std::map<Key, std::pair<std::int64_t, std::int64_t>> totals;  // door, disp
  for (const auto& e : events) {
    const ShiftSlot slot = classify_shift(e.local_time);
    auto& [door, disp] = totals[{e.facility_id, to_days(slot.shift_date),
                                 slot.night_shift}];
    if (e.kind == SensorKind::door)
      door += e.count;
    else
      disp += e.count;
  }
  std::vector<ShiftRecord> out;
  out.reserve(totals.size());
  for (const auto& [key, counts] : totals) {
    ShiftRecord r;
    r.facility_id = std::get<0>(key);
    r.shift_date = from_days(std::get<1>(key));
    r.night_shift = std::get<2>(key);
    r.door_count = counts.first;
    r.dispenser_count = counts.second;
    if (r.door_count > 0)
      r.compliance = compliance_rate(r.dispenser_count, r.door_count);
    out.push_back(std::move(r));
  }
  return out;
}

double compliance_rate(std::int64_t dispenser_count, std::int64_t door_count) {
  if (door_count == 0)
    throw InputError("compliance undefined: door_count is zero");
  return static_cast<double>(dispenser_count) /
         static_cast<double>(door_count);
}

FilterResult filter_shifts(const std::vector<ShiftRecord>& records) {
  FilterResult result;
  for (const auto& r : records) {
    if (r.door_count < 10)
      result.dropped.push_back({r, DropReason::low_door});
    else if (r.dispenser_count < 10)
      result.dropped.push_back({r, DropReason::low_dispenser});
    else if (r.compliance == 0.0)
      result.dropped.push_back({r, DropReason::zero_compliance});
    else if (r.compliance > 1.0)
      result.dropped.push_back({r, DropReason::over_one});
    else
      result.kept.push_back(r);
  }
  return result;
}

std::vector<FacilityMeta> load_facilities(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t c_id = t.column("facility_id");
  const std::size_t c_state = t.column("state");
  const std::size_t c_div = t.column("cdc_division");
  const std::size_t c_zip = t.column("zipcode");
  const std::size_t c_tz = t.column("timezone");

  std::vector<FacilityMeta> out;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::string ctx = path + ":" + std::to_string(t.lines[i]);
    FacilityMeta f;
    f.facility_id = row[c_id];
    f.state = row[c_state];
    f.cdc_division = row[c_div];
    f.zipcode = row[c_zip];
    if (f.facility_id.empty()) throw InputError(ctx + ": empty facility_id");
    if (!seen.emplace(f.facility_id, i).second)
      throw InputError(ctx + ": duplicate facility_id '" + f.facility_id + "'");
    if (f.state.size() != 2 || !std::isalpha((unsigned char)f.state[0]) ||
        !std::isalpha((unsigned char)f.state[1]))
      throw InputError(ctx + ": invalid state code '" + f.state + "'");
    if (f.zipcode.size() != 5 ||
        !std::all_of(f.zipcode.begin(), f.zipcode.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
      throw InputError(ctx + ": invalid zipcode '" + f.zipcode + "'");
    f.utc_offset_minutes = parse_utc_offset(row[c_tz], ctx);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<EventRecord> load_events(
    const std::string& path, const std::vector<FacilityMeta>& facilities) {
  std::unordered_map<std::string, int> tz_by_facility;
  for (const auto& f : facilities)
    tz_by_facility.emplace(f.facility_id, f.utc_offset_minutes);

  const csv::Table t = csv::read_file(path);
  const std::size_t c_fac = t.column("facility_id");
  const std::size_t c_sensor = t.column("sensor_id");
  const std::size_t c_kind = t.column("sensor_kind");
  const std::size_t c_ts = t.column("timestamp");
  const std::size_t c_count = t.column("count");

  std::vector<EventRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::string ctx = path + ":" + std::to_string(t.lines[i]);
    EventRecord e;
    e.facility_id = row[c_fac];
    e.sensor_id = row[c_sensor];
    const auto it = tz_by_facility.find(e.facility_id);
    if (it == tz_by_facility.end())
      throw InputError(ctx + ": unknown facility_id '" + e.facility_id + "'");
    const std::string& kind = row[c_kind];
    if (kind == "door")
      e.kind = SensorKind::door;
    else if (kind == "dispenser")
      e.kind = SensorKind::dispenser;
    else
      throw InputError(ctx + ": invalid sensor_kind '" + kind + "'");
    const ParsedTimestamp ts = parse_timestamp(row[c_ts], ctx);
    e.local_time = ts.has_offset
                       ? add_minutes(ts.when, it->second - ts.offset_minutes)
                       : ts.when;
    e.count = csv::to_int(t, i, c_count);
    if (e.count < 0)
      throw InputError(ctx + ": negative count " + std::to_string(e.count));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace hhc
