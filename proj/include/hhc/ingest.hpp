#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hhc/dates.hpp"

namespace hhc {

enum class SensorKind { door, dispenser };

/// One raw sensor reading, timestamp already converted to facility-local
/// wall-clock time.
struct EventRecord {
  std::string facility_id;
  std::string sensor_id;
  SensorKind kind = SensorKind::door;
  DateTime local_time;
  std::int64_t count = 0;
};

struct FacilityMeta {
  std::string facility_id;
  std::string state;
  std::string cdc_division;
  std::string zipcode;
  int utc_offset_minutes = 0;
};

/// Door/dispenser totals for one 12-hour shift of one facility. `compliance`
/// is dispenser/door and is only meaningful when door_count > 0.
struct ShiftRecord {
  std::string facility_id;
  Date shift_date;
  int night_shift = 0;
  std::int64_t door_count = 0;
  std::int64_t dispenser_count = 0;
  double compliance = 0.0;
};

enum class DropReason { low_door, low_dispenser, zero_compliance, over_one };

std::string drop_reason_name(DropReason r);

struct DroppedShift {
  ShiftRecord record;
  DropReason reason = DropReason::low_door;
};

struct FilterResult {
  std::vector<ShiftRecord> kept;
  std::vector<DroppedShift> dropped;
};

struct ShiftSlot {
  Date shift_date;
  int night_shift = 0;
};

/// Day shift covers [07:00, 18:59] of its date; night shift covers [19:00,
/// 06:59] and is owned by the date containing 19:00, so early-morning events
/// belong to the previous day's night shift.
ShiftSlot classify_shift(const DateTime& local_time);

/// Sum counts per (facility, shift_date, night_shift); output sorted by that
/// key. Order of the input stream does not matter.
std::vector<ShiftRecord> aggregate_shifts(const std::vector<EventRecord>& events);

/// dispenser/door; throws InputError when door_count is zero.
double compliance_rate(std::int64_t dispenser_count, std::int64_t door_count);

/// Split shifts into kept and dropped. A shift is dropped when door_count <
/// 10, dispenser_count < 10, compliance == 0, or compliance > 1; the recorded
/// reason is the first matching rule in that order.
FilterResult filter_shifts(const std::vector<ShiftRecord>& records);

/// Load and validate the facility catalog CSV
/// (facility_id,state,cdc_division,zipcode,timezone).
std::vector<FacilityMeta> load_facilities(const std::string& path);

/// Load the raw event CSV (facility_id,sensor_id,sensor_kind,timestamp,count)
/// and convert each timestamp to its facility's local time. Timestamps
/// carrying an explicit UTC offset are shifted; bare timestamps are taken as
/// already local.
std::vector<EventRecord> load_events(const std::string& path,
                                     const std::vector<FacilityMeta>& facilities);

}  // namespace hhc
