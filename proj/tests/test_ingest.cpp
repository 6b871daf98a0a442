#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "hhc/errors.hpp"
#include "hhc/ingest.hpp"

namespace fs = std::filesystem;
using hhc::Date;
using hhc::DateTime;
using hhc::EventRecord;
using hhc::SensorKind;
using hhc::ShiftRecord;

namespace {

fs::path temp_file(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p;
}

EventRecord ev(const std::string& fid, SensorKind kind, DateTime t,
               std::int64_t count) {
  return {fid, fid + (kind == SensorKind::door ? "-d" : "-s"), kind, t, count};
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("shift classification over all 24 hours") {
  const Date d{2014, 3, 9};
  for (int hour = 0; hour < 24; ++hour) {
    const auto slot = hhc::classify_shift({d, hour, 17, 0});
    if (hour >= 7 && hour <= 18) {
      CHECK(slot.night_shift == 0);
      CHECK(slot.shift_date == d);
    } else if (hour >= 19) {
      CHECK(slot.night_shift == 1);
      CHECK(slot.shift_date == d);
    } else {
      CHECK(slot.night_shift == 1);
      CHECK(slot.shift_date == Date{2014, 3, 8});
    }
  }
  // Boundary examples.
  CHECK(hhc::classify_shift({d, 12, 0, 0}).night_shift == 0);
  CHECK(hhc::classify_shift({d, 19, 0, 0}).night_shift == 1);
  CHECK(hhc::classify_shift({d, 19, 0, 0}).shift_date == d);
  CHECK(hhc::classify_shift({d, 3, 0, 0}).shift_date == Date{2014, 3, 8});
  CHECK(hhc::classify_shift({{2014, 1, 1}, 2, 0, 0}).shift_date ==
        Date{2013, 12, 31});
}

TEST_CASE("aggregation sums per shift and ignores stream order") {
  std::vector<EventRecord> events = {
      ev("A", SensorKind::door, {{2014, 3, 9}, 8, 0, 0}, 3),
      ev("A", SensorKind::door, {{2014, 3, 9}, 17, 30, 0}, 7),
      ev("A", SensorKind::dispenser, {{2014, 3, 9}, 12, 0, 0}, 5),
      ev("A", SensorKind::door, {{2014, 3, 9}, 21, 0, 0}, 11),
      ev("A", SensorKind::dispenser, {{2014, 3, 10}, 2, 0, 0}, 4),
      ev("B", SensorKind::door, {{2014, 3, 9}, 9, 0, 0}, 20),
  };
  const auto shifts = hhc::aggregate_shifts(events);
  REQUIRE(shifts.size() == 3);
  CHECK(shifts[0].facility_id == "A");
  CHECK(shifts[0].night_shift == 0);
  CHECK(shifts[0].door_count == 10);
  CHECK(shifts[0].dispenser_count == 5);
  CHECK(shifts[0].compliance == 0.5);
  CHECK(shifts[1].night_shift == 1);
  CHECK(shifts[1].door_count == 11);
  CHECK(shifts[1].dispenser_count == 4);
  CHECK(shifts[2].facility_id == "B");

  std::mt19937_64 eng(3);
  std::shuffle(events.begin(), events.end(), eng);
  const auto reshuffled = hhc::aggregate_shifts(events);
  REQUIRE(reshuffled.size() == shifts.size());
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    CHECK(reshuffled[i].facility_id == shifts[i].facility_id);
    CHECK(reshuffled[i].shift_date == shifts[i].shift_date);
    CHECK(reshuffled[i].night_shift == shifts[i].night_shift);
    CHECK(reshuffled[i].door_count == shifts[i].door_count);
    CHECK(reshuffled[i].dispenser_count == shifts[i].dispenser_count);
  }
}

TEST_CASE("aggregation matches a brute-force group-by on random streams") {
  std::mt19937_64 eng(41);
  std::vector<EventRecord> events;
  std::map<std::tuple<std::string, std::int64_t, int>,
           std::pair<std::int64_t, std::int64_t>>
      expect;
  for (int i = 0; i < 1500; ++i) {
    const std::string fid = std::string(1, (char)('A' + eng() % 4));
    const SensorKind kind =
        eng() % 2 ? SensorKind::door : SensorKind::dispenser;
    const Date date = hhc::add_days({2014, 2, 1}, (std::int64_t)(eng() % 20));
    const DateTime t{date, (int)(eng() % 24), (int)(eng() % 60), 0};
    const std::int64_t count = (std::int64_t)(eng() % 30);
    events.push_back(ev(fid, kind, t, count));
    const auto slot = hhc::classify_shift(t);
    auto& cell = expect[{fid, hhc::to_days(slot.shift_date), slot.night_shift}];
    (kind == SensorKind::door ? cell.first : cell.second) += count;
  }
  const auto shifts = hhc::aggregate_shifts(events);
  REQUIRE(shifts.size() == expect.size());
  std::int64_t door_sum = 0;
  std::size_t i = 0;
  for (const auto& [key, counts] : expect) {
    CHECK(shifts[i].facility_id == std::get<0>(key));
    CHECK(hhc::to_days(shifts[i].shift_date) == std::get<1>(key));
    CHECK(shifts[i].night_shift == std::get<2>(key));
    CHECK(shifts[i].door_count == counts.first);
    CHECK(shifts[i].dispenser_count == counts.second);
    door_sum += shifts[i].door_count;
    ++i;
  }
  std::int64_t door_in = 0;
  for (const auto& e : events)
    if (e.kind == SensorKind::door) door_in += e.count;
  CHECK(door_sum == door_in);
}

TEST_CASE("compliance arithmetic") {
  CHECK(std::abs(hhc::compliance_rate(6140067, 24525806) - 0.2503) < 1e-4);
  CHECK(std::abs(hhc::compliance_rate(5296749, 21273980) - 0.2490) < 1e-4);
  CHECK(hhc::compliance_rate(0, 10) == 0.0);
  CHECK(hhc::compliance_rate(10, 10) == 1.0);
  CHECK_THROWS_AS((void)hhc::compliance_rate(5, 0), hhc::InputError);
}

TEST_CASE("filter applies drop rules in fixed precedence") {
  auto shift = [](std::int64_t door, std::int64_t disp) {
    ShiftRecord r;
    r.facility_id = "A";
    r.shift_date = {2014, 3, 9};
    r.door_count = door;
    r.dispenser_count = disp;
    r.compliance = door > 0 ? (double)disp / (double)door : 0.0;
    return r;
  };
  const std::vector<ShiftRecord> shifts = {
      shift(9, 20),    // low_door even though compliance > 1
      shift(100, 25),  // kept
      shift(50, 9),    // low_dispenser
      shift(50, 0),    // dispenser 0 trips low_dispenser before zero_compliance
      shift(10, 11),   // over_one
      shift(0, 0),     // low_door
  };
  const auto result = hhc::filter_shifts(shifts);
  REQUIRE(result.kept.size() == 1);
  CHECK(result.kept[0].door_count == 100);
  REQUIRE(result.dropped.size() == 5);
  CHECK(result.dropped[0].reason == hhc::DropReason::low_door);
  CHECK(result.dropped[1].reason == hhc::DropReason::low_dispenser);
  CHECK(result.dropped[2].reason == hhc::DropReason::low_dispenser);
  CHECK(result.dropped[3].reason == hhc::DropReason::over_one);
  CHECK(result.dropped[4].reason == hhc::DropReason::low_door);
  CHECK(hhc::drop_reason_name(hhc::DropReason::zero_compliance) ==
        "zero_compliance");
}

TEST_CASE("facility catalog validation") {
  const std::string good =
      "facility_id,state,cdc_division,zipcode,timezone\n"
      "91,IA,West North Central,52242,-06:00\n"
      "92,TX,West South Central,73301,UTC\n";
  const auto facs = hhc::load_facilities(
      temp_file("fac_good.csv", good).string());
  REQUIRE(facs.size() == 2);
  CHECK(facs[0].utc_offset_minutes == -360);
  CHECK(facs[1].utc_offset_minutes == 0);
  CHECK(facs[0].zipcode == "52242");

  const char* bad[] = {
      "facility_id,state,cdc_division,zipcode,timezone\n"
      "91,IA,X,52242,-06:00\n91,IA,X,52242,-06:00\n",      // duplicate id
      "facility_id,state,cdc_division,zipcode,timezone\n"
      "91,Iowa,X,52242,-06:00\n",                          // bad state
      "facility_id,state,cdc_division,zipcode,timezone\n"
      "91,IA,X,5224,-06:00\n",                             // short zip
      "facility_id,state,cdc_division,zipcode,timezone\n"
      "91,IA,X,52242,America/Chicago\n",                   // bad timezone
  };
  int n = 0;
  for (const char* body : bad) {
    const auto p = temp_file("fac_bad" + std::to_string(n++) + ".csv", body);
    CHECK_THROWS_AS((void)hhc::load_facilities(p.string()), hhc::InputError);
  }
}

TEST_CASE("event loading converts offset timestamps to facility time") {
  const auto fac = temp_file("ev_fac.csv",
                             "facility_id,state,cdc_division,zipcode,timezone\n"
                             "91,IA,West North Central,52242,-06:00\n");
  const auto facs = hhc::load_facilities(fac.string());
  const std::string body =
      "facility_id,sensor_id,sensor_kind,timestamp,count\n"
      "91,91-d1,door,2014-03-09T12:30,5\n"
      "91,91-d1,door,2014-03-09T18:30:00Z,7\n"
      "91,91-s1,dispenser,2014-03-09T13:30:00-05:00,2\n";
  const auto events =
      hhc::load_events(temp_file("ev_good.csv", body).string(), facs);
  REQUIRE(events.size() == 3);
  CHECK(events[0].local_time == DateTime{{2014, 3, 9}, 12, 30, 0});
  CHECK(events[1].local_time == DateTime{{2014, 3, 9}, 12, 30, 0});
  CHECK(events[2].local_time == DateTime{{2014, 3, 9}, 12, 30, 0});
  CHECK(events[2].kind == SensorKind::dispenser);

  const char* bad[] = {
      "facility_id,sensor_id,sensor_kind,timestamp,count\n"
      "99,x,door,2014-03-09T12:30,5\n",        // unknown facility
      "facility_id,sensor_id,sensor_kind,timestamp,count\n"
      "91,x,gate,2014-03-09T12:30,5\n",        // unknown sensor kind
      "facility_id,sensor_id,sensor_kind,timestamp,count\n"
      "91,x,door,2014-03-09T12:30,-2\n",       // negative count
  };
  int n = 0;
  for (const char* b : bad) {
    const auto p = temp_file("ev_bad" + std::to_string(n++) + ".csv", b);
    CHECK_THROWS_AS((void)hhc::load_events(p.string(), facs), hhc::InputError);
  }
}

}  // TEST_SUITE
