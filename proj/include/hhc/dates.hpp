#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace hhc {

/// Calendar date. Comparisons follow chronological order.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;
  auto operator<=>(const Date&) const = default;
};

/// Wall-clock instant with no timezone attached.
struct DateTime {
  Date date;
  int hour = 0;
  int minute = 0;
  int second = 0;
  auto operator<=>(const DateTime&) const = default;
};

/// Result of parsing an ISO-8601 timestamp; `offset_minutes` is only
/// meaningful when `has_offset` is true.
struct ParsedTimestamp {
  DateTime when;
  bool has_offset = false;
  int offset_minutes = 0;
};

/// Epidemiological (MMWR) week label.
struct MmwrWeek {
  int year = 0;
  int week = 0;
  auto operator<=>(const MmwrWeek&) const = default;
};

bool valid_date(const Date& d);

/// Days since 1970-01-01.
std::int64_t to_days(const Date& d);
Date from_days(std::int64_t days);
Date add_days(const Date& d, std::int64_t n);

/// Day of week, 0 = Sunday ... 6 = Saturday.
int day_of_week(const Date& d);

/// Minutes since 1970-01-01T00:00 (seconds truncated toward zero are not
/// allowed; callers needing seconds use to_seconds).
std::int64_t to_minutes(const DateTime& t);
std::int64_t to_seconds(const DateTime& t);
DateTime add_minutes(const DateTime& t, std::int64_t n);

/// "YYYY-MM-DD"; `context` prefixes error messages.
Date parse_date(const std::string& s, const std::string& context);

/// "YYYY-MM-DDTHH:MM[:SS]" with optional trailing "Z" / "+HH:MM" / "-HHMM".
ParsedTimestamp parse_timestamp(const std::string& s,
                                const std::string& context);

/// Fixed UTC offset in minutes from "UTC", "Z", "+HH:MM", "-HHMM", or "+H".
int parse_utc_offset(const std::string& s, const std::string& context);

std::string iso_date(const Date& d);
std::string iso_datetime(const DateTime& t);

/// MMWR week containing `d`: weeks run Sunday-Saturday and week 1 of a year
/// is the week containing January 4.
MmwrWeek mmwr_week(const Date& d);

/// 52 or 53 depending on the year.
int mmwr_weeks_in_year(int year);

}  // namespace hhc
