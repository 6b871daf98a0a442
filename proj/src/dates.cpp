#include "hhc/dates.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "hhc/errors.hpp"

namespace hhc {

namespace {

namespace chr = std::chrono;

chr::year_month_day ymd(const Date& d) {
  return chr::year{d.year} / chr::month{static_cast<unsigned>(d.month)} /
         chr::day{static_cast<unsigned>(d.day)};
}

[[noreturn]] void bad(const std::string& context, const std::string& what,
                      const std::string& s) {
  throw InputError(context + ": " + what + " '" + s + "'");
}

int parse_fixed_int(const std::string& s, std::size_t pos, std::size_t len,
                    const std::string& context, const std::string& what) {
  if (pos + len > s.size()) bad(context, what, s);
  int v = 0;
  const char* begin = s.data() + pos;
  const auto [ptr, ec] = std::from_chars(begin, begin + len, v);
  if (ec != std::errc() || ptr != begin + len) bad(context, what, s);
  return v;
}

/// Sunday on or before d, as days since epoch.
std::int64_t week_start(const Date& d) {
  const std::int64_t days = to_days(d);
  return days - day_of_week(d);
}

/// Start (days since epoch) of MMWR week 1 of `year`: the Sunday on or
/// before January 4.
std::int64_t mmwr_year_start(int year) {
  return week_start(Date{year, 1, 4});
}

}  // namespace

bool valid_date(const Date& d) {
  return ymd(d).ok();
}

std::int64_t to_days(const Date& d) {
  return chr::sys_days{ymd(d)}.time_since_epoch().count();
}

Date from_days(std::int64_t days) {
  const chr::year_month_day v{chr::sys_days{chr::days{days}}};
  return Date{static_cast<int>(v.year()),
              static_cast<int>(static_cast<unsigned>(v.month())),
              static_cast<int>(static_cast<unsigned>(v.day()))};
}

Date add_days(const Date& d, std::int64_t n) {
  return from_days(to_days(d) + n);
}

int day_of_week(const Date& d) {
  return static_cast<int>(chr::weekday{chr::sys_days{ymd(d)}}.c_encoding());
}

std::int64_t to_minutes(const DateTime& t) {
  return to_days(t.date) * 1440 + t.hour * 60 + t.minute;
}

std::int64_t to_seconds(const DateTime& t) {
  return to_minutes(t) * 60 + t.second;
}

DateTime add_minutes(const DateTime& t, std::int64_t n) {
  std::int64_t total = to_minutes(t) + n;
  std::int64_t days = total / 1440;
  std::int64_t rem = total % 1440;
  if (rem < 0) {
    rem += 1440;
    --days;
  }
  DateTime out;
  out.date = from_days(days);
  out.hour = static_cast<int>(rem / 60);
  out.minute = static_cast<int>(rem % 60);
  out.second = t.second;
  return out;
}

Date parse_date(const std::string& s, const std::string& context) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    bad(context, "invalid date", s);
  Date d;
  d.year = parse_fixed_int(s, 0, 4, context, "invalid date");
  d.month = parse_fixed_int(s, 5, 2, context, "invalid date");
  d.day = parse_fixed_int(s, 8, 2, context, "invalid date");
  if (!valid_date(d)) bad(context, "invalid date", s);
  return d;
}

ParsedTimestamp parse_timestamp(const std::string& s,
                                const std::string& context) {
  if (s.size() < 16 || s[10] != 'T') bad(context, "invalid timestamp", s);
  ParsedTimestamp out;
  out.when.date = parse_date(s.substr(0, 10), context);
  out.when.hour = parse_fixed_int(s, 11, 2, context, "invalid timestamp");
  if (s[13] != ':') bad(context, "invalid timestamp", s);
  out.when.minute = parse_fixed_int(s, 14, 2, context, "invalid timestamp");
  std::size_t pos = 16;
  if (pos < s.size() && s[pos] == ':') {
    out.when.second = parse_fixed_int(s, 17, 2, context, "invalid timestamp");
    pos = 19;
  }
  if (pos < s.size()) {
    out.has_offset = true;
    out.offset_minutes = parse_utc_offset(s.substr(pos), context);
  }
  if (out.when.hour > 23 || out.when.minute > 59 || out.when.second > 60)
    bad(context, "invalid timestamp", s);
  return out;
}

int parse_utc_offset(const std::string& s, const std::string& context) {
  if (s == "UTC" || s == "utc" || s == "Z" || s == "z") return 0;
  if (s.empty() || (s[0] != '+' && s[0] != '-'))
    bad(context, "invalid UTC offset", s);
  const int sign = s[0] == '-' ? -1 : 1;
  const std::string body = s.substr(1);
  int hours = 0;
  int minutes = 0;
  if (body.size() == 5 && body[2] == ':') {
    hours = parse_fixed_int(body, 0, 2, context, "invalid UTC offset");
    minutes = parse_fixed_int(body, 3, 2, context, "invalid UTC offset");
  } else if (body.size() == 4) {
    hours = parse_fixed_int(body, 0, 2, context, "invalid UTC offset");
    minutes = parse_fixed_int(body, 2, 2, context, "invalid UTC offset");
  } else if (body.size() == 2) {
    hours = parse_fixed_int(body, 0, 2, context, "invalid UTC offset");
  } else if (body.size() == 1) {
    hours = parse_fixed_int(body, 0, 1, context, "invalid UTC offset");
  } else {
    bad(context, "invalid UTC offset", s);
  }
  if (hours > 18 || minutes > 59) bad(context, "invalid UTC offset", s);
  return sign * (hours * 60 + minutes);
}

std::string iso_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

std::string iso_datetime(const DateTime& t) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", t.date.year,
                t.date.month, t.date.day, t.hour, t.minute, t.second);
  return buf;
}

MmwrWeek mmwr_week(const Date& d) {
  const std::int64_t start = week_start(d);
  // The week belongs to the calendar year of its Wednesday (start + 3): that
  // is equivalent to "week 1 contains January 4".
  const int year = from_days(start + 3).year;
  MmwrWeek out;
  out.year = year;
  out.week = static_cast<int>((start - mmwr_year_start(year)) / 7) + 1;
  return out;
}

int mmwr_weeks_in_year(int year) {
  return static_cast<int>((mmwr_year_start(year + 1) - mmwr_year_start(year)) /
                          7);
}

}  // namespace hhc
