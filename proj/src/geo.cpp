#include "hhc/geo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "hhc/csv.hpp"
#include "hhc/errors.hpp"

namespace hhc {

namespace {

std::string grid_str(const GridElement& g) {
  return "(" + std::to_string(g.lat_index) + "," +
         std::to_string(g.lon_index) + ")";
}

}  // namespace

CentroidTable load_centroids(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t c_zip = t.column("zipcode");
  const std::size_t c_lat = t.column("latitude");
  const std::size_t c_lon = t.column("longitude");
  CentroidTable table;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string ctx = path + ":" + std::to_string(t.lines[i]);
    const std::string& zip = t.rows[i][c_zip];
    if (zip.size() != 5 ||
        !std::all_of(zip.begin(), zip.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
      throw InputError(ctx + ": invalid zipcode '" + zip + "'");
    LatLon loc{csv::to_double(t, i, c_lat), csv::to_double(t, i, c_lon)};
    if (loc.latitude < -90.0 || loc.latitude > 90.0 ||
        loc.longitude < -180.0 || loc.longitude >= 360.0)
      throw InputError(ctx + ": coordinates out of range");
    if (!table.emplace(zip, loc).second)
      throw InputError(ctx + ": duplicate zipcode '" + zip + "'");
  }
  return table;
}

LatLon zip_to_centroid(const std::string& zipcode, const CentroidTable& table,
                       const std::string& facility_id) {
  const auto it = table.find(zipcode);
  if (it == table.end())
    throw JoinError("facility '" + facility_id + "': zipcode '" + zipcode +
                    "' not in centroid table");
  return it->second;
}

GridElement latlon_to_grid(double latitude, double longitude) {
  if (!(latitude >= -90.0 && latitude <= 90.0) ||
      !(longitude >= -180.0 && longitude < 360.0))
    throw InputError("coordinates out of range: (" + std::to_string(latitude) +
                     "," + std::to_string(longitude) + ")");
  GridElement g;
  g.lat_index = static_cast<int>(std::llround((90.0 - latitude) / 2.5));
  g.lat_index = std::clamp(g.lat_index, 0, 72);
  double east = std::fmod(longitude, 360.0);
  if (east < 0.0) east += 360.0;
  g.lon_index = static_cast<int>(std::floor(east / 2.5)) % 144;
  return g;
}

WeatherTable WeatherTable::load(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t c_lat = t.column("latitude");
  const std::size_t c_lon = t.column("longitude");
  const std::size_t c_ts = t.column("timestamp_utc");
  const std::size_t c_temp = t.column("air_temp_k");
  const std::size_t c_hum = t.column("rel_humidity_pct");
  WeatherTable table;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string ctx = path + ":" + std::to_string(t.lines[i]);
    const GridElement g = latlon_to_grid(csv::to_double(t, i, c_lat),
                                         csv::to_double(t, i, c_lon));
    const ParsedTimestamp ts = parse_timestamp(t.rows[i][c_ts], ctx);
    const DateTime utc =
        ts.has_offset ? add_minutes(ts.when, -ts.offset_minutes) : ts.when;
    const double temp = csv::to_double(t, i, c_temp);
    const double hum = csv::to_double(t, i, c_hum);
    if (temp <= 0.0)
      throw InputError(ctx + ": non-positive air temperature " +
                       std::to_string(temp));
    if (hum < 0.0 || hum > 100.0)
      throw InputError(ctx + ": relative humidity out of [0,100]: " +
                       std::to_string(hum));
    const auto key = std::make_tuple(g.lat_index, g.lon_index, to_seconds(utc));
    if (!table.obs_.emplace(key, std::make_pair(temp, hum)).second)
      throw InputError(ctx + ": duplicate observation for grid " +
                       grid_str(g) + " at " + iso_datetime(utc));
  }
  return table;
}

std::pair<double, double> WeatherTable::lookup(const GridElement& grid,
                                               const DateTime& utc) const {
  const auto it =
      obs_.find(std::make_tuple(grid.lat_index, grid.lon_index, to_seconds(utc)));
  if (it == obs_.end())
    throw JoinError("no weather observation for grid " + grid_str(grid) +
                    " at " + iso_datetime(utc));
  return it->second;
}

FluTable load_flu(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t c_city = t.column("city");
  const std::size_t c_lat = t.column("latitude");
  const std::size_t c_lon = t.column("longitude");
  const std::size_t c_year = t.column("mmwr_year");
  const std::size_t c_week = t.column("mmwr_week");
  const std::size_t c_flu = t.column("flu_deaths");
  const std::size_t c_total = t.column("total_deaths");

  FluTable table;
  std::map<std::string, LatLon> locations;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string ctx = path + ":" + std::to_string(t.lines[i]);
    FluReport r;
    r.city = t.rows[i][c_city];
    if (r.city.empty()) throw InputError(ctx + ": empty city name");
    r.location = {csv::to_double(t, i, c_lat), csv::to_double(t, i, c_lon)};
    r.mmwr_year = static_cast<int>(csv::to_int(t, i, c_year));
    r.mmwr_week = static_cast<int>(csv::to_int(t, i, c_week));
    r.flu_deaths = csv::to_int(t, i, c_flu);
    r.total_deaths = csv::to_int(t, i, c_total);
    if (r.total_deaths <= 0)
      throw InputError(ctx + ": total_deaths must be positive");
    if (r.flu_deaths < 0 || r.flu_deaths > r.total_deaths)
      throw InputError(ctx + ": flu_deaths outside [0, total_deaths]");
    if (r.mmwr_week < 1 || r.mmwr_week > mmwr_weeks_in_year(r.mmwr_year))
      throw InputError(ctx + ": MMWR week " + std::to_string(r.mmwr_week) +
                       " invalid for year " + std::to_string(r.mmwr_year));
    const auto [it, inserted] = locations.emplace(r.city, r.location);
    if (!inserted && (it->second.latitude != r.location.latitude ||
                      it->second.longitude != r.location.longitude))
      throw InputError(ctx + ": city '" + r.city +
                       "' listed with conflicting coordinates");
    const auto key = std::make_tuple(r.city, r.mmwr_year, r.mmwr_week);
    if (!table.severity.emplace(key, flu_severity(r)).second)
      throw InputError(ctx + ": duplicate flu report for '" + r.city +
                       "' week " + std::to_string(r.mmwr_year) + "-" +
                       std::to_string(r.mmwr_week));
  }
  table.cities.assign(locations.begin(), locations.end());
  return table;
}

double flu_severity(std::int64_t flu_deaths, std::int64_t total_deaths) {
  if (total_deaths == 0)
    throw InferenceError("flu severity undefined: total_deaths is zero");
  return static_cast<double>(flu_deaths) / static_cast<double>(total_deaths);
}

double flu_severity(const FluReport& r) {
  return flu_severity(r.flu_deaths, r.total_deaths);
}

std::string nearest_reporting_city(
    const LatLon& loc,
    const std::vector<std::pair<std::string, LatLon>>& cities) {
  if (cities.empty())
    throw ConfigError("no reporting cities available for nearest-city lookup");
  const std::string* best = nullptr;
  double best_d2 = 0.0;
  for (const auto& [name, where] : cities) {
    const double dlat = loc.latitude - where.latitude;
    const double dlon = loc.longitude - where.longitude;
    const double d2 = dlat * dlat + dlon * dlon;
    if (!best || d2 < best_d2 || (d2 == best_d2 && name < *best)) {
      best = &name;
      best_d2 = d2;
    }
  }
  return *best;
}

double flu_lookup(const FluTable& table, const std::string& city,
                  const MmwrWeek& week) {
  const auto it =
      table.severity.find(std::make_tuple(city, week.year, week.week));
  if (it == table.severity.end())
    throw JoinError("no flu report for city '" + city + "' MMWR week " +
                    std::to_string(week.year) + "-" +
                    std::to_string(week.week));
  return it->second;
}

std::pair<double, double> join_weather(const ShiftRecord& shift,
                                       const GridElement& grid,
                                       const WeatherTable& table) {
  DateTime utc;
  utc.date = shift.shift_date;
  utc.hour = shift.night_shift ? 18 : 6;
  return table.lookup(grid, utc);
}

}  // namespace hhc
