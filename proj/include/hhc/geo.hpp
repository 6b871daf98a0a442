#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hhc/dates.hpp"
#include "hhc/ingest.hpp"

namespace hhc {

struct LatLon {
  double latitude = 0.0;
  double longitude = 0.0;
};

/// Cell of the global 2.5-degree grid: 73 latitude rows from the north pole
/// down, 144 longitude columns east from Greenwich.
struct GridElement {
  int lat_index = 0;
  int lon_index = 0;
  auto operator<=>(const GridElement&) const = default;
};

using CentroidTable = std::unordered_map<std::string, LatLon>;

/// Load `zipcode,latitude,longitude`; duplicate zipcodes are rejected.
CentroidTable load_centroids(const std::string& path);

/// Exact lookup; throws JoinError naming the facility when the zip is absent.
LatLon zip_to_centroid(const std::string& zipcode, const CentroidTable& table,
                       const std::string& facility_id);

/// Map coordinates to the grid cell whose center is nearest. Centers sit at
/// latitudes 90, 87.5, ..., -90 and longitudes 0, 2.5, ..., 357.5 east.
/// Accepts latitude in [-90, 90] and longitude in [-180, 360).
GridElement latlon_to_grid(double latitude, double longitude);

/// Per-grid weather at fixed UTC reporting hours.
class WeatherTable {
 public:
  static WeatherTable load(const std::string& path);

  /// (air_temp_k, rel_humidity_pct) at an exact (grid, UTC time) key; throws
  /// JoinError listing both when absent.
  std::pair<double, double> lookup(const GridElement& grid,
                                   const DateTime& utc) const;

  std::size_t size() const { return obs_.size(); }

 private:
  std::map<std::tuple<int, int, std::int64_t>, std::pair<double, double>> obs_;
};

struct FluReport {
  std::string city;
  LatLon location;
  int mmwr_year = 0;
  int mmwr_week = 0;
  std::int64_t flu_deaths = 0;
  std::int64_t total_deaths = 0;
};

/// Weekly mortality-based flu severity per reporting city.
struct FluTable {
  /// Unique cities sorted by name; locations are consistent across weeks.
  std::vector<std::pair<std::string, LatLon>> cities;
  std::map<std::tuple<std::string, int, int>, double> severity;
};

FluTable load_flu(const std::string& path);

/// flu_deaths / total_deaths; throws InferenceError when total_deaths is 0.
double flu_severity(std::int64_t flu_deaths, std::int64_t total_deaths);
double flu_severity(const FluReport& r);

/// Argmin of plain Euclidean distance in (lat, lon) degree space; ties break
/// toward the lexicographically smaller name. Throws ConfigError when the
/// city list is empty.
std::string nearest_reporting_city(
    const LatLon& loc,
    const std::vector<std::pair<std::string, LatLon>>& cities);

/// Severity for (city, MMWR week); throws JoinError when unreported.
double flu_lookup(const FluTable& table, const std::string& city,
                  const MmwrWeek& week);

/// Weather for one shift: day shifts read the 06:00 UTC observation of
/// shift_date, night shifts the 18:00 UTC observation.
std::pair<double, double> join_weather(const ShiftRecord& shift,
                                       const GridElement& grid,
                                       const WeatherTable& table);

}  // namespace hhc
