#ifndef GREENNET_WEATHER_HPP
#define GREENNET_WEATHER_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace greennet {

struct WeatherSample {
  double wind_speed_mps = 0.0;
  double ghi_wm2 = 0.0;
};

// Hourly wind speed and global horizontal irradiance for one location.
// Hour indices are implicit: hours()[h] is hour h, contiguous from 0.
class WeatherSeries {
 public:
  WeatherSeries() = default;
  WeatherSeries(std::string location_id, std::vector<WeatherSample> hours,
                std::size_t clamp_warnings = 0);

  const std::string& location_id() const { return location_id_; }
  std::size_t horizon_hours() const { return hours_.size(); }
  const WeatherSample& at(std::size_t hour) const;
  const std::vector<WeatherSample>& hours() const { return hours_; }

  // Number of negative readings clamped to zero at ingestion.
  std::size_t clamp_warnings() const { return clamp_warnings_; }

 private:
  std::string location_id_;
  std::vector<WeatherSample> hours_;
  std::size_t clamp_warnings_ = 0;
};

using WeatherMap = std::map<std::string, WeatherSeries>;

struct SeasonWindow {
  std::string name;
  std::size_t start_hour = 0;
  std::size_t length_hours = 0;
};

// The four study weeks, as hour offsets into a non-leap year. The summer
// window spans 17 days, the others 7.
std::vector<SeasonWindow> default_season_windows();

// Header: location_id,hour,wind_speed_mps,ghi_wm2[,hour_offset]
// One row per location-hour; hour is 0-based and must be contiguous per
// location. Negative readings are clamped to zero and counted. The optional
// hour_offset column rotates a location's series by that many hours.
WeatherMap load_weather_csv(std::istream& in);
WeatherMap load_weather_csv_file(const std::string& path);

void write_weather_csv(std::ostream& out, const WeatherMap& series);

struct SyntheticWeatherProfile {
  double solar_amplitude_wm2 = 800.0;  // clear-sky midday GHI
  double wind_mean_mps = 6.0;
  double wind_variance = 4.0;
  double seasonal_modulation = 0.3;  // +/- swing of the yearly solar envelope
};

// Deterministic artificial weather: a sine-shaped diurnal GHI bump (daylight
// hours 06:00-18:00, zero at night) under a yearly envelope, and lognormal
// wind with the requested mean and variance. Same seed and profile give a
// bit-identical series.
WeatherSeries synthesize_weather(std::uint64_t seed, const SyntheticWeatherProfile& profile,
                                 std::size_t horizon_hours,
                                 std::string location_id = "synthetic");

// Contiguous sub-series with hour indices re-based to zero.
WeatherSeries season_slice(const WeatherSeries& series, const SeasonWindow& window);

}  // namespace greennet

#endif  // GREENNET_WEATHER_HPP
