#include "greennet/weather.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "greennet/rng.hpp"

namespace greennet {

WeatherSeries::WeatherSeries(std::string location_id, std::vector<WeatherSample> hours,
                             std::size_t clamp_warnings)
    : location_id_(std::move(location_id)), hours_(std::move(hours)),
      clamp_warnings_(clamp_warnings) {}

const WeatherSample& WeatherSeries::at(std::size_t hour) const {
  if (hour >= hours_.size()) {
    throw std::out_of_range("weather: hour " + std::to_string(hour) + " past horizon " +
                            std::to_string(hours_.size()));
  }
  return hours_[hour];
}

std::vector<SeasonWindow> default_season_windows() {
  constexpr std::size_t day = 24;
  // Day-of-year offsets in a non-leap year: Jan 1, Apr 6, Jul 11, Oct 21.
  return {
      {"Winter", 0 * day, 7 * day},
      {"Spring", 95 * day, 7 * day},
      {"Summer", 191 * day, 17 * day},
      {"Fall", 293 * day, 7 * day},
  };
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("weather csv line " + std::to_string(line_no) + ": bad " + what +
                             " value '" + s + "'");
  }
}

long parse_long(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("weather csv line " + std::to_string(line_no) + ": bad " + what +
                             " value '" + s + "'");
  }
}

struct RawSeries {
  std::vector<WeatherSample> hours;
  std::vector<bool> seen;
  std::size_t clamped = 0;
  long offset = 0;
  bool offset_set = false;
};

}  // namespace

WeatherMap load_weather_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error("weather csv: empty input");
  ++line_no;
  const auto header = split_csv(line);
  const bool has_offset = header.size() == 5 && header[4] == "hour_offset";
  if (!(header.size() == 4 || has_offset) || header[0] != "location_id" || header[1] != "hour" ||
      header[2] != "wind_speed_mps" || header[3] != "ghi_wm2") {
    throw std::runtime_error("weather csv: unexpected header '" + line + "'");
  }

  std::map<std::string, RawSeries> raw;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("weather csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    const long hour = parse_long(fields[1], line_no, "hour");
    if (hour < 0) {
      throw std::runtime_error("weather csv line " + std::to_string(line_no) + ": negative hour");
    }
    double wind = parse_double(fields[2], line_no, "wind_speed_mps");
    double ghi = parse_double(fields[3], line_no, "ghi_wm2");

    RawSeries& series = raw[fields[0]];
    if (series.hours.size() <= static_cast<std::size_t>(hour)) {
      series.hours.resize(hour + 1);
      series.seen.resize(hour + 1, false);
    }
    if (series.seen[hour]) {
      throw std::runtime_error("weather csv line " + std::to_string(line_no) +
                               ": duplicate hour " + std::to_string(hour) + " for location '" +
                               fields[0] + "'");
    }
    if (wind < 0.0) {
      wind = 0.0;
      ++series.clamped;
    }
    if (ghi < 0.0) {
      ghi = 0.0;
      ++series.clamped;
    }
    series.hours[hour] = WeatherSample{wind, ghi};
    series.seen[hour] = true;
    if (has_offset) {
      const long offset = parse_long(fields[4], line_no, "hour_offset");
      if (series.offset_set && series.offset != offset) {
        throw std::runtime_error("weather csv line " + std::to_string(line_no) +
                                 ": conflicting hour_offset for location '" + fields[0] + "'");
      }
      series.offset = offset;
      series.offset_set = true;
    }
  }

  WeatherMap out;
  for (auto& [loc, series] : raw) {
    for (std::size_t h = 0; h < series.seen.size(); ++h) {
      if (!series.seen[h]) {
        throw std::runtime_error("weather csv: location '" + loc + "': gap at hour " +
                                 std::to_string(h));
      }
    }
    if (series.offset_set && series.offset != 0 && !series.hours.empty()) {
      // Rotate so that output hour h reads input hour (h + offset) mod horizon.
      const long n = static_cast<long>(series.hours.size());
      const long shift = ((series.offset % n) + n) % n;
      std::rotate(series.hours.begin(), series.hours.begin() + shift, series.hours.end());
    }
    out.emplace(loc, WeatherSeries(loc, std::move(series.hours), series.clamped));
  }
  return out;
}

WeatherMap load_weather_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weather csv: " + path);
  return load_weather_csv(in);
}

void write_weather_csv(std::ostream& out, const WeatherMap& series) {
  out << "location_id,hour,wind_speed_mps,ghi_wm2\n";
  char buf[64];
  for (const auto& [loc, s] : series) {
    for (std::size_t h = 0; h < s.horizon_hours(); ++h) {
      const WeatherSample& sample = s.hours()[h];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", sample.wind_speed_mps, sample.ghi_wm2);
      out << loc << ',' << h << ',' << buf << '\n';
    }
  }
}

WeatherSeries synthesize_weather(std::uint64_t seed, const SyntheticWeatherProfile& profile,
                                 std::size_t horizon_hours, std::string location_id) {
  if (horizon_hours < 24) throw std::invalid_argument("synthesize_weather: horizon below one day");

  Rng rng(derive_seed(seed, hash_string("weather"), hash_string(location_id)));

  // Lognormal parameters matching the requested mean and variance.
  double mu = 0.0;
  double sigma = 0.0;
  const double mean = profile.wind_mean_mps;
  if (mean > 0.0 && profile.wind_variance > 0.0) {
    const double s2 = std::log(1.0 + profile.wind_variance / (mean * mean));
    sigma = std::sqrt(s2);
    mu = std::log(mean) - 0.5 * s2;
  }

  std::vector<WeatherSample> hours(horizon_hours);
  constexpr double kPi = 3.14159265358979323846;
  for (std::size_t h = 0; h < horizon_hours; ++h) {
    const std::size_t day = h / 24;
    const std::size_t hour_of_day = h % 24;

    double ghi = 0.0;
    if (hour_of_day >= 6 && hour_of_day < 18) {
      const double diurnal = std::sin(kPi * (static_cast<double>(hour_of_day) + 0.5 - 6.0) / 12.0);
      const double seasonal =
          1.0 + profile.seasonal_modulation *
                    std::sin(2.0 * kPi * (static_cast<double>(day) - 80.0) / 365.0);
      ghi = std::max(0.0, profile.solar_amplitude_wm2 * seasonal * diurnal);
    }

    double wind = mean;
    if (sigma > 0.0) wind = std::exp(mu + sigma * rng.next_normal());
    if (wind < 0.0 || mean <= 0.0) wind = std::max(0.0, mean);

    hours[h] = WeatherSample{wind, ghi};
  }
  return WeatherSeries(std::move(location_id), std::move(hours));
}

WeatherSeries season_slice(const WeatherSeries& series, const SeasonWindow& window) {
  if (window.start_hour + window.length_hours > series.horizon_hours()) {
    throw std::out_of_range("season_slice: window '" + window.name + "' ends at hour " +
                            std::to_string(window.start_hour + window.length_hours) +
                            " past horizon " + std::to_string(series.horizon_hours()));
  }
  std::vector<WeatherSample> hours(series.hours().begin() + window.start_hour,
                                   series.hours().begin() + window.start_hour +
                                       window.length_hours);
  return WeatherSeries(series.location_id(), std::move(hours));
}

}  // namespace greennet
