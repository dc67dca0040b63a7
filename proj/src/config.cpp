#include "greennet/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "greennet/rng.hpp"

namespace greennet {

using nlohmann::json;

TurbinePowerCurve default_turbine_curve_5kw() {
  return TurbinePowerCurve({
      {3.0, 0.0},
      {4.0, 350.0},
      {5.0, 800.0},
      {6.0, 1450.0},
      {7.0, 2300.0},
      {8.0, 3200.0},
      {9.0, 4100.0},
      {10.0, 4800.0},
      {11.0, 5200.0},
      {12.0, 5400.0},
      {25.0, 5400.0},
  });
}

TurbinePowerCurve default_turbine_curve_30kw() {
  return TurbinePowerCurve({
      {3.0, 0.0},
      {4.0, 600.0},
      {5.0, 1600.0},
      {6.0, 3000.0},
      {7.0, 5200.0},
      {8.0, 8000.0},
      {9.0, 11500.0},
      {10.0, 15500.0},
      {11.0, 20000.0},
      {12.0, 24000.0},
      {13.0, 27000.0},
      {14.0, 29000.0},
      {15.0, 30000.0},
      {25.0, 30000.0},
  });
}

std::vector<double> RunConfig::beta_grid() const {
  std::vector<double> grid;
  if (beta_grid_step <= 0.0 || beta_grid_step > 1.0) return {0.0, 1.0};
  const int steps = static_cast<int>(std::round(1.0 / beta_grid_step));
  for (int i = 0; i <= steps; ++i) grid.push_back(std::min(1.0, i * beta_grid_step));
  return grid;
}

std::vector<SeasonWindow> RunConfig::season_windows() const {
  return seasons.empty() ? default_season_windows() : seasons;
}

namespace {

SyntheticWeatherProfile parse_profile(const json& j, const std::string& field) {
  SyntheticWeatherProfile p;
  if (!j.is_object()) throw std::runtime_error("config field '" + field + "' must be an object");
  if (j.contains("solar_amplitude_wm2")) p.solar_amplitude_wm2 = j.at("solar_amplitude_wm2");
  if (j.contains("wind_mean_mps")) p.wind_mean_mps = j.at("wind_mean_mps");
  if (j.contains("wind_variance")) p.wind_variance = j.at("wind_variance");
  if (j.contains("seasonal_modulation")) p.seasonal_modulation = j.at("seasonal_modulation");
  return p;
}

TurbinePowerCurve parse_curve(const json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "5kw") return default_turbine_curve_5kw();
    if (name == "30kw") return default_turbine_curve_30kw();
    throw std::runtime_error("config field 'turbine_curve': unknown preset '" + name + "'");
  }
  if (!j.is_array()) {
    throw std::runtime_error("config field 'turbine_curve' must be a preset name or a table");
  }
  std::vector<TurbinePowerCurve::Point> points;
  for (const json& row : j) {
    if (!row.is_array() || row.size() != 2) {
      throw std::runtime_error("config field 'turbine_curve': each row is [speed_mps, watts]");
    }
    points.push_back({row[0].get<double>(), row[1].get<double>()});
  }
  return TurbinePowerCurve(std::move(points));
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config: top level must be an object");

  RunConfig cfg;
  cfg.turbine_curve = default_turbine_curve_5kw();

  if (!j.contains("topology")) throw std::runtime_error("config field 'topology' is required");
  cfg.topology_path = resolve_path(base_dir, j.at("topology").get<std::string>());

  if (j.contains("weather")) {
    const json& w = j.at("weather");
    if (w.contains("file")) {
      cfg.weather_csv_path = resolve_path(base_dir, w.at("file").get<std::string>());
    } else if (w.contains("synthetic")) {
      const json& s = w.at("synthetic");
      if (s.contains("seed")) cfg.synthetic_weather.seed = s.at("seed").get<std::uint64_t>();
      if (s.contains("horizon_hours")) {
        cfg.synthetic_weather.horizon_hours = s.at("horizon_hours").get<std::size_t>();
      }
      if (s.contains("default_profile")) {
        cfg.synthetic_weather.default_profile =
            parse_profile(s.at("default_profile"), "weather.synthetic.default_profile");
      }
      if (s.contains("location_profiles")) {
        for (const auto& [loc, prof] : s.at("location_profiles").items()) {
          cfg.synthetic_weather.location_profiles[loc] =
              parse_profile(prof, "weather.synthetic.location_profiles." + loc);
        }
      }
    } else {
      throw std::runtime_error("config field 'weather' needs 'file' or 'synthetic'");
    }
  }

  if (j.contains("scenario")) {
    const auto s = parse_scenario(j.at("scenario").get<std::string>());
    if (!s) throw std::runtime_error("config field 'scenario' must be \"A\" or \"B\"");
    cfg.scenario = *s;
  }
  if (j.contains("strategies")) {
    cfg.strategies.clear();
    for (const json& s : j.at("strategies")) {
      const auto strat = parse_strategy(s.get<std::string>());
      if (!strat) {
        throw std::runtime_error("config field 'strategies': unknown strategy '" +
                                 s.get<std::string>() + "'");
      }
      cfg.strategies.push_back(*strat);
    }
  }
  if (j.contains("alphas")) {
    cfg.alphas = j.at("alphas").get<std::vector<double>>();
  }
  if (j.contains("seasons")) {
    cfg.seasons.clear();
    const auto defaults = default_season_windows();
    for (const json& s : j.at("seasons")) {
      if (s.is_string()) {
        const std::string name = s.get<std::string>();
        bool found = false;
        for (const SeasonWindow& d : defaults) {
          if (d.name == name) {
            cfg.seasons.push_back(d);
            found = true;
            break;
          }
        }
        if (!found) {
          throw std::runtime_error("config field 'seasons': unknown season '" + name + "'");
        }
      } else {
        SeasonWindow w;
        w.name = s.at("name").get<std::string>();
        w.start_hour = s.at("start_hour").get<std::size_t>();
        w.length_hours = s.at("length_hours").get<std::size_t>();
        cfg.seasons.push_back(w);
      }
    }
  }

  if (j.contains("servers")) cfg.n_servers = j.at("servers").get<std::size_t>();
  if (j.contains("clients")) cfg.n_clients = j.at("clients").get<std::size_t>();
  if (j.contains("request_rate")) cfg.request_rate = j.at("request_rate").get<std::size_t>();
  if (j.contains("catalog_chunks")) cfg.catalog_chunks = j.at("catalog_chunks").get<std::size_t>();
  if (j.contains("cache_capacity_chunks")) {
    cfg.cache_capacity_chunks = j.at("cache_capacity_chunks").get<std::size_t>();
  }
  if (j.contains("zipf_exponent")) cfg.zipf_exponent = j.at("zipf_exponent").get<double>();
  if (j.contains("chassis_watts")) cfg.chassis_watts = j.at("chassis_watts").get<double>();
  if (j.contains("line_card_watts")) cfg.line_card_watts = j.at("line_card_watts").get<double>();
  if (j.contains("turbine_curve")) cfg.turbine_curve = parse_curve(j.at("turbine_curve"));
  if (j.contains("panel_rating_watts")) {
    cfg.panel_rating_watts = j.at("panel_rating_watts").get<double>();
  }
  if (j.contains("beta_grid_step")) cfg.beta_grid_step = j.at("beta_grid_step").get<double>();
  if (j.contains("bloom_bits_per_entry")) {
    cfg.bloom_bits_per_entry = j.at("bloom_bits_per_entry").get<std::size_t>();
  }
  if (j.contains("bloom_hash_count")) {
    cfg.bloom_hash_count = j.at("bloom_hash_count").get<std::size_t>();
  }
  if (j.contains("symmetric_replies")) {
    cfg.symmetric_replies = j.at("symmetric_replies").get<bool>();
  }
  if (j.contains("warmup_hours")) cfg.warmup_hours = j.at("warmup_hours").get<std::size_t>();
  if (j.contains("hop_budget")) cfg.hop_budget = j.at("hop_budget").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output_dir")) {
    cfg.output_dir = resolve_path(base_dir, j.at("output_dir").get<std::string>());
  }

  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), std::filesystem::path(path).parent_path().string());
}

void validate_run_config(const RunConfig& config) {
  if (config.topology_path.empty()) throw std::runtime_error("config field 'topology' is empty");
  if (!std::filesystem::exists(config.topology_path)) {
    throw std::runtime_error("config field 'topology': file not found: " + config.topology_path);
  }
  if (config.weather_csv_path && !std::filesystem::exists(*config.weather_csv_path)) {
    throw std::runtime_error("config field 'weather.file': file not found: " +
                             *config.weather_csv_path);
  }
  if (!config.weather_csv_path && config.synthetic_weather.horizon_hours < 24) {
    throw std::runtime_error("config field 'weather.synthetic.horizon_hours' must be >= 24");
  }
  for (double a : config.alphas) {
    if (a < 0.0 || a > 1.0) {
      throw std::runtime_error("config field 'alphas': value " + format_alpha(a) +
                               " outside [0,1]");
    }
  }
  if (config.alphas.empty()) throw std::runtime_error("config field 'alphas' is empty");
  if (config.strategies.empty()) throw std::runtime_error("config field 'strategies' is empty");
  if (config.catalog_chunks == 0) {
    throw std::runtime_error("config field 'catalog_chunks' must be positive");
  }
  if (config.zipf_exponent < 0.0) {
    throw std::runtime_error("config field 'zipf_exponent' must be non-negative");
  }
  if (config.chassis_watts <= 0.0) {
    throw std::runtime_error("config field 'chassis_watts' must be positive");
  }
  if (config.line_card_watts <= 0.0) {
    throw std::runtime_error("config field 'line_card_watts' must be positive");
  }
  if (config.panel_rating_watts < 0.0) {
    throw std::runtime_error("config field 'panel_rating_watts' must be non-negative");
  }
  if (config.turbine_curve.empty()) {
    throw std::runtime_error("config field 'turbine_curve' is empty");
  }
  if (config.bloom_bits_per_entry == 0) {
    throw std::runtime_error("config field 'bloom_bits_per_entry' must be positive");
  }
  if (config.bloom_hash_count == 0) {
    throw std::runtime_error("config field 'bloom_hash_count' must be positive");
  }
  if (config.beta_grid_step <= 0.0 || config.beta_grid_step > 1.0) {
    throw std::runtime_error("config field 'beta_grid_step' must be in (0,1]");
  }
  for (const SeasonWindow& w : config.season_windows()) {
    if (w.length_hours == 0) {
      throw std::runtime_error("config field 'seasons': window '" + w.name +
                               "' has zero length");
    }
  }
  if (config.output_dir.empty()) throw std::runtime_error("config field 'output_dir' is empty");
}

std::string format_alpha(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", alpha);
  return buf;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["topology"] = c.topology_path;
  if (c.weather_csv_path) {
    j["weather"]["file"] = *c.weather_csv_path;
  } else {
    json s;
    s["seed"] = c.synthetic_weather.seed;
    s["horizon_hours"] = c.synthetic_weather.horizon_hours;
    s["default_profile"] = {
        {"solar_amplitude_wm2", c.synthetic_weather.default_profile.solar_amplitude_wm2},
        {"wind_mean_mps", c.synthetic_weather.default_profile.wind_mean_mps},
        {"wind_variance", c.synthetic_weather.default_profile.wind_variance},
        {"seasonal_modulation", c.synthetic_weather.default_profile.seasonal_modulation}};
    for (const auto& [loc, p] : c.synthetic_weather.location_profiles) {
      s["location_profiles"][loc] = {{"solar_amplitude_wm2", p.solar_amplitude_wm2},
                                     {"wind_mean_mps", p.wind_mean_mps},
                                     {"wind_variance", p.wind_variance},
                                     {"seasonal_modulation", p.seasonal_modulation}};
    }
    j["weather"]["synthetic"] = s;
  }
  j["scenario"] = std::string(scenario_name(c.scenario));
  for (Strategy s : c.strategies) j["strategies"].push_back(std::string(strategy_name(s)));
  j["alphas"] = c.alphas;
  for (const SeasonWindow& w : c.season_windows()) {
    j["seasons"].push_back(
        {{"name", w.name}, {"start_hour", w.start_hour}, {"length_hours", w.length_hours}});
  }
  j["servers"] = c.n_servers;
  j["clients"] = c.n_clients;
  j["request_rate"] = c.request_rate;
  j["catalog_chunks"] = c.catalog_chunks;
  j["cache_capacity_chunks"] = c.cache_capacity_chunks;
  j["zipf_exponent"] = c.zipf_exponent;
  j["chassis_watts"] = c.chassis_watts;
  j["line_card_watts"] = c.line_card_watts;
  for (const auto& p : c.turbine_curve.points()) {
    j["turbine_curve"].push_back({p.speed_mps, p.power_w});
  }
  j["panel_rating_watts"] = c.panel_rating_watts;
  j["beta_grid_step"] = c.beta_grid_step;
  j["bloom_bits_per_entry"] = c.bloom_bits_per_entry;
  j["bloom_hash_count"] = c.bloom_hash_count;
  j["symmetric_replies"] = c.symmetric_replies;
  j["warmup_hours"] = c.warmup_hours;
  j["hop_budget"] = c.hop_budget;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

std::uint64_t config_hash(const RunConfig& config) {
  return hash_string(config_to_json(config));
}

std::uint64_t cell_seed(std::uint64_t master_seed, double alpha, const std::string& season,
                        Strategy strategy, Scenario scenario) {
  return derive_seed(master_seed, hash_string(format_alpha(alpha)), hash_string(season),
                     hash_string(strategy_name(strategy)), hash_string(scenario_name(scenario)));
}

}  // namespace greennet
