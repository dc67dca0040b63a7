#ifndef GREENNET_CONFIG_HPP
#define GREENNET_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "greennet/caching.hpp"
#include "greennet/energy.hpp"
#include "greennet/weather.hpp"
#include "greennet/workload.hpp"

namespace greennet {

// Synthetic weather request: one default profile plus per-location overrides.
struct SyntheticWeatherConfig {
  std::uint64_t seed = 7;
  std::size_t horizon_hours = 8760;
  SyntheticWeatherProfile default_profile;
  std::map<std::string, SyntheticWeatherProfile> location_profiles;
};

// Fully resolved experiment description; every field has the documented
// default so a minimal config file only names the topology.
struct RunConfig {
  std::string topology_path;
  std::optional<std::string> weather_csv_path;  // file source
  SyntheticWeatherConfig synthetic_weather;     // used when no file given

  Scenario scenario = Scenario::A;
  std::vector<Strategy> strategies{Strategy::Nbsc};
  std::vector<double> alphas{0.0};
  std::vector<SeasonWindow> seasons;  // empty = the four defaults

  std::size_t n_servers = 40;
  std::size_t n_clients = 80;
  std::size_t request_rate = 10;
  std::size_t catalog_chunks = 4096;
  std::size_t cache_capacity_chunks = 4096;
  double zipf_exponent = 0.9;

  double chassis_watts = 210.0;
  double line_card_watts = 70.0;
  TurbinePowerCurve turbine_curve;  // defaults to the 5 kW unit
  double panel_rating_watts = 4000.0;
  double beta_grid_step = 0.1;

  std::size_t bloom_bits_per_entry = 16;
  std::size_t bloom_hash_count = 4;
  bool symmetric_replies = true;
  std::size_t warmup_hours = 24;
  std::size_t hop_budget = 0;  // 0 = 4x node count

  std::uint64_t seed = 42;
  std::string output_dir = "out";

  std::vector<double> beta_grid() const;
  std::vector<SeasonWindow> season_windows() const;  // resolved defaults
};

// 5.4 kW and 30 kW turbine unit curves. Table data, overridable from the
// config file; six 5 kW units out-produce one 30 kW unit by 2.9x at 6 m/s.
TurbinePowerCurve default_turbine_curve_5kw();
TurbinePowerCurve default_turbine_curve_30kw();

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir);

// Throws with the offending field named.
void validate_run_config(const RunConfig& config);

// Stable content hash over the canonical serialized form.
std::uint64_t config_hash(const RunConfig& config);
std::string config_to_json(const RunConfig& config);

// Per-cell seed: master seed folded with the cell coordinates, so cells can
// run in any order or in parallel.
std::uint64_t cell_seed(std::uint64_t master_seed, double alpha, const std::string& season,
                        Strategy strategy, Scenario scenario);

std::string format_alpha(double alpha);

}  // namespace greennet

#endif  // GREENNET_CONFIG_HPP
