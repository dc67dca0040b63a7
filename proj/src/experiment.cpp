#include "greennet/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "greennet/metrics.hpp"
#include "greennet/rng.hpp"

namespace greennet {

const char* const kSummaryCsvHeader =
    "alpha,season,strategy,scenario,seed,hit_rate,footprint_reduction,green_brown_ratio,"
    "brown_packet_reduction,brown_energy_savings,failed_discoveries";
const char* const kHoursCsvHeader =
    "hour,requests,hits,hop_units,baseline_hop_units,green_packets,brown_packets,"
    "brown_watt_hours,baseline_brown_watt_hours";

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : "nan"; }

std::string fmt_ratio(const GreenBrownRatio& r) {
  if (r.saturated) return r.value > 0.0 ? "inf" : "0";
  return fmt(r.value);
}

struct Inputs {
  Topology topo;
  WeatherMap annual;
  std::vector<RouterEnergyProfile> profiles;
};

Inputs prepare_inputs(const RunConfig& config) {
  Inputs in;
  in.topo = assign_roles(load_topology_file(config.topology_path), config.n_servers,
                         config.n_clients);

  if (config.weather_csv_path) {
    in.annual = load_weather_csv_file(*config.weather_csv_path);
  } else {
    const SyntheticWeatherConfig& sw = config.synthetic_weather;
    for (NodeId id : in.topo.node_ids()) {
      const std::string& loc = in.topo.location_of(id);
      if (in.annual.count(loc)) continue;
      const auto it = sw.location_profiles.find(loc);
      const SyntheticWeatherProfile& profile =
          it != sw.location_profiles.end() ? it->second : sw.default_profile;
      in.annual.emplace(loc, synthesize_weather(sw.seed, profile, sw.horizon_hours, loc));
    }
  }
  for (NodeId id : in.topo.node_ids()) {
    if (!in.annual.count(in.topo.location_of(id))) {
      throw std::runtime_error("weather source has no series for location '" +
                               in.topo.location_of(id) + "'");
    }
  }

  in.profiles = default_profiles(in.topo, config.chassis_watts, config.line_card_watts);
  const std::vector<InfrastructureSizing> sizings = scenario_sizing(
      config.scenario, in.topo, in.annual, in.profiles, config.turbine_curve,
      config.panel_rating_watts, derive_seed(config.seed, hash_string("sizing")),
      config.beta_grid());
  for (std::size_t i = 0; i < in.profiles.size(); ++i) {
    in.profiles[i].renewable_sizing = sizings[i];
  }
  return in;
}

WeatherMap slice_all(const WeatherMap& annual, const SeasonWindow& window) {
  WeatherMap out;
  for (const auto& [loc, series] : annual) out.emplace(loc, season_slice(series, window));
  return out;
}

SimOptions make_options(const RunConfig& config, double alpha, Strategy strategy,
                        std::uint64_t seed) {
  SimOptions opt;
  opt.alpha = alpha;
  opt.strategy = strategy;
  opt.requests_per_client_per_hour = config.request_rate;
  opt.catalog_chunks = config.catalog_chunks;
  opt.zipf_exponent = config.zipf_exponent;
  opt.cache_capacity_chunks = config.cache_capacity_chunks;
  opt.bloom_bits_per_entry = config.bloom_bits_per_entry;
  opt.bloom_hash_count = config.bloom_hash_count;
  opt.symmetric_replies = config.symmetric_replies;
  opt.hop_budget = config.hop_budget;
  opt.warmup_hours = config.warmup_hours;
  opt.seed = seed;
  return opt;
}

std::string hours_csv_name(const RunConfig& config, double alpha, const std::string& season,
                           Strategy strategy) {
  std::ostringstream name;
  name << "hours_" << season << "_" << strategy_name(strategy) << "_"
       << scenario_name(config.scenario) << "_a" << format_alpha(alpha) << ".csv";
  return name.str();
}

void write_hours_csv(const fs::path& path, const MetricsReport&, const SimResult& run) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kHoursCsvHeader << "\n";
  for (const HourCounters& h : run.hours) {
    out << h.hour << ',' << h.requests << ',' << h.cache_hits << ',' << h.hop_units << ','
        << h.baseline_hop_units << ',' << fmt(h.green_weighted_packets) << ','
        << fmt(h.brown_weighted_packets) << ',' << fmt(h.brown_watt_hours) << ','
        << fmt(h.baseline_brown_watt_hours) << '\n';
  }
}

void append_summary_row(std::ostream& out, const RunConfig& config, const CellOutcome& cell) {
  const MetricsRow& agg = cell.report.aggregate;
  out << format_alpha(cell.alpha) << ',' << cell.season << ','
      << strategy_name(cell.strategy) << ',' << scenario_name(config.scenario) << ','
      << cell.seed << ',' << fmt_opt(agg.hit_rate) << ',' << fmt_opt(agg.footprint_reduction)
      << ',' << fmt_ratio(agg.green_brown) << ',' << fmt_opt(agg.brown_packet_reduction) << ','
      << (agg.brown_energy_savings ? fmt(*agg.brown_energy_savings) : "0") << ','
      << cell.report.failed_discoveries << '\n';
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config) {
  validate_run_config(config);
  const Inputs inputs = prepare_inputs(config);

  fs::create_directories(config.output_dir);
  ExperimentResult result;

  nlohmann::json manifest;
  manifest["config"] = nlohmann::json::parse(config_to_json(config));
  {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    manifest["config_hash"] = buf;
  }

  std::ostringstream summary;
  summary << kSummaryCsvHeader << "\n";

  // One baseline (alpha 0, no caching) per season; brown-packet reductions
  // are measured against it.
  std::map<std::string, SimResult> baselines;
  for (const SeasonWindow& window : config.season_windows()) {
    const WeatherMap sliced = slice_all(inputs.annual, window);
    const std::uint64_t seed =
        cell_seed(config.seed, 0.0, window.name, Strategy::None, config.scenario);
    baselines.emplace(window.name,
                      simulate(inputs.topo, sliced, inputs.profiles, config.turbine_curve,
                               config.panel_rating_watts,
                               make_options(config, 0.0, Strategy::None, seed)));
    manifest["baseline_seeds"][window.name] = seed;
  }

  for (double alpha : config.alphas) {
    for (const SeasonWindow& window : config.season_windows()) {
      const WeatherMap sliced = slice_all(inputs.annual, window);
      for (Strategy strategy : config.strategies) {
        CellOutcome cell;
        cell.alpha = alpha;
        cell.season = window.name;
        cell.strategy = strategy;
        cell.seed = cell_seed(config.seed, alpha, window.name, strategy, config.scenario);
        try {
          const SimResult run =
              simulate(inputs.topo, sliced, inputs.profiles, config.turbine_curve,
                       config.panel_rating_watts,
                       make_options(config, alpha, strategy, cell.seed));
          cell.report =
              reduce_metrics(run, &baselines.at(window.name), config.warmup_hours);
          cell.report.alpha = alpha;
          cell.report.season = window.name;
          cell.report.strategy = strategy_name(strategy);
          cell.report.scenario = scenario_name(config.scenario);
          cell.report.seed = cell.seed;
          cell.hours_csv = hours_csv_name(config, alpha, window.name, strategy);
          write_hours_csv(fs::path(config.output_dir) / cell.hours_csv, cell.report, run);
          append_summary_row(summary, config, cell);
          cell.completed = true;
        } catch (const std::exception& e) {
          cell.completed = false;
          cell.error = e.what();
          result.all_completed = false;
        }
        nlohmann::json jc;
        jc["alpha"] = format_alpha(alpha);
        jc["season"] = window.name;
        jc["strategy"] = std::string(strategy_name(strategy));
        jc["scenario"] = std::string(scenario_name(config.scenario));
        jc["seed"] = cell.seed;
        jc["completed"] = cell.completed;
        if (cell.completed) {
          jc["hours_csv"] = cell.hours_csv;
        } else {
          jc["error"] = cell.error;
        }
        manifest["cells"].push_back(jc);
        result.cells.push_back(std::move(cell));
      }
    }
  }

  const fs::path summary_path = fs::path(config.output_dir) / "summary.csv";
  {
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + summary_path.string());
    out << summary.str();
  }
  result.summary_csv_path = summary_path.string();

  const fs::path manifest_path = fs::path(config.output_dir) / "manifest.json";
  {
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + manifest_path.string());
    out << manifest.dump(2) << "\n";
  }
  result.manifest_path = manifest_path.string();
  return result;
}

std::string emit_mix_report(const RunConfig& config) {
  validate_run_config(config);
  const Topology topo = assign_roles(load_topology_file(config.topology_path),
                                     config.n_servers, config.n_clients);

  WeatherMap annual;
  if (config.weather_csv_path) {
    annual = load_weather_csv_file(*config.weather_csv_path);
  } else {
    const SyntheticWeatherConfig& sw = config.synthetic_weather;
    for (NodeId id : topo.node_ids()) {
      const std::string& loc = topo.location_of(id);
      if (annual.count(loc)) continue;
      const auto it = sw.location_profiles.find(loc);
      annual.emplace(loc, synthesize_weather(
                              sw.seed,
                              it != sw.location_profiles.end() ? it->second : sw.default_profile,
                              sw.horizon_hours, loc));
    }
  }

  const std::vector<RouterEnergyProfile> profiles =
      default_profiles(topo, config.chassis_watts, config.line_card_watts);
  Rng capacity_rng(derive_seed(derive_seed(config.seed, hash_string("sizing")),
                               hash_string("capacity")));
  const std::vector<double> grid = config.beta_grid();

  fs::create_directories(config.output_dir);
  const fs::path path = fs::path(config.output_dir) / "mix_report.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "router,location,capacity_c,optimal_beta,avg_green_ratio\n";
  for (std::size_t i = 0; i < topo.node_count(); ++i) {
    const NodeId id = topo.id_at(i);
    const std::string& loc = topo.location_of(id);
    const double capacity =
        config.scenario == Scenario::A ? 2.0 : capacity_rng.uniform(0.0, 3.0);
    const auto it = annual.find(loc);
    if (it == annual.end()) {
      throw std::runtime_error("weather source has no series for location '" + loc + "'");
    }
    const BetaChoice choice =
        optimal_beta(it->second, capacity, profiles[i].all_on_demand_w(), config.turbine_curve,
                     config.panel_rating_watts, grid);
    out << id << ',' << loc << ',' << fmt(capacity) << ',' << fmt(choice.beta) << ','
        << fmt(choice.avg_green_ratio) << '\n';
  }
  return path.string();
}

}  // namespace greennet
