#ifndef GREENNET_ENERGY_HPP
#define GREENNET_ENERGY_HPP

#include <cstddef>
#include <vector>

namespace greennet {

class WeatherSeries;

// Piecewise-linear wind-speed (m/s) to electrical power (W) curve for one
// turbine unit. Output is zero below the first table speed (cut-in) and
// above the last (cut-out), linearly interpolated in between.
class TurbinePowerCurve {
 public:
  struct Point {
    double speed_mps;
    double power_w;
  };

  TurbinePowerCurve() = default;
  explicit TurbinePowerCurve(std::vector<Point> points);

  double operator()(double wind_speed_mps) const;
  double peak_power_w() const;
  const std::vector<Point>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

 private:
  std::vector<Point> points_;
};

// Installed renewable infrastructure of one router: multipliers on the unit
// turbine curve and the unit panel rating, plus the parameters they were
// derived from.
struct InfrastructureSizing {
  double wind_scale = 0.0;   // number of turbine units (fractional allowed)
  double solar_scale = 0.0;  // number of panel units (fractional allowed)
  double beta = 0.0;         // wind share of installed peak capacity, in [0,1]
  double capacity_c = 0.0;   // annual supply peak as a multiple of all-on demand
};

struct RouterEnergyProfile {
  double chassis_power_w = 0.0;
  std::vector<double> line_card_powers_w;  // one per attached link
  InfrastructureSizing renewable_sizing;

  double all_on_demand_w() const;
};

// On/off state of one router. The chassis is on exactly when at least one
// line card is on; construction goes through the factories so the rule can
// never be violated.
class PowerState {
 public:
  static PowerState from_line_cards(std::vector<bool> cards);
  static PowerState all_on(std::size_t card_count);
  static PowerState all_off(std::size_t card_count);

  bool chassis_on() const { return chassis_on_; }
  const std::vector<bool>& line_cards_on() const { return cards_; }
  std::size_t card_count() const { return cards_.size(); }

 private:
  PowerState(bool chassis_on, std::vector<bool> cards);

  bool chassis_on_ = false;
  std::vector<bool> cards_;
};

struct RenewableSupply {
  double wind_power_w = 0.0;
  double solar_power_w = 0.0;

  double total_w() const { return wind_power_w + solar_power_w; }
};

// Instantaneous demand of a router in the given state, in watts.
double power_demand(const RouterEnergyProfile& profile, const PowerState& state);

// Converts one hour of weather into generated power for the given sizing.
// Negative readings are expected to have been clamped at ingestion.
RenewableSupply renewable_supply(const InfrastructureSizing& sizing, double wind_speed_mps,
                                 double ghi_wm2, const TurbinePowerCurve& curve,
                                 double panel_rating_w);

// Fraction of demand covered by renewable supply, capped at 1. A router with
// zero demand is fully green.
double green_ratio(const RenewableSupply& supply, double demand_w);

// Demand not covered by renewable supply, clamped at zero.
double brown_power(const RenewableSupply& supply, const RouterEnergyProfile& profile,
                   const PowerState& state);

struct BrownSavings {
  double value = 0.0;
  bool fully_green = false;  // no brown demand even with everything powered on
};

// Network-wide brown energy reduction against the everything-on baseline.
// states[r][t] and supplies[r][t] must agree in shape with profiles.
BrownSavings brown_savings(const std::vector<std::vector<PowerState>>& states,
                           const std::vector<std::vector<RenewableSupply>>& supplies,
                           const std::vector<RouterEnergyProfile>& profiles);

// Chooses wind_scale and solar_scale so that the annual peak of total supply
// equals capacity_c * demand_all_on_w and wind contributes a `beta` share of
// the installed peak capacity. Throws if a nonzero share is requested from a
// source that never produces over the year.
InfrastructureSizing size_infrastructure(double beta, double capacity_c,
                                         const WeatherSeries& annual_weather,
                                         double demand_all_on_w, const TurbinePowerCurve& curve,
                                         double panel_rating_w);

struct BetaChoice {
  double beta = 0.0;
  double avg_green_ratio = 0.0;
};

// Evaluates every grid point with size_infrastructure and returns the one
// maximizing the annual average green ratio at all-on demand. Ties resolve
// to the smallest beta; unsatisfiable grid points are skipped.
BetaChoice optimal_beta(const WeatherSeries& annual_weather, double capacity_c,
                        double demand_all_on_w, const TurbinePowerCurve& curve,
                        double panel_rating_w, const std::vector<double>& beta_grid);

std::vector<double> default_beta_grid();  // 0.0, 0.1, ..., 1.0

}  // namespace greennet

#endif  // GREENNET_ENERGY_HPP
