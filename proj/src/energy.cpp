#include "greennet/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "greennet/weather.hpp"

namespace greennet {

TurbinePowerCurve::TurbinePowerCurve(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("turbine curve: empty table");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].power_w < 0.0) throw std::invalid_argument("turbine curve: negative power");
    if (i > 0 && points_[i].speed_mps <= points_[i - 1].speed_mps) {
      throw std::invalid_argument("turbine curve: speeds must be strictly increasing");
    }
  }
}

double TurbinePowerCurve::operator()(double wind_speed_mps) const {
  if (points_.empty()) return 0.0;
  if (wind_speed_mps < points_.front().speed_mps) return 0.0;  // below cut-in
  if (wind_speed_mps > points_.back().speed_mps) return 0.0;   // above cut-out
  auto upper = std::lower_bound(points_.begin(), points_.end(), wind_speed_mps,
                                [](const Point& p, double s) { return p.speed_mps < s; });
  if (upper == points_.begin()) return upper->power_w;
  auto lower = upper - 1;
  if (upper == points_.end()) return lower->power_w;
  const double span = upper->speed_mps - lower->speed_mps;
  const double t = (wind_speed_mps - lower->speed_mps) / span;
  return lower->power_w + t * (upper->power_w - lower->power_w);
}

double TurbinePowerCurve::peak_power_w() const {
  double peak = 0.0;
  for (const Point& p : points_) peak = std::max(peak, p.power_w);
  return peak;
}

double RouterEnergyProfile::all_on_demand_w() const {
  double total = chassis_power_w;
  for (double lc : line_card_powers_w) total += lc;
  return total;
}

PowerState::PowerState(bool chassis_on, std::vector<bool> cards)
    : chassis_on_(chassis_on), cards_(std::move(cards)) {}

PowerState PowerState::from_line_cards(std::vector<bool> cards) {
  const bool any_on = std::find(cards.begin(), cards.end(), true) != cards.end();
  return PowerState(any_on, std::move(cards));
}

PowerState PowerState::all_on(std::size_t card_count) {
  return from_line_cards(std::vector<bool>(card_count, true));
}

PowerState PowerState::all_off(std::size_t card_count) {
  return from_line_cards(std::vector<bool>(card_count, false));
}

double power_demand(const RouterEnergyProfile& profile, const PowerState& state) {
  if (profile.line_card_powers_w.size() != state.card_count()) {
    throw std::invalid_argument("power_demand: state and profile line-card counts differ");
  }
  double total = state.chassis_on() ? profile.chassis_power_w : 0.0;
  for (std::size_t i = 0; i < state.card_count(); ++i) {
    if (state.line_cards_on()[i]) total += profile.line_card_powers_w[i];
  }
  return total;
}

RenewableSupply renewable_supply(const InfrastructureSizing& sizing, double wind_speed_mps,
                                 double ghi_wm2, const TurbinePowerCurve& curve,
                                 double panel_rating_w) {
  RenewableSupply supply;
  supply.wind_power_w = curve.empty() ? 0.0 : sizing.wind_scale * curve(wind_speed_mps);
  supply.solar_power_w = sizing.solar_scale * panel_rating_w * (ghi_wm2 / 1000.0);
  return supply;
}

double green_ratio(const RenewableSupply& supply, double demand_w) {
  if (demand_w <= 0.0) return 1.0;  // an off router draws no brown power
  const double total = supply.total_w();
  if (total >= demand_w) return 1.0;
  return total / demand_w;
}

double brown_power(const RenewableSupply& supply, const RouterEnergyProfile& profile,
                   const PowerState& state) {
  return std::max(0.0, power_demand(profile, state) - supply.total_w());
}

BrownSavings brown_savings(const std::vector<std::vector<PowerState>>& states,
                           const std::vector<std::vector<RenewableSupply>>& supplies,
                           const std::vector<RouterEnergyProfile>& profiles) {
  if (states.size() != profiles.size() || supplies.size() != profiles.size()) {
    throw std::invalid_argument("brown_savings: router dimension mismatch");
  }
  double actual = 0.0;
  double baseline = 0.0;
  for (std::size_t r = 0; r < profiles.size(); ++r) {
    if (states[r].size() != supplies[r].size()) {
      throw std::invalid_argument("brown_savings: hour dimension mismatch");
    }
    const PowerState all_on = PowerState::all_on(profiles[r].line_card_powers_w.size());
    for (std::size_t t = 0; t < states[r].size(); ++t) {
      actual += brown_power(supplies[r][t], profiles[r], states[r][t]);
      baseline += brown_power(supplies[r][t], profiles[r], all_on);
    }
  }
  if (baseline <= 0.0) return BrownSavings{0.0, true};
  return BrownSavings{1.0 - actual / baseline, false};
}

namespace {

// Annual peaks of the unit wind and solar series.
struct UnitPeaks {
  double wind = 0.0;
  double solar = 0.0;
};

UnitPeaks unit_peaks(const WeatherSeries& weather, const TurbinePowerCurve& curve,
                     double panel_rating_w) {
  UnitPeaks peaks;
  for (const WeatherSample& s : weather.hours()) {
    if (!curve.empty()) peaks.wind = std::max(peaks.wind, curve(s.wind_speed_mps));
    peaks.solar = std::max(peaks.solar, panel_rating_w * (s.ghi_wm2 / 1000.0));
  }
  return peaks;
}

}  // namespace

InfrastructureSizing size_infrastructure(double beta, double capacity_c,
                                         const WeatherSeries& annual_weather,
                                         double demand_all_on_w, const TurbinePowerCurve& curve,
                                         double panel_rating_w) {
  if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("size_infrastructure: beta not in [0,1]");
  if (capacity_c < 0.0) throw std::invalid_argument("size_infrastructure: negative capacity");

  InfrastructureSizing sizing;
  sizing.beta = beta;
  sizing.capacity_c = capacity_c;

  const double target = capacity_c * demand_all_on_w;
  if (target <= 0.0) return sizing;  // both scales zero

  const UnitPeaks peaks = unit_peaks(annual_weather, curve, panel_rating_w);
  const double wind_target = beta * target;
  const double solar_target = (1.0 - beta) * target;
  if (wind_target > 0.0 && peaks.wind <= 0.0) {
    throw std::runtime_error("size_infrastructure: wind share requested but the series never produces wind power");
  }
  if (solar_target > 0.0 && peaks.solar <= 0.0) {
    throw std::runtime_error("size_infrastructure: solar share requested but the series never produces solar power");
  }
  sizing.wind_scale = wind_target > 0.0 ? wind_target / peaks.wind : 0.0;
  sizing.solar_scale = solar_target > 0.0 ? solar_target / peaks.solar : 0.0;

  // The wind and solar peaks rarely coincide, so after the per-source split
  // the peak of the combined series falls short of the target. Rescaling
  // both sources by a common factor restores the target peak while keeping
  // wind's share of installed capacity at beta.
  double combined_peak = 0.0;
  for (const WeatherSample& s : annual_weather.hours()) {
    const RenewableSupply supply = renewable_supply(sizing, s.wind_speed_mps, s.ghi_wm2, curve,
                                                    panel_rating_w);
    combined_peak = std::max(combined_peak, supply.total_w());
  }
  if (combined_peak > 0.0) {
    const double factor = target / combined_peak;
    sizing.wind_scale *= factor;
    sizing.solar_scale *= factor;
  }
  return sizing;
}

BetaChoice optimal_beta(const WeatherSeries& annual_weather, double capacity_c,
                        double demand_all_on_w, const TurbinePowerCurve& curve,
                        double panel_rating_w, const std::vector<double>& beta_grid) {
  if (beta_grid.empty()) throw std::invalid_argument("optimal_beta: empty grid");

  BetaChoice best;
  best.avg_green_ratio = -1.0;
  for (double beta : beta_grid) {
    InfrastructureSizing sizing;
    try {
      sizing = size_infrastructure(beta, capacity_c, annual_weather, demand_all_on_w, curve,
                                   panel_rating_w);
    } catch (const std::runtime_error&) {
      continue;  // unsatisfiable share on this series
    }
    double sum = 0.0;
    for (const WeatherSample& s : annual_weather.hours()) {
      const RenewableSupply supply = renewable_supply(sizing, s.wind_speed_mps, s.ghi_wm2, curve,
                                                      panel_rating_w);
      sum += green_ratio(supply, demand_all_on_w);
    }
    const double avg = annual_weather.horizon_hours() == 0
                           ? 0.0
                           : sum / static_cast<double>(annual_weather.horizon_hours());
    if (avg > best.avg_green_ratio ||
        (avg == best.avg_green_ratio && beta < best.beta)) {
      best.beta = beta;
      best.avg_green_ratio = avg;
    }
  }
  if (best.avg_green_ratio < 0.0) {
    throw std::runtime_error("optimal_beta: no satisfiable beta in the grid");
  }
  return best;
}

std::vector<double> default_beta_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

}  // namespace greennet
