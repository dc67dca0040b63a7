#ifndef GREENNET_METRICS_HPP
#define GREENNET_METRICS_HPP

#include <cstddef>
#include <optional>
#include <string>

#include "greennet/workload.hpp"

namespace greennet {

// Ratio with an explicit flag for a zero denominator (fully green hour).
struct GreenBrownRatio {
  double value = 0.0;
  bool saturated = false;
};

// Fraction of requests served by content routers rather than origin servers.
std::optional<double> hit_rate(const HourCounters& h);

// 1 - traffic footprint relative to the shortest-path no-caching baseline.
// Negative when green detours outweigh the caching savings.
std::optional<double> footprint_reduction(const HourCounters& h);

GreenBrownRatio green_brown_ratio(const HourCounters& h);

// 1 - brown-weighted packets relative to a baseline run (alpha = 0, no
// caching by convention).
std::optional<double> brown_packet_reduction(const HourCounters& h,
                                             const HourCounters& baseline);

// Eq-6 style savings from the accumulated watt-hour counters.
std::optional<double> brown_energy_savings(const HourCounters& h);

struct MetricsRow {
  std::optional<double> hit_rate;
  std::optional<double> footprint_reduction;
  GreenBrownRatio green_brown;
  std::optional<double> brown_packet_reduction;
  std::optional<double> brown_energy_savings;
};

struct MetricsReport {
  std::vector<MetricsRow> per_hour;  // every simulated hour, warmup included
  MetricsRow aggregate;              // warmup hours excluded, counter-weighted
  std::size_t warmup_hours = 0;
  std::uint64_t failed_discoveries = 0;

  // Run coordinates, carried for CSV emission.
  double alpha = 0.0;
  std::string season;
  std::string strategy;
  std::string scenario;
  std::uint64_t seed = 0;
};

// Reduces a run (and its baseline, when available) into the five metrics.
// Aggregates are counter-weighted: sums of numerators over sums of
// denominators, never means of hourly ratios.
MetricsReport reduce_metrics(const SimResult& run, const SimResult* baseline,
                             std::size_t warmup_hours);

}  // namespace greennet

#endif  // GREENNET_METRICS_HPP
