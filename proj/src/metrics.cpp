#include "greennet/metrics.hpp"

#include <limits>

namespace greennet {

std::optional<double> hit_rate(const HourCounters& h) {
  if (h.requests == 0) return std::nullopt;
  return static_cast<double>(h.cache_hits) / static_cast<double>(h.requests);
}

std::optional<double> footprint_reduction(const HourCounters& h) {
  if (h.baseline_hop_units == 0) return std::nullopt;
  return 1.0 - static_cast<double>(h.hop_units) / static_cast<double>(h.baseline_hop_units);
}

GreenBrownRatio green_brown_ratio(const HourCounters& h) {
  if (h.brown_weighted_packets > 0.0) {
    return GreenBrownRatio{h.green_weighted_packets / h.brown_weighted_packets, false};
  }
  return GreenBrownRatio{
      h.green_weighted_packets > 0.0 ? std::numeric_limits<double>::infinity() : 0.0, true};
}

std::optional<double> brown_packet_reduction(const HourCounters& h,
                                             const HourCounters& baseline) {
  if (baseline.brown_weighted_packets <= 0.0) return std::nullopt;
  return 1.0 - h.brown_weighted_packets / baseline.brown_weighted_packets;
}

std::optional<double> brown_energy_savings(const HourCounters& h) {
  if (h.baseline_brown_watt_hours <= 0.0) return std::nullopt;  // fully green hour
  return 1.0 - h.brown_watt_hours / h.baseline_brown_watt_hours;
}

namespace {

// Counter totals over [first, last); aggregation always sums numerators and
// denominators before dividing.
HourCounters sum_hours(const std::vector<HourCounters>& hours, std::size_t first) {
  HourCounters total;
  for (std::size_t t = first; t < hours.size(); ++t) {
    const HourCounters& h = hours[t];
    total.requests += h.requests;
    total.cache_hits += h.cache_hits;
    total.hop_units += h.hop_units;
    total.baseline_hop_units += h.baseline_hop_units;
    total.green_weighted_packets += h.green_weighted_packets;
    total.brown_weighted_packets += h.brown_weighted_packets;
    total.brown_watt_hours += h.brown_watt_hours;
    total.baseline_brown_watt_hours += h.baseline_brown_watt_hours;
    total.failed_discoveries += h.failed_discoveries;
  }
  return total;
}

MetricsRow make_row(const HourCounters& h, const HourCounters* baseline) {
  MetricsRow row;
  row.hit_rate = hit_rate(h);
  row.footprint_reduction = footprint_reduction(h);
  row.green_brown = green_brown_ratio(h);
  if (baseline) row.brown_packet_reduction = brown_packet_reduction(h, *baseline);
  row.brown_energy_savings = brown_energy_savings(h);
  return row;
}

}  // namespace

MetricsReport reduce_metrics(const SimResult& run, const SimResult* baseline,
                             std::size_t warmup_hours) {
  MetricsReport report;
  report.failed_discoveries = run.failed_discoveries;
  if (baseline && baseline->hours.size() != run.hours.size()) {
    throw std::invalid_argument("reduce_metrics: baseline horizon differs from run horizon");
  }

  report.per_hour.reserve(run.hours.size());
  for (std::size_t t = 0; t < run.hours.size(); ++t) {
    report.per_hour.push_back(
        make_row(run.hours[t], baseline ? &baseline->hours[t] : nullptr));
  }

  // Cold-cache warmup hours stay out of the aggregate; a window shorter than
  // the warmup aggregates everything rather than nothing.
  report.warmup_hours = warmup_hours < run.hours.size() ? warmup_hours : 0;
  const HourCounters run_total = sum_hours(run.hours, report.warmup_hours);
  if (baseline) {
    const HourCounters base_total = sum_hours(baseline->hours, report.warmup_hours);
    report.aggregate = make_row(run_total, &base_total);
  } else {
    report.aggregate = make_row(run_total, nullptr);
  }
  return report;
}

}  // namespace greennet
