#ifndef GREENNET_EXPERIMENT_HPP
#define GREENNET_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "greennet/config.hpp"
#include "greennet/metrics.hpp"

namespace greennet {

struct CellOutcome {
  double alpha = 0.0;
  std::string season;
  Strategy strategy = Strategy::None;
  std::uint64_t seed = 0;
  bool completed = false;
  std::string error;          // set when completed is false
  std::string hours_csv;      // per-hour output file (relative to output dir)
  MetricsReport report;
};

struct ExperimentResult {
  std::vector<CellOutcome> cells;
  std::string summary_csv_path;
  std::string manifest_path;
  bool all_completed = true;
};

// Runs the full sweep (alpha x season x strategy for the configured
// scenario), writes one per-hour CSV per cell, a combined summary CSV and a
// manifest with the config hash and every derived seed. Failed cells are
// recorded and skipped; completed ones keep their outputs.
ExperimentResult run_experiment(const RunConfig& config);

// Per-router capacity, optimal wind share and the achieved average green
// ratio, as a histogram-ready CSV.
std::string emit_mix_report(const RunConfig& config);

// Summary CSV schema, shared by run_experiment and the tests.
extern const char* const kSummaryCsvHeader;
extern const char* const kHoursCsvHeader;

}  // namespace greennet

#endif  // GREENNET_EXPERIMENT_HPP
