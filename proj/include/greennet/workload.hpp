#ifndef GREENNET_WORKLOAD_HPP
#define GREENNET_WORKLOAD_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "greennet/caching.hpp"
#include "greennet/energy.hpp"
#include "greennet/routing.hpp"
#include "greennet/rng.hpp"
#include "greennet/topology.hpp"
#include "greennet/weather.hpp"

namespace greennet {

// Content catalog with Zipf popularity over ranks (chunk id r has rank r+1)
// and a seeded uniform placement of chunks onto server-attached routers.
class Catalog {
 public:
  Catalog() = default;
  Catalog(double zipf_exponent, std::vector<NodeId> placement);

  std::size_t chunk_count() const { return placement_.size(); }
  double zipf_exponent() const { return zipf_s_; }
  NodeId server_of(ChunkId chunk) const { return placement_.at(chunk); }
  double probability(ChunkId chunk) const;
  ChunkId sample(Rng& rng) const;

 private:
  double zipf_s_ = 0.0;
  std::vector<NodeId> placement_;
  std::vector<double> cumulative_;
};

Catalog build_catalog(std::size_t n_chunks, double zipf_exponent,
                      const std::vector<NodeId>& servers, std::uint64_t seed);

struct RequestEvent {
  std::size_t hour = 0;
  NodeId client = -1;
  ChunkId chunk = 0;
};

// Exactly rate_per_client events per client, chunk ranks drawn from the
// catalog's Zipf distribution; the stream is seeded per hour.
std::vector<RequestEvent> generate_requests(const Catalog& catalog,
                                            const std::vector<NodeId>& clients,
                                            std::size_t rate_per_client, std::size_t hour,
                                            std::uint64_t seed);

// Raw per-hour accounting, reduced later by the metrics module.
struct HourCounters {
  std::size_t hour = 0;
  std::uint64_t requests = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t hop_units = 0;
  std::uint64_t baseline_hop_units = 0;
  double green_weighted_packets = 0.0;
  double brown_weighted_packets = 0.0;
  double brown_watt_hours = 0.0;           // actual power states
  double baseline_brown_watt_hours = 0.0;  // everything on
  std::uint64_t failed_discoveries = 0;

  std::vector<double> packets_by_router;         // dense node index
  std::vector<double> green_weighted_by_router;  // dense node index
  std::vector<PowerState> state_by_router;
  std::vector<RenewableSupply> supply_by_router;
};

struct SimOptions {
  double alpha = 0.0;
  Strategy strategy = Strategy::None;
  std::size_t requests_per_client_per_hour = 10;
  std::size_t catalog_chunks = 4096;
  double zipf_exponent = 0.9;
  std::size_t cache_capacity_chunks = 4096;
  std::size_t bloom_bits_per_entry = 16;  // filter bits = this x capacity
  std::size_t bloom_hash_count = 4;
  bool symmetric_replies = true;  // replies retrace the request path
  std::size_t hop_budget = 0;     // 0 = 4x node count
  std::size_t warmup_hours = 24;  // excluded from aggregate metrics downstream
  std::uint64_t seed = 1;
};

struct SimResult {
  std::vector<HourCounters> hours;
  std::uint64_t failed_discoveries = 0;  // run total
};

struct RequestOutcome {
  bool cache_hit = false;
  NodeId served_at = -1;
  std::uint64_t hop_units = 0;
  std::uint64_t baseline_hop_units = 0;
  bool missing_path = false;
};

// Mutable per-hour engine state threaded through route_request.
struct EngineState {
  const Topology* topo = nullptr;
  const Catalog* catalog = nullptr;
  RouteTable* routes = nullptr;
  std::vector<ContentStore>* stores = nullptr;          // dense node index
  std::vector<NeighborSummary>* summaries = nullptr;    // dense node index; empty unless NbSC
  const GradientField* field = nullptr;
  Strategy strategy = Strategy::None;
  bool symmetric_replies = true;
  std::size_t hop_budget = 0;
  Rng* rng = nullptr;

  std::vector<double>* packets_by_router = nullptr;
  std::vector<double>* green_weighted_by_router = nullptr;
  const std::vector<double>* green_by_index = nullptr;
  std::set<std::pair<NodeId, NodeId>>* used_edges = nullptr;  // (min,max) per link
  double* green_weighted_packets = nullptr;
  double* brown_weighted_packets = nullptr;

  // Per-hour cache of detour paths for NbSC false positives.
  std::map<std::pair<NodeId, NodeId>, RoutePath>* detour_paths = nullptr;
};

// Walks the adopted client-to-server path, serving from the first store that
// holds the chunk (or an NbSC neighbor), applies the admission policy to the
// reply along the original path, and accrues hop units and per-router packet
// counts. A pair with no adopted path is served by the origin server over
// the BFS path.
RequestOutcome route_request(const RequestEvent& event, EngineState& state);

// Hourly loop: weather to supplies and green ratios, gradient rebuild, route
// refresh, NbSC summary exchange, request routing, then power states derived
// from what was actually used (idle line cards power off).
SimResult simulate(const Topology& topo, const WeatherMap& weather,
                   const std::vector<RouterEnergyProfile>& profiles,
                   const TurbinePowerCurve& curve, double panel_rating_w,
                   const SimOptions& options);

enum class Scenario { A, B };

std::optional<Scenario> parse_scenario(std::string_view name);
std::string_view scenario_name(Scenario s);

// Renewable infrastructure per router: scenario A fixes the capacity at 2x
// demand, scenario B draws it uniformly from [0,3]; the wind/solar mix is
// optimized per router over the annual weather.
std::vector<InfrastructureSizing> scenario_sizing(Scenario scenario, const Topology& topo,
                                                  const WeatherMap& annual_weather,
                                                  const std::vector<RouterEnergyProfile>& profiles,
                                                  const TurbinePowerCurve& curve,
                                                  double panel_rating_w, std::uint64_t seed,
                                                  const std::vector<double>& beta_grid);

// Chassis + one line card per attached link, sizing left zeroed.
std::vector<RouterEnergyProfile> default_profiles(const Topology& topo, double chassis_w,
                                                  double line_card_w);

}  // namespace greennet

#endif  // GREENNET_WORKLOAD_HPP
