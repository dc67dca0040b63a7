#include "greennet/workload.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>


namespace greennet {

Catalog::Catalog(double zipf_exponent, std::vector<NodeId> placement)
    : zipf_s_(zipf_exponent), placement_(std::move(placement)) {
  cumulative_.resize(placement_.size());
  double norm = 0.0;
  for (std::size_t r = 1; r <= placement_.size(); ++r) {
    norm += std::pow(static_cast<double>(r), -zipf_s_);
  }
  double acc = 0.0;
  for (std::size_t r = 1; r <= placement_.size(); ++r) {
    acc += std::pow(static_cast<double>(r), -zipf_s_) / norm;
    cumulative_[r - 1] = acc;
  }
  if (!cumulative_.empty()) cumulative_.back() = 1.0;
}

double Catalog::probability(ChunkId chunk) const {
  const double hi = cumulative_.at(chunk);
  const double lo = chunk == 0 ? 0.0 : cumulative_[chunk - 1];
  return hi - lo;
}

ChunkId Catalog::sample(Rng& rng) const {
  const double u = rng.next_double();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
  return static_cast<ChunkId>(std::min(idx, cumulative_.size() - 1));
}

Catalog build_catalog(std::size_t n_chunks, double zipf_exponent,
                      const std::vector<NodeId>& servers, std::uint64_t seed) {
  if (n_chunks == 0) throw std::invalid_argument("build_catalog: empty catalog");
  if (servers.empty()) throw std::invalid_argument("build_catalog: no servers");
  Rng rng(derive_seed(seed, hash_string("placement")));
  std::vector<NodeId> placement(n_chunks);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    placement[c] = servers[rng.next_below(servers.size())];
  }
  return Catalog(zipf_exponent, std::move(placement));
}

std::vector<RequestEvent> generate_requests(const Catalog& catalog,
                                            const std::vector<NodeId>& clients,
                                            std::size_t rate_per_client, std::size_t hour,
                                            std::uint64_t seed) {
  Rng rng(derive_seed(seed, hash_string("requests"), hour));
  std::vector<RequestEvent> events;
  events.reserve(clients.size() * rate_per_client);
  for (NodeId client : clients) {
    for (std::size_t k = 0; k < rate_per_client; ++k) {
      events.push_back(RequestEvent{hour, client, catalog.sample(rng)});
    }
  }
  return events;
}

namespace {

// Shortest path realized greedily over the BFS weights; deterministic via the
// smallest-id tie break.
RoutePath bfs_path(const Topology& topo, const HopWeights& weights, NodeId from, NodeId to) {
  RoutePath path{from};
  NodeId current = from;
  while (current != to) {
    const int w = weights.weight_at_index(topo.index_of(current));
    NodeId next = -1;
    for (NodeId v : topo.neighbors(current)) {
      if (weights.weight_at_index(topo.index_of(v)) == w - 1) {
        next = v;
        break;  // neighbors ascend, first match is the smallest id
      }
    }
    if (next < 0) throw std::logic_error("bfs_path: no descending neighbor");
    path.push_back(next);
    current = next;
  }
  return path;
}

void mark_edge(EngineState& st, NodeId a, NodeId b) {
  if (st.used_edges) st.used_edges->insert({std::min(a, b), std::max(a, b)});
}

void count_packet(EngineState& st, NodeId node, double factor) {
  const std::size_t idx = st.topo->index_of(node);
  const double g = (*st.green_by_index)[idx];
  if (st.packets_by_router) (*st.packets_by_router)[idx] += factor;
  if (st.green_weighted_by_router) (*st.green_weighted_by_router)[idx] += factor * g;
  if (st.green_weighted_packets) *st.green_weighted_packets += factor * g;
  if (st.brown_weighted_packets) *st.brown_weighted_packets += factor * (1.0 - g);
}

const RoutePath& detour_path(EngineState& st, NodeId from, NodeId server) {
  const auto key = std::make_pair(from, server);
  const auto it = st.detour_paths->find(key);
  if (it != st.detour_paths->end()) return it->second;
  DiscoveryResult result =
      discover(*st.topo, from, server, st.field->toward(server), st.hop_budget);
  RoutePath path = result.status == DiscoveryStatus::Found
                       ? std::move(result.path)
                       : bfs_path(*st.topo, st.field->weights_for(server), from, server);
  return st.detour_paths->emplace(key, std::move(path)).first->second;
}

}  // namespace

RequestOutcome route_request(const RequestEvent& event, EngineState& st) {
  RequestOutcome out;
  const NodeId server = st.catalog->server_of(event.chunk);
  const NodeId client = event.client;
  const std::uint64_t direction_factor = st.symmetric_replies ? 2 : 1;

  if (client == server) {
    // Content is co-resident; the request never enters the network fabric.
    out.served_at = server;
    return out;
  }

  const HopWeights& weights = st.field->weights_for(server);
  const std::uint64_t bfs_hops =
      1 + static_cast<std::uint64_t>(weights.weight_at_index(st.topo->index_of(client)));
  out.baseline_hop_units = bfs_hops * direction_factor;

  RoutePath fallback;
  const RoutePath* path =
      st.routes->ensure(*st.topo, *st.field, client, server, st.hop_budget);
  if (!path) {
    // No adopted path; the origin serves over the plain shortest path with
    // no cache involvement.
    out.missing_path = true;
    fallback = bfs_path(*st.topo, weights, client, server);
    for (std::size_t i = 1; i < fallback.size(); ++i) {
      mark_edge(st, fallback[i - 1], fallback[i]);
    }
    for (NodeId node : fallback) count_packet(st, node, static_cast<double>(direction_factor));
    out.served_at = server;
    out.hop_units = static_cast<std::uint64_t>(fallback.size()) * direction_factor;
    return out;
  }

  const RoutePath& p = *path;
  const bool caches = strategy_caches(st.strategy);
  const bool cooperative = strategy_cooperative(st.strategy) && st.summaries != nullptr;

  // Hop units count the client access hop: the first router sits at hop 1,
  // the origin server at hop p.size().
  std::vector<NodeId> visited;  // request direction, in order
  std::size_t leave_index = p.size() - 1;
  std::uint64_t oneway_hops = 0;
  bool served = false;

  for (std::size_t i = 0; i < p.size() && !served; ++i) {
    const NodeId node = p[i];
    if (i > 0) mark_edge(st, p[i - 1], node);
    visited.push_back(node);

    if (node == server) {  // origin: always serves, never a cache hit
      out.served_at = server;
      oneway_hops = i + 1;
      leave_index = i;
      served = true;
      break;
    }

    if (!caches) continue;

    if (cooperative) {
      const CacheResponse resp =
          nbsc_respond(*st.topo, node, event.chunk, (*st.stores)[st.topo->index_of(node)],
                       *st.summaries, *st.green_by_index, strategy_greenest(st.strategy),
                       *st.rng);
      if (resp.action == CacheResponse::Action::Reply) {
        out.cache_hit = true;
        out.served_at = node;
        oneway_hops = i + 1;
        leave_index = i;
        served = true;
      } else if (resp.action == CacheResponse::Action::Redirect) {
        leave_index = i;
        const NodeId neighbor = resp.neighbor;
        mark_edge(st, node, neighbor);
        visited.push_back(neighbor);
        if (neighbor == server) {
          out.served_at = server;
          oneway_hops = i + 2;
        } else if ((*st.stores)[st.topo->index_of(neighbor)].lookup(event.chunk)) {
          out.cache_hit = true;
          out.served_at = neighbor;
          oneway_hops = i + 2;
        } else {
          // Stale summary or Bloom false positive: the neighbor pushes the
          // request onward along its own path toward the server. No second
          // redirect is allowed.
          const RoutePath& dp = detour_path(st, neighbor, server);
          for (std::size_t j = 1; j < dp.size(); ++j) {
            mark_edge(st, dp[j - 1], dp[j]);
            visited.push_back(dp[j]);
            if (dp[j] == server) {
              out.served_at = server;
            } else if ((*st.stores)[st.topo->index_of(dp[j])].lookup(event.chunk)) {
              out.cache_hit = true;
              out.served_at = dp[j];
            } else {
              continue;
            }
            oneway_hops = i + 2 + j;
            break;
          }
        }
        served = true;
      }
    } else if ((*st.stores)[st.topo->index_of(node)].lookup(event.chunk)) {
      out.cache_hit = true;
      out.served_at = node;
      oneway_hops = i + 1;
      leave_index = i;
      served = true;
    }
  }

  out.hop_units = oneway_hops * direction_factor;
  for (NodeId node : visited) count_packet(st, node, static_cast<double>(direction_factor));

  // The reply retraces the request; the admission policy runs at the
  // original-path routers it crosses (never at the serving router, and never
  // across a redirect hop or detour).
  if (caches) {
    ChunkPacket packet{event.chunk, false, static_cast<int>(p.size())};
    const std::size_t first_admit =
        (out.served_at == p[leave_index]) ? (leave_index == 0 ? 0 : leave_index - 1)
                                          : leave_index;
    if (!(out.served_at == p[leave_index] && leave_index == 0)) {
      for (std::size_t k = first_admit + 1; k-- > 0;) {
        strategy_admit(st.strategy, (*st.stores)[st.topo->index_of(p[k])], packet, *st.rng);
      }
    }
  }
  return out;
}

std::vector<RouterEnergyProfile> default_profiles(const Topology& topo, double chassis_w,
                                                  double line_card_w) {
  std::vector<RouterEnergyProfile> profiles(topo.node_count());
  for (std::size_t i = 0; i < topo.node_count(); ++i) {
    profiles[i].chassis_power_w = chassis_w;
    profiles[i].line_card_powers_w.assign(topo.degree(topo.id_at(i)), line_card_w);
  }
  return profiles;
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  if (name == "A") return Scenario::A;
  if (name == "B") return Scenario::B;
  return std::nullopt;
}

std::string_view scenario_name(Scenario s) { return s == Scenario::A ? "A" : "B"; }

std::vector<InfrastructureSizing> scenario_sizing(Scenario scenario, const Topology& topo,
                                                  const WeatherMap& annual_weather,
                                                  const std::vector<RouterEnergyProfile>& profiles,
                                                  const TurbinePowerCurve& curve,
                                                  double panel_rating_w, std::uint64_t seed,
                                                  const std::vector<double>& beta_grid) {
  if (profiles.size() != topo.node_count()) {
    throw std::invalid_argument("scenario_sizing: profile count mismatch");
  }
  Rng capacity_rng(derive_seed(seed, hash_string("capacity")));
  std::vector<InfrastructureSizing> sizings(topo.node_count());
  for (std::size_t i = 0; i < topo.node_count(); ++i) {
    const double capacity =
        scenario == Scenario::A ? 2.0 : capacity_rng.uniform(0.0, 3.0);
    const NodeId id = topo.id_at(i);
    const auto it = annual_weather.find(topo.location_of(id));
    if (it == annual_weather.end()) {
      throw std::runtime_error("scenario_sizing: no weather for location '" +
                               topo.location_of(id) + "'");
    }
    const double demand = profiles[i].all_on_demand_w();
    const BetaChoice choice =
        optimal_beta(it->second, capacity, demand, curve, panel_rating_w, beta_grid);
    sizings[i] = size_infrastructure(choice.beta, capacity, it->second, demand, curve,
                                     panel_rating_w);
  }
  return sizings;
}

SimResult simulate(const Topology& topo, const WeatherMap& weather,
                   const std::vector<RouterEnergyProfile>& profiles,
                   const TurbinePowerCurve& curve, double panel_rating_w,
                   const SimOptions& options) {
  const std::size_t n = topo.node_count();
  if (profiles.size() != n) throw std::invalid_argument("simulate: profile count mismatch");
  if (options.alpha < 0.0 || options.alpha > 1.0) {
    throw std::invalid_argument("simulate: alpha not in [0,1]");
  }

  std::size_t horizon = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId id = topo.id_at(i);
    if (profiles[i].line_card_powers_w.size() != topo.degree(id)) {
      throw std::invalid_argument("simulate: line-card count differs from degree at node " +
                                  std::to_string(id));
    }
    const auto it = weather.find(topo.location_of(id));
    if (it == weather.end()) {
      throw std::runtime_error("simulate: no weather for location '" + topo.location_of(id) +
                               "'");
    }
    if (horizon == 0) {
      horizon = it->second.horizon_hours();
    } else if (it->second.horizon_hours() != horizon) {
      throw std::runtime_error("simulate: weather horizons differ across locations");
    }
  }

  const std::vector<NodeId> servers = topo.nodes_with_role(NodeRole::Server);
  const std::vector<NodeId> clients = topo.nodes_with_role(NodeRole::Client);
  const bool traffic = !servers.empty() && !clients.empty() &&
                       options.requests_per_client_per_hour > 0;
  Catalog catalog;
  if (traffic) {
    catalog = build_catalog(options.catalog_chunks, options.zipf_exponent, servers,
                            derive_seed(options.seed, hash_string("catalog")));
  }

  const std::size_t hop_budget =
      options.hop_budget > 0 ? options.hop_budget : default_hop_budget(topo);
  const bool caches = strategy_caches(options.strategy);
  const bool cooperative = strategy_cooperative(options.strategy);

  std::vector<ContentStore> stores;
  if (caches) stores.assign(n, ContentStore(options.cache_capacity_chunks));
  std::vector<NeighborSummary> summaries;
  const std::size_t filter_bits =
      std::max<std::size_t>(1, options.bloom_bits_per_entry * options.cache_capacity_chunks);

  // Weather lookups by dense index, resolved once.
  std::vector<const WeatherSeries*> series_by_index(n);
  std::vector<double> all_on_demand(n);
  std::vector<PowerState> all_on_state;
  all_on_state.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId id = topo.id_at(i);
    series_by_index[i] = &weather.at(topo.location_of(id));
    all_on_demand[i] = profiles[i].all_on_demand_w();
    all_on_state.push_back(PowerState::all_on(profiles[i].line_card_powers_w.size()));
  }

  RouteTable routes;
  std::uint64_t failed_before = 0;
  SimResult result;
  result.hours.reserve(horizon);

  for (std::size_t t = 0; t < horizon; ++t) {
    HourCounters hc;
    hc.hour = t;
    hc.supply_by_router.resize(n);
    hc.packets_by_router.assign(n, 0.0);
    hc.green_weighted_by_router.assign(n, 0.0);

    std::vector<double> green(n);
    for (std::size_t i = 0; i < n; ++i) {
      const WeatherSample& sample = series_by_index[i]->at(t);
      hc.supply_by_router[i] = renewable_supply(profiles[i].renewable_sizing,
                                                sample.wind_speed_mps, sample.ghi_wm2, curve,
                                                panel_rating_w);
      // Routing sees the ratio against all-on demand; the hour's usage is
      // not known yet.
      green[i] = green_ratio(hc.supply_by_router[i], all_on_demand[i]);
    }

    GradientField field(options.alpha, green, &topo);
    routes.refresh(topo, field, hop_budget);

    if (caches && cooperative) {
      summaries.assign(n, NeighborSummary());
      for (std::size_t i = 0; i < n; ++i) {
        summaries[i] = rebuild_summary(stores[i], topo.id_at(i), filter_bits,
                                       options.bloom_hash_count, t);
      }
    }

    std::set<std::pair<NodeId, NodeId>> used_edges;
    std::map<std::pair<NodeId, NodeId>, RoutePath> detours;
    Rng hour_rng(derive_seed(options.seed, hash_string("engine"), t));

    if (traffic) {
      EngineState st;
      st.topo = &topo;
      st.catalog = &catalog;
      st.routes = &routes;
      st.stores = &stores;
      st.summaries = cooperative ? &summaries : nullptr;
      st.field = &field;
      st.strategy = options.strategy;
      st.symmetric_replies = options.symmetric_replies;
      st.hop_budget = hop_budget;
      st.rng = &hour_rng;
      st.packets_by_router = &hc.packets_by_router;
      st.green_weighted_by_router = &hc.green_weighted_by_router;
      st.green_by_index = &green;
      st.used_edges = &used_edges;
      st.green_weighted_packets = &hc.green_weighted_packets;
      st.brown_weighted_packets = &hc.brown_weighted_packets;
      st.detour_paths = &detours;

      const std::vector<RequestEvent> events = generate_requests(
          catalog, clients, options.requests_per_client_per_hour, t, options.seed);
      for (const RequestEvent& event : events) {
        const RequestOutcome outcome = route_request(event, st);
        ++hc.requests;
        if (outcome.cache_hit) ++hc.cache_hits;
        hc.hop_units += outcome.hop_units;
        hc.baseline_hop_units += outcome.baseline_hop_units;
      }
    }

    // Every link on an adopted path stays powered even if no packet crossed
    // it this hour.
    for (const auto& edge : routes.adopted_edges()) used_edges.insert(edge);

    hc.failed_discoveries = routes.failed_discoveries() - failed_before;
    failed_before = routes.failed_discoveries();

    hc.state_by_router.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const NodeId id = topo.id_at(i);
      const auto& neigh = topo.neighbors(id);
      std::vector<bool> cards(neigh.size(), false);
      for (std::size_t k = 0; k < neigh.size(); ++k) {
        const auto edge = std::make_pair(std::min(id, neigh[k]), std::max(id, neigh[k]));
        cards[k] = used_edges.count(edge) != 0;
      }
      hc.state_by_router.push_back(PowerState::from_line_cards(std::move(cards)));
      hc.brown_watt_hours +=
          brown_power(hc.supply_by_router[i], profiles[i], hc.state_by_router.back());
      hc.baseline_brown_watt_hours +=
          brown_power(hc.supply_by_router[i], profiles[i], all_on_state[i]);
    }

    result.hours.push_back(std::move(hc));
  }

  result.failed_discoveries = routes.failed_discoveries();
  return result;
}

}  // namespace greennet
