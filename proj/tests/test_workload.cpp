#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "greennet/metrics.hpp"
#include "greennet/workload.hpp"
#include "support/oracles.hpp"

using namespace greennet;

namespace {

Topology line_topology(int n) {
  Topology topo;
  for (int i = 0; i < n; ++i) topo.add_node(i, "loc");
  for (int i = 1; i < n; ++i) topo.add_edge(i - 1, i);
  topo.finalize();
  return topo;
}

WeatherMap flat_weather(const Topology& topo, std::size_t hours, double wind, double ghi) {
  WeatherMap map;
  std::set<std::string> locations;
  for (NodeId id : topo.node_ids()) locations.insert(topo.location_of(id));
  for (const std::string& loc : locations) {
    map.emplace(loc, WeatherSeries(loc, std::vector<WeatherSample>(hours, {wind, ghi})));
  }
  return map;
}

TurbinePowerCurve test_curve() { return TurbinePowerCurve({{3.0, 0.0}, {13.0, 5400.0}}); }

// Engine state wired to a line graph with one client-server pair.
struct LineFixture {
  Topology topo = line_topology(4);
  Catalog catalog{0.9, {3}};  // one chunk, homed at node 3
  GradientField field;
  RouteTable routes;
  std::vector<ContentStore> stores;
  std::vector<NeighborSummary> summaries;
  std::vector<double> green;
  std::vector<double> packets;
  std::vector<double> green_weighted;
  std::set<std::pair<NodeId, NodeId>> used_edges;
  std::map<std::pair<NodeId, NodeId>, RoutePath> detours;
  double green_packets = 0.0;
  double brown_packets = 0.0;
  Rng rng{99};
  EngineState state;

  explicit LineFixture(Strategy strategy, bool symmetric = false) {
    green.assign(4, 0.5);
    field = GradientField(0.0, green, &topo);
    stores.assign(4, ContentStore(16));
    summaries.assign(4, NeighborSummary());
    packets.assign(4, 0.0);
    green_weighted.assign(4, 0.0);
    state.topo = &topo;
    state.catalog = &catalog;
    state.routes = &routes;
    state.stores = &stores;
    state.summaries = strategy_cooperative(strategy) ? &summaries : nullptr;
    state.field = &field;
    state.strategy = strategy;
    state.symmetric_replies = symmetric;
    state.hop_budget = 64;
    state.rng = &rng;
    state.packets_by_router = &packets;
    state.green_weighted_by_router = &green_weighted;
    state.green_by_index = &green;
    state.used_edges = &used_edges;
    state.green_weighted_packets = &green_packets;
    state.brown_weighted_packets = &brown_packets;
    state.detour_paths = &detours;
  }
};

}  // namespace

TEST_CASE("catalog popularity") {
  SUBCASE("zipf zero is uniform") {
    const Catalog c = build_catalog(8, 0.0, {1}, 5);
    for (ChunkId chunk = 0; chunk < 8; ++chunk) {
      CHECK(c.probability(chunk) == doctest::Approx(0.125));
    }
  }
  SUBCASE("two-chunk rank ratio") {
    const Catalog c = build_catalog(2, 0.9, {1}, 5);
    CHECK(c.probability(0) / c.probability(1) == doctest::Approx(std::pow(2.0, 0.9)));
  }
  SUBCASE("probabilities sum to one") {
    const Catalog c = build_catalog(4096, 0.9, {1, 2, 3}, 5);
    double sum = 0.0;
    for (ChunkId chunk = 0; chunk < 4096; ++chunk) sum += c.probability(chunk);
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
  }
  SUBCASE("placement is seeded") {
    const Catalog a = build_catalog(64, 0.9, {1, 2, 3}, 5);
    const Catalog b = build_catalog(64, 0.9, {1, 2, 3}, 5);
    const Catalog c = build_catalog(64, 0.9, {1, 2, 3}, 6);
    bool differs = false;
    for (ChunkId chunk = 0; chunk < 64; ++chunk) {
      CHECK(a.server_of(chunk) == b.server_of(chunk));
      differs = differs || a.server_of(chunk) != c.server_of(chunk);
    }
    CHECK(differs);
  }
}

TEST_CASE("request generation") {
  const Catalog catalog = build_catalog(16, 0.9, {9}, 5);
  CHECK(generate_requests(catalog, {1, 2}, 0, 0, 7).empty());
  const auto events = generate_requests(catalog, {1, 2}, 5, 3, 7);
  REQUIRE(events.size() == 10);
  for (const RequestEvent& e : events) {
    CHECK(e.hour == 3);
    CHECK((e.client == 1 || e.client == 2));
    CHECK(e.chunk < 16);
  }
  const auto again = generate_requests(catalog, {1, 2}, 5, 3, 7);
  for (std::size_t i = 0; i < events.size(); ++i) CHECK(events[i].chunk == again[i].chunk);
  const auto other_hour = generate_requests(catalog, {1, 2}, 5, 4, 7);
  bool differs = false;
  for (std::size_t i = 0; i < events.size(); ++i) {
    differs = differs || events[i].chunk != other_hour[i].chunk;
  }
  CHECK(differs);
}

TEST_CASE("request served at the first router costs one hop unit") {
  LineFixture f(Strategy::All);
  f.stores[f.topo.index_of(0)].insert(0);
  const RequestOutcome out = route_request(RequestEvent{0, 0, 0}, f.state);
  CHECK(out.cache_hit);
  CHECK(out.served_at == 0);
  CHECK(out.hop_units == 1);
  CHECK(out.baseline_hop_units == 4);  // access hop + 3 links
}

TEST_CASE("cold caches serve at the origin over the full path") {
  LineFixture f(Strategy::All);
  const RequestOutcome out = route_request(RequestEvent{0, 0, 0}, f.state);
  CHECK_FALSE(out.cache_hit);
  CHECK(out.served_at == 3);
  CHECK(out.hop_units == 4);  // path node count
  CHECK(out.hop_units == out.baseline_hop_units);
  // the reply admitted the chunk at every router short of the origin
  for (NodeId n : {0, 1, 2}) CHECK(f.stores[f.topo.index_of(n)].contains(0));
}

TEST_CASE("back-to-back identical requests hit at hop one under ALL") {
  LineFixture f(Strategy::All);
  route_request(RequestEvent{0, 0, 0}, f.state);
  const RequestOutcome second = route_request(RequestEvent{0, 0, 0}, f.state);
  CHECK(second.cache_hit);
  CHECK(second.hop_units == 1);
}

TEST_CASE("symmetric replies double the hop units") {
  LineFixture f(Strategy::All, true);
  const RequestOutcome out = route_request(RequestEvent{0, 0, 0}, f.state);
  CHECK(out.hop_units == 8);
  CHECK(out.baseline_hop_units == 8);
  for (NodeId n : {0, 1, 2, 3}) {
    CHECK(f.packets[f.topo.index_of(n)] == doctest::Approx(2.0));
  }
}

TEST_CASE("no-caching strategy never hits but still walks the adopted path") {
  LineFixture f(Strategy::None);
  f.stores[f.topo.index_of(0)].insert(0);  // would hit under a caching strategy
  const RequestOutcome out = route_request(RequestEvent{0, 0, 0}, f.state);
  CHECK_FALSE(out.cache_hit);
  CHECK(out.served_at == 3);
  CHECK(out.hop_units == 4);
}

TEST_CASE("nbsc redirects to a neighbor holding the chunk") {
  // star around the path: 0-1-2-3 plus side node 4 attached to 1
  Topology topo;
  for (NodeId n : {0, 1, 2, 3, 4}) topo.add_node(n, "loc");
  topo.add_edge(0, 1);
  topo.add_edge(1, 2);
  topo.add_edge(2, 3);
  topo.add_edge(1, 4);
  topo.finalize();

  Catalog catalog(0.9, {3});
  std::vector<double> green(5, 0.5);
  GradientField field(0.0, green, &topo);
  RouteTable routes;
  std::vector<ContentStore> stores(5, ContentStore(16));
  std::vector<NeighborSummary> summaries(5);
  std::vector<double> packets(5, 0.0), green_weighted(5, 0.0);
  std::set<std::pair<NodeId, NodeId>> used;
  std::map<std::pair<NodeId, NodeId>, RoutePath> detours;
  double gp = 0.0, bp = 0.0;
  Rng rng(3);

  EngineState st;
  st.topo = &topo;
  st.catalog = &catalog;
  st.routes = &routes;
  st.stores = &stores;
  st.summaries = &summaries;
  st.field = &field;
  st.strategy = Strategy::Nbsc;
  st.symmetric_replies = false;
  st.hop_budget = 64;
  st.rng = &rng;
  st.packets_by_router = &packets;
  st.green_weighted_by_router = &green_weighted;
  st.green_by_index = &green;
  st.used_edges = &used;
  st.green_weighted_packets = &gp;
  st.brown_weighted_packets = &bp;
  st.detour_paths = &detours;

  SUBCASE("true positive serves at the neighbor") {
    stores[topo.index_of(4)].insert(0);
    for (NodeId n : topo.node_ids()) {
      summaries[topo.index_of(n)] = rebuild_summary(stores[topo.index_of(n)], n, 256, 4, 0);
    }
    const RequestOutcome out = route_request(RequestEvent{0, 0, 0}, st);
    CHECK(out.cache_hit);
    CHECK(out.served_at == 4);
    CHECK(out.hop_units == 3);  // client->1 is 2 hops on the path, +1 redirect
    CHECK(used.count({1, 4}) == 1);
  }
  SUBCASE("false positive detours toward the origin") {
    summaries[topo.index_of(4)] = NeighborSummary(4, 256, 4, 0);
    summaries[topo.index_of(4)].add(0);  // stale claim, store is empty
    const RequestOutcome out = route_request(RequestEvent{0, 0, 0}, st);
    CHECK_FALSE(out.cache_hit);
    CHECK(out.served_at == 3);
    // client->1 (2 hops), redirect (1), detour 4->1->2->3 (3)
    CHECK(out.hop_units == 6);
    CHECK(out.missing_path == false);
  }
}

TEST_CASE("simulate is deterministic") {
  const Topology base = test::scale_free_topology(24, 2, 3, 17);
  const Topology topo = assign_roles(base, 3, 8);
  const WeatherMap weather = flat_weather(topo, 30, 8.0, 400.0);
  std::vector<RouterEnergyProfile> profiles = default_profiles(topo, 210.0, 70.0);
  for (auto& p : profiles) p.renewable_sizing = InfrastructureSizing{0.05, 0.08, 0.4, 1.0};

  SimOptions opt;
  opt.alpha = 0.4;
  opt.strategy = Strategy::Nbsc;
  opt.catalog_chunks = 128;
  opt.cache_capacity_chunks = 16;
  opt.requests_per_client_per_hour = 6;
  opt.seed = 31;

  const SimResult a = simulate(topo, weather, profiles, test_curve(), 4000.0, opt);
  const SimResult b = simulate(topo, weather, profiles, test_curve(), 4000.0, opt);
  REQUIRE(a.hours.size() == b.hours.size());
  CHECK(a.failed_discoveries == b.failed_discoveries);
  for (std::size_t t = 0; t < a.hours.size(); ++t) {
    CHECK(a.hours[t].requests == b.hours[t].requests);
    CHECK(a.hours[t].cache_hits == b.hours[t].cache_hits);
    CHECK(a.hours[t].hop_units == b.hours[t].hop_units);
    CHECK(a.hours[t].baseline_hop_units == b.hours[t].baseline_hop_units);
    CHECK(a.hours[t].green_weighted_packets == b.hours[t].green_weighted_packets);
    CHECK(a.hours[t].brown_weighted_packets == b.hours[t].brown_weighted_packets);
    CHECK(a.hours[t].brown_watt_hours == b.hours[t].brown_watt_hours);
    CHECK(a.hours[t].baseline_brown_watt_hours == b.hours[t].baseline_brown_watt_hours);
    for (std::size_t i = 0; i < topo.node_count(); ++i) {
      CHECK(a.hours[t].packets_by_router[i] == b.hours[t].packets_by_router[i]);
    }
  }
}

TEST_CASE("an idle network powers everything off") {
  const Topology base = test::scale_free_topology(12, 2, 2, 3);
  const Topology topo = assign_roles(base, 2, 4);
  const WeatherMap weather = flat_weather(topo, 10, 0.0, 0.0);
  const std::vector<RouterEnergyProfile> profiles = default_profiles(topo, 210.0, 70.0);

  SimOptions opt;
  opt.alpha = 0.0;
  opt.strategy = Strategy::None;
  opt.requests_per_client_per_hour = 0;  // no traffic at all
  opt.seed = 1;

  const SimResult run = simulate(topo, weather, profiles, test_curve(), 4000.0, opt);
  for (const HourCounters& h : run.hours) {
    CHECK(h.requests == 0);
    CHECK(h.brown_watt_hours == 0.0);
    CHECK(h.baseline_brown_watt_hours > 0.0);
    for (const PowerState& s : h.state_by_router) CHECK_FALSE(s.chassis_on());
    CHECK(*brown_energy_savings(h) == doctest::Approx(1.0));
  }
}

TEST_CASE("single pair with a roomy cache converges to hit rate one") {
  Topology topo = line_topology(4);
  topo.set_role(0, NodeRole::Client);
  topo.set_role(3, NodeRole::Server);
  const WeatherMap weather = flat_weather(topo, 72, 0.0, 0.0);
  const std::vector<RouterEnergyProfile> profiles = default_profiles(topo, 210.0, 70.0);

  SimOptions opt;
  opt.alpha = 0.0;
  opt.strategy = Strategy::All;
  opt.catalog_chunks = 8;  // tiny catalog, every chunk seen during warmup
  opt.cache_capacity_chunks = 16;
  opt.requests_per_client_per_hour = 10;
  opt.warmup_hours = 24;
  opt.seed = 11;

  const SimResult run = simulate(topo, weather, profiles, test_curve(), 4000.0, opt);
  const MetricsReport report = reduce_metrics(run, nullptr, opt.warmup_hours);
  REQUIRE(report.aggregate.hit_rate.has_value());
  CHECK(*report.aggregate.hit_rate == doctest::Approx(1.0));
}

TEST_CASE("engine invariants hold on a mixed run") {
  const Topology base = test::scale_free_topology(30, 2, 4, 23);
  const Topology topo = assign_roles(base, 4, 10);
  WeatherMap weather;
  std::set<std::string> locations;
  for (NodeId id : topo.node_ids()) locations.insert(topo.location_of(id));
  for (const std::string& loc : locations) {
    SyntheticWeatherProfile profile;
    profile.solar_amplitude_wm2 = 600.0;
    profile.wind_mean_mps = 6.0;
    profile.wind_variance = 5.0;
    weather.emplace(loc, synthesize_weather(77, profile, 48, loc));
  }
  std::vector<RouterEnergyProfile> profiles = default_profiles(topo, 210.0, 70.0);
  for (auto& p : profiles) p.renewable_sizing = InfrastructureSizing{0.1, 0.2, 0.4, 2.0};

  for (Strategy strategy : {Strategy::All, Strategy::Cachedbit, Strategy::Nbsc}) {
    SimOptions opt;
    opt.alpha = 0.0;
    opt.strategy = strategy;
    opt.catalog_chunks = 256;
    opt.cache_capacity_chunks = 32;
    opt.requests_per_client_per_hour = 8;
    opt.seed = 5;

    const SimResult run = simulate(topo, weather, profiles, test_curve(), 4000.0, opt);
    std::uint64_t hop_total = 0, baseline_total = 0;
    for (const HourCounters& h : run.hours) {
      hop_total += h.hop_units;
      baseline_total += h.baseline_hop_units;
      CHECK(h.cache_hits <= h.requests);
      for (std::size_t i = 0; i < topo.node_count(); ++i) {
        CHECK(h.green_weighted_by_router[i] <= h.packets_by_router[i] + 1e-9);
        if (!h.state_by_router[i].chassis_on()) {
          CHECK(h.packets_by_router[i] == 0.0);  // off routers processed nothing
        }
      }
    }
    // at alpha zero, caching can only shorten shortest-path retrieval
    CHECK(hop_total <= baseline_total);
  }
}

TEST_CASE("neighbor cooperation beats plain admission on footprint at alpha zero") {
  // Co-located POP routers make the neighbor pool worthwhile; members off
  // the backbone are reachable only through redirects.
  const Topology base = test::pop_ring_topology(7, 3, 41);
  const Topology topo = assign_roles(base, 3, 9);
  const WeatherMap weather = flat_weather(topo, 72, 6.0, 300.0);
  std::vector<RouterEnergyProfile> profiles = default_profiles(topo, 210.0, 70.0);
  for (auto& p : profiles) p.renewable_sizing = InfrastructureSizing{0.05, 0.1, 0.4, 1.5};

  auto run_with = [&](Strategy strategy) {
    SimOptions opt;
    opt.alpha = 0.0;
    opt.strategy = strategy;
    opt.catalog_chunks = 2048;
    opt.cache_capacity_chunks = 48;
    opt.requests_per_client_per_hour = 12;
    opt.seed = 13;
    const SimResult run = simulate(topo, weather, profiles, test_curve(), 4000.0, opt);
    return *reduce_metrics(run, nullptr, 24).aggregate.footprint_reduction;
  };

  const double nbsc = run_with(Strategy::Nbsc);
  const double cachedbit = run_with(Strategy::Cachedbit);
  CHECK(nbsc > cachedbit);
}

TEST_CASE("scenario capacities") {
  const Topology base = test::scale_free_topology(16, 2, 2, 29);
  const Topology topo = assign_roles(base, 2, 5);
  const std::vector<RouterEnergyProfile> profiles = default_profiles(topo, 210.0, 70.0);

  WeatherMap sunny;
  std::set<std::string> locations;
  for (NodeId id : topo.node_ids()) locations.insert(topo.location_of(id));
  for (const std::string& loc : locations) {
    std::vector<WeatherSample> hours(48);
    for (std::size_t h = 0; h < hours.size(); ++h) {
      hours[h] = WeatherSample{0.0, h % 24 >= 6 && h % 24 < 18 ? 700.0 : 0.0};
    }
    sunny.emplace(loc, WeatherSeries(loc, std::move(hours)));
  }

  SUBCASE("scenario A pins capacity at two") {
    const auto sizings = scenario_sizing(Scenario::A, topo, sunny, profiles, test_curve(),
                                         4000.0, 3, default_beta_grid());
    for (const auto& s : sizings) {
      CHECK(s.capacity_c == doctest::Approx(2.0));
      CHECK(s.beta == 0.0);  // windless weather keeps everything solar
      CHECK(s.wind_scale == 0.0);
    }
  }
  SUBCASE("scenario B draws capacities reproducibly in range") {
    const auto a = scenario_sizing(Scenario::B, topo, sunny, profiles, test_curve(), 4000.0, 3,
                                   default_beta_grid());
    const auto b = scenario_sizing(Scenario::B, topo, sunny, profiles, test_curve(), 4000.0, 3,
                                   default_beta_grid());
    const auto c = scenario_sizing(Scenario::B, topo, sunny, profiles, test_curve(), 4000.0, 4,
                                   default_beta_grid());
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].capacity_c >= 0.0);
      CHECK(a[i].capacity_c <= 3.0);
      CHECK(a[i].capacity_c == b[i].capacity_c);
      differs = differs || a[i].capacity_c != c[i].capacity_c;
    }
    CHECK(differs);
  }
}
