#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "greennet/caching.hpp"
#include "support/oracles.hpp"

using namespace greennet;

TEST_CASE("lru eviction order") {
  ContentStore store(2);
  store.insert(1);
  store.insert(2);
  CHECK(store.lookup(1));  // promotes 1
  store.insert(3);         // evicts 2
  CHECK(store.contains(1));
  CHECK_FALSE(store.contains(2));
  CHECK(store.contains(3));
}

TEST_CASE("lookup on an empty store misses") {
  ContentStore store(4);
  CHECK_FALSE(store.lookup(7));
  CHECK(store.size() == 0);
}

TEST_CASE("capacity one keeps only the newest chunk") {
  ContentStore store(1);
  store.insert(10);
  store.insert(11);
  CHECK(store.size() == 1);
  CHECK(store.contains(11));
  CHECK_FALSE(store.contains(10));
}

TEST_CASE("store matches a reference lru over random traces") {
  Rng rng(42);
  ContentStore store(16);
  test::ReferenceLru reference(16);
  for (int op = 0; op < 10000; ++op) {
    const ChunkId chunk = static_cast<ChunkId>(rng.next_below(64));
    if (rng.next_double() < 0.5) {
      CHECK(store.lookup(chunk) == reference.lookup(chunk));
    } else {
      store.insert(chunk);
      reference.insert(chunk);
    }
    REQUIRE(store.size() <= 16);
  }
  const auto got = store.entries_mru_first();
  const auto expected = reference.entries_mru_first();
  REQUIRE(std::vector<std::uint32_t>(got.begin(), got.end()) == expected);
}

TEST_CASE("admit_all caches at every router it passes") {
  std::vector<ContentStore> path_stores(3, ContentStore(8));
  ChunkPacket packet{5, false, 3};
  for (auto& store : path_stores) admit_all(store, packet);
  for (auto& store : path_stores) CHECK(store.contains(5));
  CHECK_FALSE(packet.cached_bit);  // ALL never touches the header
}

TEST_CASE("admit_all refreshes recency on duplicates") {
  ContentStore store(2);
  store.insert(1);
  store.insert(2);
  admit_all(store, ChunkPacket{1, false, 1});  // 1 becomes most recent
  store.insert(3);                             // evicts 2
  CHECK(store.contains(1));
  CHECK_FALSE(store.contains(2));
}

TEST_CASE("cachedbit admits exactly once along a path") {
  Rng rng(7);
  SUBCASE("n=1 always caches at the first router") {
    for (int trial = 0; trial < 100; ++trial) {
      ContentStore store(8);
      ChunkPacket packet{static_cast<ChunkId>(trial), false, 1};
      admit_cachedbit(store, packet, rng);
      CHECK(store.contains(packet.chunk));
      CHECK(packet.cached_bit);
    }
  }
  SUBCASE("a set bit blocks downstream admission") {
    ContentStore store(8);
    ChunkPacket packet{9, true, 1};  // would otherwise admit with certainty
    admit_cachedbit(store, packet, rng);
    CHECK_FALSE(store.contains(9));
  }
  SUBCASE("n=0 is a malformed header") {
    ContentStore store(8);
    ChunkPacket packet{9, false, 0};
    CHECK_THROWS_AS(admit_cachedbit(store, packet, rng), std::invalid_argument);
  }
  SUBCASE("at most one admission per traversal") {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<ContentStore> stores(4, ContentStore(8));
      ChunkPacket packet{static_cast<ChunkId>(trial), false, 4};
      int copies = 0;
      for (auto& store : stores) {
        admit_cachedbit(store, packet, rng);
        copies += store.contains(packet.chunk) ? 1 : 0;
      }
      CHECK(copies <= 1);
    }
  }
}

TEST_CASE("cachedbit admission frequency matches the enumerated expectation") {
  const int n = 4;
  const double expected = test::cachedbit_expected_copies(n);
  CHECK(expected == doctest::Approx(1.0 - std::pow(0.75, 4)));

  Rng rng(1234);
  int admitted = 0;
  const int trials = 100000;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<ContentStore> stores(n, ContentStore(4));
    ChunkPacket packet{static_cast<ChunkId>(trial % 3), false, n};
    for (auto& store : stores) admit_cachedbit(store, packet, rng);
    admitted += packet.cached_bit ? 1 : 0;
  }
  const double measured = static_cast<double>(admitted) / trials;
  CHECK(measured == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("summaries have no false negatives") {
  ContentStore store(64);
  for (ChunkId c = 100; c < 164; ++c) store.insert(c);
  const NeighborSummary summary = rebuild_summary(store, 3, 16 * 64, 4, 12);
  CHECK(summary.owner() == 3);
  CHECK(summary.epoch() == 12);
  for (ChunkId c = 100; c < 164; ++c) CHECK(summary.maybe_contains(c));
}

TEST_CASE("an empty store yields an all-zero filter") {
  ContentStore store(8);
  const NeighborSummary summary = rebuild_summary(store, 1, 128, 4, 0);
  CHECK(summary.empty());
  CHECK_FALSE(summary.maybe_contains(42));
}

TEST_CASE("summary false positives stay near the analytic rate") {
  const std::size_t capacity = 256;
  const std::size_t bits = 16 * capacity;
  const std::size_t k = 4;
  ContentStore store(capacity);
  for (ChunkId c = 0; c < capacity; ++c) store.insert(c);
  const NeighborSummary summary = rebuild_summary(store, 1, bits, k, 0);

  int false_positives = 0;
  const int probes = 1000;
  for (int i = 0; i < probes; ++i) {
    const ChunkId absent = static_cast<ChunkId>(1000000 + i);
    false_positives += summary.maybe_contains(absent) ? 1 : 0;
  }
  const double km_over_bits = static_cast<double>(k) * capacity / bits;
  const double analytic = std::pow(1.0 - std::exp(-km_over_bits), static_cast<double>(k));
  const double sigma = std::sqrt(analytic * (1.0 - analytic) / probes);
  CHECK(std::fabs(static_cast<double>(false_positives) / probes - analytic) <= 3.0 * sigma);
}

namespace {

Topology fan_topology() {
  // router 0 with neighbors 1..3, all interconnected through 4
  Topology topo;
  for (NodeId n : {0, 1, 2, 3, 4}) topo.add_node(n, "a");
  topo.add_edge(0, 1);
  topo.add_edge(0, 2);
  topo.add_edge(0, 3);
  topo.add_edge(1, 4);
  topo.add_edge(2, 4);
  topo.add_edge(3, 4);
  topo.finalize();
  return topo;
}

}  // namespace

TEST_CASE("nbsc responds local-first, then redirects, then forwards") {
  const Topology topo = fan_topology();
  std::vector<ContentStore> stores(5, ContentStore(8));
  std::vector<NeighborSummary> summaries(5);
  const std::vector<double> green{0.1, 0.9, 0.4, 0.6, 0.2};
  Rng rng(5);

  SUBCASE("local hit replies") {
    stores[0].insert(77);
    const CacheResponse r =
        nbsc_respond(topo, 0, 77, stores[0], summaries, green, false, rng);
    CHECK(r.action == CacheResponse::Action::Reply);
  }
  SUBCASE("a single matching neighbor is the redirect target") {
    stores[topo.index_of(2)].insert(77);
    for (NodeId n : {1, 2, 3, 4}) {
      summaries[topo.index_of(n)] =
          rebuild_summary(stores[topo.index_of(n)], n, 256, 4, 0);
    }
    const CacheResponse r =
        nbsc_respond(topo, 0, 77, stores[0], summaries, green, false, rng);
    CHECK(r.action == CacheResponse::Action::Redirect);
    CHECK(r.neighbor == 2);
  }
  SUBCASE("no match forwards along the path") {
    for (NodeId n : {1, 2, 3, 4}) {
      summaries[topo.index_of(n)] =
          rebuild_summary(stores[topo.index_of(n)], n, 256, 4, 0);
    }
    const CacheResponse r =
        nbsc_respond(topo, 0, 77, stores[0], summaries, green, false, rng);
    CHECK(r.action == CacheResponse::Action::Forward);
  }
  SUBCASE("greenest variant picks the highest green ratio among the same matches") {
    stores[topo.index_of(1)].insert(77);
    stores[topo.index_of(3)].insert(77);
    for (NodeId n : {1, 2, 3, 4}) {
      summaries[topo.index_of(n)] =
          rebuild_summary(stores[topo.index_of(n)], n, 256, 4, 0);
    }
    const CacheResponse greenest =
        nbsc_respond(topo, 0, 77, stores[0], summaries, green, true, rng);
    CHECK(greenest.action == CacheResponse::Action::Redirect);
    CHECK(greenest.neighbor == 1);  // g=0.9 beats g=0.6

    // the random variant stays inside the same match set
    for (int i = 0; i < 20; ++i) {
      const CacheResponse any =
          nbsc_respond(topo, 0, 77, stores[0], summaries, green, false, rng);
      CHECK(any.action == CacheResponse::Action::Redirect);
      CHECK((any.neighbor == 1 || any.neighbor == 3));
    }
  }
  SUBCASE("greenest ties break to the smaller id") {
    stores[topo.index_of(2)].insert(77);
    stores[topo.index_of(3)].insert(77);
    const std::vector<double> flat{0.5, 0.5, 0.5, 0.5, 0.5};
    for (NodeId n : {1, 2, 3, 4}) {
      summaries[topo.index_of(n)] =
          rebuild_summary(stores[topo.index_of(n)], n, 256, 4, 0);
    }
    const CacheResponse r =
        nbsc_respond(topo, 0, 77, stores[0], summaries, flat, true, rng);
    CHECK(r.neighbor == 2);
  }
}

TEST_CASE("strategy names round-trip") {
  for (Strategy s : {Strategy::None, Strategy::All, Strategy::Cachedbit, Strategy::Nbsc,
                     Strategy::NbscGreen}) {
    const auto parsed = parse_strategy(strategy_name(s));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == s);
  }
  CHECK_FALSE(parse_strategy("lfu").has_value());
  CHECK(strategy_caches(Strategy::All));
  CHECK_FALSE(strategy_caches(Strategy::None));
  CHECK(strategy_cooperative(Strategy::NbscGreen));
  CHECK_FALSE(strategy_cooperative(Strategy::Cachedbit));
  CHECK(strategy_greenest(Strategy::NbscGreen));
  CHECK_FALSE(strategy_greenest(Strategy::Nbsc));
}
