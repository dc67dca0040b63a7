#ifndef GREENNET_CACHING_HPP
#define GREENNET_CACHING_HPP

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "greennet/rng.hpp"
#include "greennet/topology.hpp"

namespace greennet {

using ChunkId = std::uint32_t;

// Fixed-capacity per-router chunk cache with LRU eviction.
class ContentStore {
 public:
  explicit ContentStore(std::size_t capacity_chunks) : capacity_(capacity_chunks) {}

  // Hit promotes the chunk to most-recently-used; miss changes nothing.
  bool lookup(ChunkId chunk);

  bool contains(ChunkId chunk) const { return position_.count(chunk) != 0; }

  // Inserts (evicting the least-recently-used entry if full) or, for an
  // already-present chunk, refreshes its recency.
  void insert(ChunkId chunk);

  std::size_t size() const { return order_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::vector<ChunkId> entries_mru_first() const;

 private:
  std::size_t capacity_;
  std::list<ChunkId> order_;  // front = most recent
  std::unordered_map<ChunkId, std::list<ChunkId>::iterator> position_;
};

struct ChunkPacket {
  ChunkId chunk = 0;
  bool cached_bit = false;  // set once a router on this traversal admits the chunk
  int path_length_n = 0;    // client-to-server hop count carried in the header
};

// ALL admission: cache everything that passes through.
void admit_all(ContentStore& store, const ChunkPacket& packet);

// Cachedbit admission: a not-yet-cached chunk whose header bit is clear is
// admitted with probability 1/n, and the bit marks the traversal so at most
// one router per traversal admits it. Throws if n < 1.
void admit_cachedbit(ContentStore& store, ChunkPacket& packet, Rng& rng);

// Bloom-filter snapshot of one router's store contents, rebuilt from scratch
// each exchange epoch (so no deletion support is needed).
class NeighborSummary {
 public:
  NeighborSummary() = default;
  NeighborSummary(NodeId owner, std::size_t filter_bits, std::size_t hash_count,
                  std::size_t epoch);

  void add(ChunkId chunk);
  bool maybe_contains(ChunkId chunk) const;

  NodeId owner() const { return owner_; }
  std::size_t epoch() const { return epoch_; }
  std::size_t bit_count() const { return bit_count_; }
  std::size_t hash_count() const { return hash_count_; }
  bool empty() const;

 private:
  std::size_t bit_index(ChunkId chunk, std::size_t hash) const;

  NodeId owner_ = -1;
  std::size_t epoch_ = 0;
  std::size_t bit_count_ = 0;
  std::size_t hash_count_ = 0;
  std::vector<std::uint64_t> words_;
};

NeighborSummary rebuild_summary(const ContentStore& store, NodeId owner,
                                std::size_t filter_bits, std::size_t hash_count,
                                std::size_t epoch);

struct CacheResponse {
  enum class Action { Reply, Redirect, Forward };
  Action action = Action::Forward;
  NodeId neighbor = -1;  // redirect target
};

// NbSC cooperation at one router: reply on a local hit (promoting recency),
// otherwise redirect to a neighbor whose summary matches (uniformly at
// random, or the greenest match with ties to the smaller id), otherwise
// forward along the path.
CacheResponse nbsc_respond(const Topology& topo, NodeId router, ChunkId chunk,
                           ContentStore& local_store,
                           const std::vector<NeighborSummary>& summaries_by_index,
                           std::span<const double> green_by_index, bool greenest, Rng& rng);

enum class Strategy { None, All, Cachedbit, Nbsc, NbscGreen };

std::optional<Strategy> parse_strategy(std::string_view name);
std::string_view strategy_name(Strategy s);
bool strategy_caches(Strategy s);       // false only for None
bool strategy_cooperative(Strategy s);  // NbSC variants
bool strategy_greenest(Strategy s);     // greenest-neighbor NbSC variant

// Reply-path admission dispatch; the simulation engine stays strategy-agnostic.
void strategy_admit(Strategy s, ContentStore& store, ChunkPacket& packet, Rng& rng);

}  // namespace greennet

#endif  // GREENNET_CACHING_HPP
