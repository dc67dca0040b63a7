#include "greennet/caching.hpp"

#include <algorithm>
#include <stdexcept>

namespace greennet {

bool ContentStore::lookup(ChunkId chunk) {
  const auto it = position_.find(chunk);
  if (it == position_.end()) return false;
  order_.splice(order_.begin(), order_, it->second);
  return true;
}

void ContentStore::insert(ChunkId chunk) {
  const auto it = position_.find(chunk);
  if (it != position_.end()) {
    order_.splice(order_.begin(), order_, it->second);  // recency refresh only
    return;
  }
  if (capacity_ == 0) return;
  if (order_.size() >= capacity_) {
    position_.erase(order_.back());
    order_.pop_back();
  }
  order_.push_front(chunk);
  position_.emplace(chunk, order_.begin());
}

std::vector<ChunkId> ContentStore::entries_mru_first() const {
  return std::vector<ChunkId>(order_.begin(), order_.end());
}

void admit_all(ContentStore& store, const ChunkPacket& packet) { store.insert(packet.chunk); }

void admit_cachedbit(ContentStore& store, ChunkPacket& packet, Rng& rng) {
  if (packet.path_length_n < 1) {
    throw std::invalid_argument("admit_cachedbit: malformed header, path length " +
                                std::to_string(packet.path_length_n));
  }
  if (store.contains(packet.chunk) || packet.cached_bit) return;
  if (rng.next_double() < 1.0 / static_cast<double>(packet.path_length_n)) {
    store.insert(packet.chunk);
    packet.cached_bit = true;
  }
}

NeighborSummary::NeighborSummary(NodeId owner, std::size_t filter_bits, std::size_t hash_count,
                                 std::size_t epoch)
    : owner_(owner), epoch_(epoch), bit_count_(filter_bits), hash_count_(hash_count),
      words_((filter_bits + 63) / 64, 0) {
  if (filter_bits == 0) throw std::invalid_argument("neighbor summary: zero filter bits");
  if (hash_count == 0) throw std::invalid_argument("neighbor summary: zero hash functions");
}

std::size_t NeighborSummary::bit_index(ChunkId chunk, std::size_t hash) const {
  // Salted splitmix64; independent of the platform's std::hash.
  const std::uint64_t mixed =
      splitmix64(static_cast<std::uint64_t>(chunk) ^ (0x51ed270c0ab18a5ULL * (hash + 1)));
  return static_cast<std::size_t>(mixed % bit_count_);
}

void NeighborSummary::add(ChunkId chunk) {
  for (std::size_t h = 0; h < hash_count_; ++h) {
    const std::size_t b = bit_index(chunk, h);
    words_[b >> 6] |= std::uint64_t{1} << (b & 63);
  }
}

bool NeighborSummary::maybe_contains(ChunkId chunk) const {
  if (words_.empty()) return false;
  for (std::size_t h = 0; h < hash_count_; ++h) {
    const std::size_t b = bit_index(chunk, h);
    if (!(words_[b >> 6] & (std::uint64_t{1} << (b & 63)))) return false;
  }
  return true;
}

bool NeighborSummary::empty() const {
  for (std::uint64_t w : words_) {
    if (w != 0) return false;
  }
  return true;
}

NeighborSummary rebuild_summary(const ContentStore& store, NodeId owner, std::size_t filter_bits,
                                std::size_t hash_count, std::size_t epoch) {
  NeighborSummary summary(owner, filter_bits, hash_count, epoch);
  for (ChunkId chunk : store.entries_mru_first()) summary.add(chunk);
  return summary;
}

CacheResponse nbsc_respond(const Topology& topo, NodeId router, ChunkId chunk,
                           ContentStore& local_store,
                           const std::vector<NeighborSummary>& summaries_by_index,
                           std::span<const double> green_by_index, bool greenest, Rng& rng) {
  if (local_store.lookup(chunk)) return CacheResponse{CacheResponse::Action::Reply, router};

  std::vector<NodeId> matches;
  for (NodeId n : topo.neighbors(router)) {
    const std::size_t idx = topo.index_of(n);
    if (idx < summaries_by_index.size() && summaries_by_index[idx].maybe_contains(chunk)) {
      matches.push_back(n);
    }
  }
  if (matches.empty()) return CacheResponse{CacheResponse::Action::Forward, -1};

  NodeId target;
  if (greenest) {
    target = matches.front();  // matches are in ascending id order: ties keep the smaller id
    for (NodeId n : matches) {
      if (green_by_index[topo.index_of(n)] > green_by_index[topo.index_of(target)]) target = n;
    }
  } else {
    target = matches[rng.next_below(matches.size())];
  }
  return CacheResponse{CacheResponse::Action::Redirect, target};
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "none") return Strategy::None;
  if (name == "all") return Strategy::All;
  if (name == "cachedbit") return Strategy::Cachedbit;
  if (name == "nbsc") return Strategy::Nbsc;
  if (name == "nbsc-green") return Strategy::NbscGreen;
  return std::nullopt;
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::None: return "none";
    case Strategy::All: return "all";
    case Strategy::Cachedbit: return "cachedbit";
    case Strategy::Nbsc: return "nbsc";
    case Strategy::NbscGreen: return "nbsc-green";
  }
  return "?";
}

bool strategy_caches(Strategy s) { return s != Strategy::None; }

bool strategy_cooperative(Strategy s) {
  return s == Strategy::Nbsc || s == Strategy::NbscGreen;
}

bool strategy_greenest(Strategy s) { return s == Strategy::NbscGreen; }

void strategy_admit(Strategy s, ContentStore& store, ChunkPacket& packet, Rng& rng) {
  switch (s) {
    case Strategy::None:
      break;
    case Strategy::All:
      admit_all(store, packet);
      break;
    case Strategy::Cachedbit:
    case Strategy::Nbsc:
    case Strategy::NbscGreen:
      admit_cachedbit(store, packet, rng);
      break;
  }
}

}  // namespace greennet
