#ifndef GREENNET_ROUTING_HPP
#define GREENNET_ROUTING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "greennet/topology.hpp"

namespace greennet {

// Gradient of the link i->j for one destination: a convex mix of the
// neighbor's green ratio and its normalized hop count. alpha = 0 degenerates
// to shortest-path routing, alpha = 1 to pure greenest-neighbor routing.
double gradient(double alpha, double green_ratio_j, double normalized_hop_j);

// Per-hour routing state shared by all discoveries: the mix weight, each
// node's green ratio and the hop counts toward every destination of
// interest.
class GradientField {
 public:
  GradientField() = default;
  GradientField(double alpha, std::vector<double> green_by_index, const Topology* topo);

  double alpha() const { return alpha_; }
  const std::vector<double>& green_by_index() const { return green_; }
  double green_at_index(std::size_t index) const { return green_.at(index); }

  // Computes (or reuses) the BFS weights for a destination.
  const HopWeights& weights_for(NodeId destination) const;

  double value(NodeId destination, NodeId i, NodeId j) const;

  // Callable (i, j) -> gradient for a fixed destination.
  auto toward(NodeId destination) const {
    return [this, destination](NodeId i, NodeId j) { return value(destination, i, j); };
  }

 private:
  double alpha_ = 0.0;
  std::vector<double> green_;
  const Topology* topo_ = nullptr;
  mutable std::unordered_map<NodeId, HopWeights> weights_;
};

using RoutePath = std::vector<NodeId>;

enum class DiscoveryStatus { InProgress, Found, Failed };
enum class DiscoveryFailure { None, BacktrackExhausted, HopBudgetExhausted };

// Local per-node knowledge accumulated during one discovery: the neighbors a
// node received the walk from (qIn) and the neighbors it sent the walk to
// (qOut). Both lists are duplicate-free; a directed edge is therefore
// traversed at most once, which bounds every discovery by 2|E| moves.
class DiscoverySession {
 public:
  struct NodeLists {
    std::vector<NodeId> q_in;
    std::vector<NodeId> q_out;
  };

  DiscoverySession(NodeId source, NodeId destination)
      : source_(source), destination_(destination) {}

  NodeId source() const { return source_; }
  NodeId destination() const { return destination_; }
  DiscoveryStatus status() const { return status_; }

  NodeLists& lists(NodeId node) { return lists_[node]; }
  const NodeLists* find_lists(NodeId node) const {
    auto it = lists_.find(node);
    return it == lists_.end() ? nullptr : &it->second;
  }

  // Leaving InProgress releases the per-node lists; they are discovery-local.
  void set_status(DiscoveryStatus status) {
    status_ = status;
    if (status_ != DiscoveryStatus::InProgress) lists_.clear();
  }

 private:
  NodeId source_;
  NodeId destination_;
  DiscoveryStatus status_ = DiscoveryStatus::InProgress;
  std::unordered_map<NodeId, NodeLists> lists_;
};

namespace detail {
inline bool list_contains(const std::vector<NodeId>& v, NodeId x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}
}  // namespace detail

// One next-hop selection at `current`. Appends `incoming` to qIn, picks the
// eligible neighbor with the highest gradient (ties fall to the smaller node
// id because neighbors are scanned in ascending order and only a strictly
// greater gradient replaces the candidate), otherwise backtracks to the most
// recent qIn entry not yet in qOut. Returns nothing when backtracking is
// exhausted, which can only happen at the source.
template <class GradientFn>
std::optional<NodeId> next_hop(DiscoverySession& session, const Topology& topo, NodeId current,
                               std::optional<NodeId> incoming, GradientFn&& grad) {
  auto& lists = session.lists(current);
  if (incoming && !detail::list_contains(lists.q_in, *incoming)) {
    lists.q_in.push_back(*incoming);
  }

  std::optional<NodeId> chosen;
  double best = -1.0;
  for (NodeId v : topo.neighbors(current)) {
    if (detail::list_contains(lists.q_in, v) || detail::list_contains(lists.q_out, v)) continue;
    const double g = grad(current, v);
    if (g > best) {
      best = g;
      chosen = v;
    }
  }

  if (!chosen) {
    for (auto it = lists.q_in.rbegin(); it != lists.q_in.rend(); ++it) {
      if (!detail::list_contains(lists.q_out, *it)) {
        chosen = *it;
        break;
      }
    }
  }

  if (chosen) lists.q_out.push_back(*chosen);
  return chosen;
}

struct DiscoveryResult {
  DiscoveryStatus status = DiscoveryStatus::Failed;
  DiscoveryFailure failure = DiscoveryFailure::None;
  RoutePath path;             // loop-free, source..destination; empty unless Found
  std::vector<NodeId> trace;  // every node the walk occupied, in order
  std::size_t moves = 0;
};

// Full discovery walk from source to destination. The walk follows next_hop
// until the destination is reached, backtracking is exhausted, or the hop
// budget runs out. The adopted path excises backtracked prefixes: whenever
// the walk lands on a node already on the pending path, everything after it
// is dropped.
template <class GradientFn>
DiscoveryResult discover(const Topology& topo, NodeId source, NodeId destination,
                         GradientFn&& grad, std::size_t hop_budget) {
  DiscoveryResult result;
  if (source == destination) throw std::invalid_argument("discover: source equals destination");

  DiscoverySession session(source, destination);
  RoutePath pending{source};
  result.trace.push_back(source);

  NodeId current = source;
  std::optional<NodeId> incoming;
  while (result.moves < hop_budget) {
    const std::optional<NodeId> nh = next_hop(session, topo, current, incoming, grad);
    if (!nh) {
      session.set_status(DiscoveryStatus::Failed);
      result.status = DiscoveryStatus::Failed;
      result.failure = DiscoveryFailure::BacktrackExhausted;
      return result;
    }
    ++result.moves;
    result.trace.push_back(*nh);

    const auto on_path = std::find(pending.begin(), pending.end(), *nh);
    if (on_path != pending.end()) {
      pending.erase(on_path + 1, pending.end());
    } else {
      pending.push_back(*nh);
    }

    if (*nh == destination) {
      session.set_status(DiscoveryStatus::Found);
      result.status = DiscoveryStatus::Found;
      result.path = std::move(pending);
      return result;
    }
    incoming = current;
    current = *nh;
  }

  session.set_status(DiscoveryStatus::Failed);
  result.status = DiscoveryStatus::Failed;
  result.failure = DiscoveryFailure::HopBudgetExhausted;
  return result;
}

// Adopted paths per (client, server) pair. A failed re-discovery keeps the
// previous path in service and bumps the failure counter.
class RouteTable {
 public:
  const RoutePath* find(NodeId source, NodeId destination) const;

  // Re-discovers every known pair against the new field ("found" paths are
  // adopted atomically per pair; failures retain the old path).
  void refresh(const Topology& topo, const GradientField& field, std::size_t hop_budget);

  // Looks up the pair's path, discovering it first if the pair is new.
  const RoutePath* ensure(const Topology& topo, const GradientField& field, NodeId source,
                          NodeId destination, std::size_t hop_budget);

  std::uint64_t failed_discoveries() const { return failed_; }
  std::size_t pair_count() const { return paths_.size(); }

  // Every link used by at least one adopted path, as (min id, max id) pairs.
  std::vector<std::pair<NodeId, NodeId>> adopted_edges() const;

 private:
  std::map<std::pair<NodeId, NodeId>, RoutePath> paths_;
  std::uint64_t failed_ = 0;
};

std::size_t default_hop_budget(const Topology& topo);  // 4x node count

}  // namespace greennet

#endif  // GREENNET_ROUTING_HPP
