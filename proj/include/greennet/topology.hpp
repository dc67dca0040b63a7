#ifndef GREENNET_TOPOLOGY_HPP
#define GREENNET_TOPOLOGY_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace greennet {

using NodeId = std::int32_t;

enum class NodeRole { Transport, Server, Client };

// Undirected router graph. Nodes carry a location tag (co-located routers
// share one weather series) and a role; links are the line cards, so a
// node's degree equals its line-card count in the energy model.
class Topology {
 public:
  void add_node(NodeId id, std::string location_id);
  void add_edge(NodeId a, NodeId b);

  // Sorts adjacency lists and checks connectivity. Must be called once all
  // nodes and edges are in; accessors below assume a finalized topology.
  void finalize();

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool has_node(NodeId id) const { return index_.count(id) != 0; }
  bool has_edge(NodeId a, NodeId b) const;

  // Dense index in [0, node_count), stable and ordered by node id.
  std::size_t index_of(NodeId id) const;
  NodeId id_at(std::size_t index) const { return ids_.at(index); }

  const std::vector<NodeId>& neighbors(NodeId id) const;  // ascending order
  std::size_t degree(NodeId id) const { return neighbors(id).size(); }

  const std::string& location_of(NodeId id) const;
  NodeRole role_of(NodeId id) const;
  void set_role(NodeId id, NodeRole role);

  const std::vector<NodeId>& node_ids() const { return ids_; }  // ascending
  std::vector<NodeId> nodes_with_role(NodeRole role) const;     // ascending

 private:
  struct NodeData {
    std::string location_id;
    NodeRole role = NodeRole::Transport;
    std::vector<NodeId> adjacency;
  };

  std::vector<NodeId> ids_;  // sorted after finalize
  std::vector<NodeData> data_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::size_t edge_count_ = 0;
  bool finalized_ = false;
};

// `node <id> <location_id>` lines followed by `edge <a> <b>` lines; `#`
// starts a comment. Rejects self-loops, duplicate edges, unknown endpoints
// and disconnected graphs (the error lists the components).
Topology load_topology(std::istream& in);
Topology load_topology_file(const std::string& path);

// Top n_servers nodes by degree become server-attached, the bottom
// n_clients of the rest become client-attached; ties break by ascending
// node id. Leaves the input untouched and returns the tagged copy.
Topology assign_roles(const Topology& topo, std::size_t n_servers, std::size_t n_clients);

// BFS hop counts toward one destination.
class HopWeights {
 public:
  HopWeights() = default;
  HopWeights(NodeId destination, std::vector<int> weights_by_index);

  NodeId destination() const { return destination_; }
  int weight_at_index(std::size_t index) const { return weights_.at(index); }
  const std::vector<int>& weights_by_index() const { return weights_; }

 private:
  NodeId destination_ = -1;
  std::vector<int> weights_;
};

HopWeights hop_weights(const Topology& topo, NodeId destination);

// Normalized hop count of neighbor j as seen from i: 1 for the neighbor
// closest to the destination, 0 for the farthest, linear in between. When
// all neighbors are equidistant the value is 1 for every neighbor.
double normalized_hop(const Topology& topo, const HopWeights& weights, NodeId i, NodeId j);

}  // namespace greennet

#endif  // GREENNET_TOPOLOGY_HPP
