#include "greennet/topology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace greennet {

void Topology::add_node(NodeId id, std::string location_id) {
  if (finalized_) throw std::logic_error("topology: add_node after finalize");
  if (index_.count(id)) {
    throw std::runtime_error("topology: duplicate node " + std::to_string(id));
  }
  index_.emplace(id, ids_.size());
  ids_.push_back(id);
  data_.push_back(NodeData{std::move(location_id), NodeRole::Transport, {}});
}

void Topology::add_edge(NodeId a, NodeId b) {
  if (finalized_) throw std::logic_error("topology: add_edge after finalize");
  if (a == b) throw std::runtime_error("topology: self-loop at node " + std::to_string(a));
  const auto ia = index_.find(a);
  const auto ib = index_.find(b);
  if (ia == index_.end() || ib == index_.end()) {
    throw std::runtime_error("topology: edge " + std::to_string(a) + "-" + std::to_string(b) +
                             " references an unknown node");
  }
  auto& adj_a = data_[ia->second].adjacency;
  if (std::find(adj_a.begin(), adj_a.end(), b) != adj_a.end()) {
    throw std::runtime_error("topology: duplicate edge " + std::to_string(a) + "-" +
                             std::to_string(b));
  }
  adj_a.push_back(b);
  data_[ib->second].adjacency.push_back(a);
  ++edge_count_;
}

void Topology::finalize() {
  if (finalized_) return;
  if (ids_.empty()) throw std::runtime_error("topology: no nodes");

  // Re-index in ascending id order so dense indices are deterministic.
  std::vector<std::size_t> order(ids_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [this](std::size_t l, std::size_t r) { return ids_[l] < ids_[r]; });
  std::vector<NodeId> ids;
  std::vector<NodeData> data;
  ids.reserve(ids_.size());
  data.reserve(data_.size());
  for (std::size_t idx : order) {
    ids.push_back(ids_[idx]);
    data.push_back(std::move(data_[idx]));
  }
  ids_ = std::move(ids);
  data_ = std::move(data);
  index_.clear();
  for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
  for (NodeData& nd : data_) std::sort(nd.adjacency.begin(), nd.adjacency.end());

  // Connectivity check; on failure, report the components.
  std::vector<int> component(ids_.size(), -1);
  int n_components = 0;
  for (std::size_t start = 0; start < ids_.size(); ++start) {
    if (component[start] >= 0) continue;
    const int c = n_components++;
    std::deque<std::size_t> queue{start};
    component[start] = c;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (NodeId v : data_[u].adjacency) {
        const std::size_t vi = index_.at(v);
        if (component[vi] < 0) {
          component[vi] = c;
          queue.push_back(vi);
        }
      }
    }
  }
  if (n_components > 1) {
    std::ostringstream msg;
    msg << "topology: graph is disconnected (" << n_components << " components):";
    for (int c = 0; c < n_components; ++c) {
      msg << " {";
      bool first = true;
      for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (component[i] != c) continue;
        if (!first) msg << ",";
        msg << ids_[i];
        first = false;
      }
      msg << "}";
    }
    throw std::runtime_error(msg.str());
  }
  finalized_ = true;
}

bool Topology::has_edge(NodeId a, NodeId b) const {
  if (!has_node(a) || !has_node(b)) return false;
  const auto& adj = data_[index_.at(a)].adjacency;
  return std::find(adj.begin(), adj.end(), b) != adj.end();
}

std::size_t Topology::index_of(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw std::out_of_range("topology: unknown node " + std::to_string(id));
  }
  return it->second;
}

const std::vector<NodeId>& Topology::neighbors(NodeId id) const {
  return data_[index_of(id)].adjacency;
}

const std::string& Topology::location_of(NodeId id) const {
  return data_[index_of(id)].location_id;
}

NodeRole Topology::role_of(NodeId id) const { return data_[index_of(id)].role; }

void Topology::set_role(NodeId id, NodeRole role) { data_[index_of(id)].role = role; }

std::vector<NodeId> Topology::nodes_with_role(NodeRole role) const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (data_[i].role == role) out.push_back(ids_[i]);
  }
  return out;
}

Topology load_topology(std::istream& in) {
  Topology topo;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;  // blank or comment-only line
    try {
      if (kind == "node") {
        NodeId id;
        std::string location;
        if (!(ls >> id >> location)) {
          throw std::runtime_error("expected 'node <id> <location_id>'");
        }
        topo.add_node(id, location);
      } else if (kind == "edge") {
        NodeId a, b;
        if (!(ls >> a >> b)) throw std::runtime_error("expected 'edge <id_a> <id_b>'");
        topo.add_edge(a, b);
      } else {
        throw std::runtime_error("unknown directive '" + kind + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("topology line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  topo.finalize();
  return topo;
}

Topology load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file: " + path);
  return load_topology(in);
}

Topology assign_roles(const Topology& topo, std::size_t n_servers, std::size_t n_clients) {
  if (n_servers + n_clients > topo.node_count()) {
    throw std::runtime_error("assign_roles: " + std::to_string(n_servers) + " servers + " +
                             std::to_string(n_clients) + " clients exceed " +
                             std::to_string(topo.node_count()) + " nodes");
  }
  Topology tagged = topo;
  std::vector<NodeId> by_degree = topo.node_ids();
  // Descending degree, ascending id on ties; node_ids() is already ascending.
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](NodeId l, NodeId r) {
    return topo.degree(l) > topo.degree(r);
  });
  for (std::size_t i = 0; i < n_servers; ++i) tagged.set_role(by_degree[i], NodeRole::Server);
  // Clients come from the remaining nodes, lowest degree first.
  std::vector<NodeId> rest(by_degree.begin() + n_servers, by_degree.end());
  std::stable_sort(rest.begin(), rest.end(), [&](NodeId l, NodeId r) {
    if (topo.degree(l) != topo.degree(r)) return topo.degree(l) < topo.degree(r);
    return l < r;
  });
  for (std::size_t i = 0; i < n_clients; ++i) tagged.set_role(rest[i], NodeRole::Client);
  return tagged;
}

HopWeights::HopWeights(NodeId destination, std::vector<int> weights_by_index)
    : destination_(destination), weights_(std::move(weights_by_index)) {}

HopWeights hop_weights(const Topology& topo, NodeId destination) {
  std::vector<int> weights(topo.node_count(), -1);
  std::deque<NodeId> queue{destination};
  weights[topo.index_of(destination)] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    const int wu = weights[topo.index_of(u)];
    for (NodeId v : topo.neighbors(u)) {
      int& wv = weights[topo.index_of(v)];
      if (wv < 0) {
        wv = wu + 1;
        queue.push_back(v);
      }
    }
  }
  return HopWeights(destination, std::move(weights));
}

double normalized_hop(const Topology& topo, const HopWeights& weights, NodeId i, NodeId j) {
  const auto& neigh = topo.neighbors(i);
  if (std::find(neigh.begin(), neigh.end(), j) == neigh.end()) {
    throw std::invalid_argument("normalized_hop: " + std::to_string(j) + " is not a neighbor of " +
                                std::to_string(i));
  }
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (NodeId k : neigh) {
    const int w = weights.weight_at_index(topo.index_of(k));
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  const int wj = weights.weight_at_index(topo.index_of(j));
  if (hi == lo) return 1.0;  // all neighbors equidistant
  return static_cast<double>(hi - wj) / static_cast<double>(hi - lo);
}

}  // namespace greennet
