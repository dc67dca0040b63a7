#include "greennet/routing.hpp"

#include <stdexcept>

namespace greennet {

double gradient(double alpha, double green_ratio_j, double normalized_hop_j) {
  return alpha * green_ratio_j + (1.0 - alpha) * normalized_hop_j;
}

GradientField::GradientField(double alpha, std::vector<double> green_by_index,
                             const Topology* topo)
    : alpha_(alpha), green_(std::move(green_by_index)), topo_(topo) {
  if (alpha_ < 0.0 || alpha_ > 1.0) throw std::invalid_argument("gradient field: alpha not in [0,1]");
  if (!topo_) throw std::invalid_argument("gradient field: null topology");
  if (green_.size() != topo_->node_count()) {
    throw std::invalid_argument("gradient field: green ratio vector size mismatch");
  }
}

const HopWeights& GradientField::weights_for(NodeId destination) const {
  auto it = weights_.find(destination);
  if (it == weights_.end()) {
    it = weights_.emplace(destination, hop_weights(*topo_, destination)).first;
  }
  return it->second;
}

double GradientField::value(NodeId destination, NodeId i, NodeId j) const {
  const HopWeights& w = weights_for(destination);
  const double h = normalized_hop(*topo_, w, i, j);
  return gradient(alpha_, green_.at(topo_->index_of(j)), h);
}

const RoutePath* RouteTable::find(NodeId source, NodeId destination) const {
  const auto it = paths_.find({source, destination});
  return it == paths_.end() ? nullptr : &it->second;
}

void RouteTable::refresh(const Topology& topo, const GradientField& field,
                         std::size_t hop_budget) {
  for (auto& [pair, path] : paths_) {
    const DiscoveryResult result =
        discover(topo, pair.first, pair.second, field.toward(pair.second), hop_budget);
    if (result.status == DiscoveryStatus::Found) {
      path = result.path;  // adopted atomically for this pair
    } else {
      ++failed_;  // the old path stays in service
    }
  }
}

const RoutePath* RouteTable::ensure(const Topology& topo, const GradientField& field,
                                    NodeId source, NodeId destination, std::size_t hop_budget) {
  const auto it = paths_.find({source, destination});
  if (it != paths_.end()) return &it->second;
  const DiscoveryResult result =
      discover(topo, source, destination, field.toward(destination), hop_budget);
  if (result.status != DiscoveryStatus::Found) {
    ++failed_;
    return nullptr;
  }
  return &paths_.emplace(std::make_pair(source, destination), result.path).first->second;
}

std::vector<std::pair<NodeId, NodeId>> RouteTable::adopted_edges() const {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& [pair, path] : paths_) {
    for (std::size_t i = 1; i < path.size(); ++i) {
      edges.emplace_back(std::min(path[i - 1], path[i]), std::max(path[i - 1], path[i]));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::size_t default_hop_budget(const Topology& topo) { return 4 * topo.node_count(); }

}  // namespace greennet
