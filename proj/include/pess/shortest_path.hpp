#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pess/topology.hpp"

namespace pess {

struct PhysicalPath {
  std::vector<NodeId> nodes;
  std::vector<ArcId> arcs;  // arcs[i] joins nodes[i] -> nodes[i+1]
  friend bool operator==(const PhysicalPath&, const PhysicalPath&) = default;
};

/// Weight of traversing an out-arc; nullopt prunes the arc.
using ArcWeight = std::function<std::optional<double>(ArcId)>;

/// Dijkstra tree rooted at a source, settled lazily: the search stops as soon
/// as every target is settled. Ties are broken by lower NodeId.
class ShortestPathTree {
 public:
  ShortestPathTree(const PhysicalNetwork& net, NodeId source,
                   std::span<const NodeId> targets, const ArcWeight& weight);

  bool reached(NodeId n) const { return settled_[n] != 0; }
  double distance(NodeId n) const { return dist_[n]; }
  /// Source -> n along tree arcs; empty when n was not settled.
  PhysicalPath path_to(NodeId n) const;
  NodeId source() const { return source_; }

 private:
  const PhysicalNetwork* net_;
  NodeId source_;
  std::vector<double> dist_;
  std::vector<ArcId> via_;
  std::vector<char> settled_;
};

}  // namespace pess
