#include "pess/shortest_path.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace pess {

ShortestPathTree::ShortestPathTree(const PhysicalNetwork& net, NodeId source,
                                   std::span<const NodeId> targets,
                                   const ArcWeight& weight)
    : net_(&net),
      source_(source),
      dist_(net.num_nodes(), std::numeric_limits<double>::infinity()),
      via_(net.num_nodes(), -1),
      settled_(net.num_nodes(), 0) {
  std::vector<char> is_target(net.num_nodes(), 0);
  std::size_t pending = 0;
  for (NodeId t : targets)
    if (!is_target[t]) {
      is_target[t] = 1;
      ++pending;
    }

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist_[source] = 0.0;
  queue.emplace(0.0, source);

  while (!queue.empty() && pending > 0) {
    auto [d, u] = queue.top();
    queue.pop();
    if (settled_[u] || d > dist_[u]) continue;
    settled_[u] = 1;
    if (is_target[u]) --pending;

    for (ArcId a : net.out_arcs(u)) {
      const NodeId v = net.arc(a).head;
      if (settled_[v]) continue;
      auto w = weight(a);
      if (!w) continue;
      const double nd = d + *w;
      if (nd < dist_[v] || (nd == dist_[v] && via_[v] >= 0 &&
                            net.arc(via_[v]).tail > u)) {
        dist_[v] = nd;
        via_[v] = a;
        queue.emplace(nd, v);
      }
    }
  }
}

PhysicalPath ShortestPathTree::path_to(NodeId n) const {
  PhysicalPath p;
  if (!settled_[n]) return p;
  for (NodeId at = n; at != source_;) {
    const Arc arc = net_->arc(via_[at]);
    p.arcs.push_back(arc.id);
    p.nodes.push_back(at);
    at = arc.tail;
  }
  p.nodes.push_back(source_);
  std::reverse(p.nodes.begin(), p.nodes.end());
  std::reverse(p.arcs.begin(), p.arcs.end());
  return p;
}

}  // namespace pess
