#include "pess/topology.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pess {

PhysicalNetwork::PhysicalNetwork(std::vector<PhysicalNode> nodes,
                                 std::vector<PhysicalLink> links,
                                 RegionMap regions)
    : nodes_(std::move(nodes)),
      links_(std::move(links)),
      regions_(std::move(regions)) {
  const auto n = static_cast<NodeId>(nodes_.size());
  if (n == 0) throw TopologyError("network has no nodes");

  for (NodeId i = 0; i < n; ++i) {
    auto& node = nodes_[i];
    if (node.id != i)
      throw TopologyError("node " + std::to_string(i) + ": ids must be dense");
    if (node.name.empty()) node.name = "n" + std::to_string(i);
    if (node.gamma_nominal <= 0)
      throw TopologyError("node " + node.name + ": capacity must be positive");
    if (!(node.queuing_budget >= 0.0))
      throw TopologyError("node " + node.name +
                          ": queuing budget must be non-negative");
    if (!by_name_.emplace(node.name, i).second)
      throw TopologyError("duplicate node name " + node.name);
  }

  adjacency_.assign(nodes_.size(), {});
  std::set<std::pair<NodeId, NodeId>> seen;
  for (LinkId l = 0; l < static_cast<LinkId>(links_.size()); ++l) {
    const auto& link = links_[l];
    const std::string where = "link " + std::to_string(l);
    if (link.id != l) throw TopologyError(where + ": ids must be dense");
    if (link.a < 0 || link.a >= n || link.b < 0 || link.b >= n)
      throw TopologyError(where + ": unknown endpoint");
    if (link.a == link.b) throw TopologyError(where + ": self loop");
    if (link.beta_nominal <= 0)
      throw TopologyError(where + ": bandwidth must be positive");
    if (!(link.lambda_prop >= 0.0))
      throw TopologyError(where + ": delay must be non-negative");
    if (!seen.emplace(std::minmax(link.a, link.b)).second)
      throw TopologyError(where + ": parallel link between " +
                          nodes_[link.a].name + " and " + nodes_[link.b].name);
    adjacency_[link.a].push_back(2 * l);
    adjacency_[link.b].push_back(2 * l + 1);
  }

  for (auto& [name, members] : regions_) {
    if (members.empty()) throw TopologyError("region " + name + " is empty");
    for (NodeId m : members)
      if (m < 0 || m >= n)
        throw TopologyError("region " + name + ": unknown node");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }

  // connectivity
  std::vector<char> seen_node(nodes_.size(), 0);
  std::vector<NodeId> stack{0};
  seen_node[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (ArcId a : adjacency_[u]) {
      NodeId v = arc(a).head;
      if (!seen_node[v]) {
        seen_node[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  if (reached != nodes_.size())
    throw TopologyError("network is disconnected (" + std::to_string(reached) +
                        " of " + std::to_string(nodes_.size()) +
                        " nodes reachable)");
}

Arc PhysicalNetwork::arc(ArcId id) const {
  const auto& l = links_.at(id >> 1);
  if (id & 1) return {id, l.b, l.a, l.id};
  return {id, l.a, l.b, l.id};
}

std::optional<ArcId> PhysicalNetwork::find_arc(NodeId tail, NodeId head) const {
  for (ArcId a : adjacency_.at(tail))
    if (arc(a).head == head) return a;
  return std::nullopt;
}

std::span<const NodeId> PhysicalNetwork::region(const std::string& name) const {
  auto it = regions_.find(name);
  if (it == regions_.end()) return {};
  return it->second;
}

bool PhysicalNetwork::in_region(const std::string& name, NodeId n) const {
  auto r = region(name);
  return std::binary_search(r.begin(), r.end(), n);
}

std::optional<NodeId> PhysicalNetwork::find_node(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

CpuRate PhysicalNetwork::total_gamma() const {
  return std::accumulate(
      nodes_.begin(), nodes_.end(), CpuRate{0},
      [](CpuRate acc, const PhysicalNode& n) { return acc + n.gamma_nominal; });
}

double propagation_delay(double distance_km) {
  if (!(distance_km >= 0.0))
    throw std::invalid_argument("distance must be non-negative");
  return distance_km * 1e3 * kRefractiveIndex / kSpeedOfLight;
}

PhysicalNode default_node_profile() {
  PhysicalNode n;
  n.gamma_nominal = 32 * CpuRate{2'100'000'000};
  n.queuing_budget = 12 * kSwitchPortQueuing;
  return n;
}

PhysicalNode stanford_node_profile() {
  PhysicalNode n = default_node_profile();
  n.queuing_budget = 4 * kSwitchPortQueuing;
  return n;
}

PhysicalNetwork generate_barabasi_albert(const BarabasiAlbertConfig& cfg) {
  if (cfg.m < 1 || cfg.n_nodes <= cfg.m)
    throw TopologyError("Barabasi-Albert requires n_nodes > m >= 1");
  auto [dmin, dmax] = cfg.dist_range_km;
  if (!(dmin >= 0.0) || dmax < dmin)
    throw TopologyError("invalid distance range");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dist(dmin, dmax);

  std::vector<PhysicalNode> nodes(cfg.n_nodes, cfg.node_template);
  for (int i = 0; i < cfg.n_nodes; ++i) {
    nodes[i].id = i;
    nodes[i].name = "n" + std::to_string(i);
  }

  std::vector<PhysicalLink> links;
  links.reserve(static_cast<std::size_t>(cfg.m) * (cfg.n_nodes - cfg.m));
  // Each endpoint appears once per incident edge: uniform sampling from this
  // list is sampling proportional to degree.
  std::vector<NodeId> repeated;
  std::vector<NodeId> targets(cfg.m);
  std::iota(targets.begin(), targets.end(), 0);

  auto add_link = [&](NodeId a, NodeId b) {
    PhysicalLink l;
    l.id = static_cast<LinkId>(links.size());
    l.a = a;
    l.b = b;
    l.beta_nominal = cfg.link_bandwidth;
    l.lambda_prop = propagation_delay(dist(rng));
    links.push_back(l);
  };

  for (NodeId source = cfg.m; source < cfg.n_nodes; ++source) {
    for (NodeId t : targets) add_link(source, t);
    repeated.insert(repeated.end(), targets.begin(), targets.end());
    repeated.insert(repeated.end(), cfg.m, source);

    std::set<NodeId> picked;
    std::uniform_int_distribution<std::size_t> pick(0, repeated.size() - 1);
    while (static_cast<int>(picked.size()) < cfg.m &&
           source + 1 < cfg.n_nodes)
      picked.insert(repeated[pick(rng)]);
    targets.assign(picked.begin(), picked.end());
  }

  return PhysicalNetwork(std::move(nodes), std::move(links));
}

}  // namespace pess
