#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pess {

using NodeId = std::int32_t;
using LinkId = std::int32_t;
// Directed arc id: 2*link for a->b, 2*link+1 for b->a.
using ArcId = std::int32_t;

// Capacities and demands in cycles/s and bits/s.
using CpuRate = std::int64_t;
using Bandwidth = std::int64_t;

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhysicalNode {
  NodeId id = 0;
  std::string name;
  CpuRate gamma_nominal = 0;    // cycles/s
  double queuing_budget = 0.0;  // seconds, split evenly arrival/departure
};

struct PhysicalLink {
  LinkId id = 0;
  NodeId a = 0;
  NodeId b = 0;
  Bandwidth beta_nominal = 0;  // bits/s, per direction
  double lambda_prop = 0.0;    // seconds
};

struct Arc {
  ArcId id = 0;
  NodeId tail = 0;
  NodeId head = 0;
  LinkId link = 0;
};

/// Physical substrate: NFVI-POP nodes joined by undirected links, each link
/// exposing two independent directed arcs. Immutable after construction.
class PhysicalNetwork {
 public:
  using RegionMap = std::map<std::string, std::vector<NodeId>>;

  /// Validates and builds the adjacency. Throws TopologyError on
  /// non-positive capacities, bad endpoints, parallel links, empty or
  /// out-of-range regions, or a disconnected graph.
  PhysicalNetwork(std::vector<PhysicalNode> nodes,
                  std::vector<PhysicalLink> links, RegionMap regions = {});

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_links() const { return links_.size(); }
  std::size_t num_arcs() const { return 2 * links_.size(); }

  const PhysicalNode& node(NodeId id) const { return nodes_.at(id); }
  const PhysicalLink& link(LinkId id) const { return links_.at(id); }
  const std::vector<PhysicalNode>& nodes() const { return nodes_; }
  const std::vector<PhysicalLink>& links() const { return links_; }

  Arc arc(ArcId id) const;
  std::span<const ArcId> out_arcs(NodeId n) const { return adjacency_.at(n); }
  std::optional<ArcId> find_arc(NodeId tail, NodeId head) const;
  static ArcId reverse(ArcId a) { return a ^ 1; }

  const RegionMap& regions() const { return regions_; }
  /// Empty span when the region does not exist.
  std::span<const NodeId> region(const std::string& name) const;
  bool in_region(const std::string& name, NodeId n) const;

  std::optional<NodeId> find_node(const std::string& name) const;

  CpuRate total_gamma() const;

 private:
  std::vector<PhysicalNode> nodes_;
  std::vector<PhysicalLink> links_;
  RegionMap regions_;
  std::vector<std::vector<ArcId>> adjacency_;
  std::map<std::string, NodeId> by_name_;
};

/// λ = d·r_index / C with r_index = 1.5 and C = 3e8 m/s.
double propagation_delay(double distance_km);

inline constexpr double kRefractiveIndex = 1.5;
inline constexpr double kSpeedOfLight = 3e8;
inline constexpr double kSwitchPortQueuing = 80e-6;

/// One 32-core 2.1 GHz server behind a three-tier local network
/// (12 ports of 80 µs queuing).
PhysicalNode default_node_profile();
/// Campus profile: one network device per node, 4 ports.
PhysicalNode stanford_node_profile();

struct BarabasiAlbertConfig {
  int n_nodes = 20;
  int m = 2;
  std::uint64_t seed = 1;
  std::pair<double, double> dist_range_km{10.0, 100.0};
  Bandwidth link_bandwidth = 10'000'000'000;  // 10 Gbps
  PhysicalNode node_template = default_node_profile();
};

/// Preferential attachment starting from m isolated seed nodes; every later
/// node attaches to m distinct existing nodes, giving |E| = m·|N| − m².
PhysicalNetwork generate_barabasi_albert(const BarabasiAlbertConfig& cfg);

}  // namespace pess
