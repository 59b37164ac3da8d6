#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pess/topology.hpp"

namespace pess {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where a region-bound VSNF must run: on the user's attachment node, on the
/// remote endpoint set, or anywhere inside a named region of the network.
struct RegionBinding {
  enum class Kind { ep1, ep2, named };
  Kind kind = Kind::ep1;
  std::string name;  // only for Kind::named

  static RegionBinding at_ep1() { return {Kind::ep1, {}}; }
  static RegionBinding at_ep2() { return {Kind::ep2, {}}; }
  static RegionBinding named_region(std::string n) {
    return {Kind::named, std::move(n)};
  }
  friend bool operator==(const RegionBinding&, const RegionBinding&) = default;
};

struct VsnfSpec {
  std::string name;
  double gamma_u = 0.0;  // cycles per bit
  bool stateful = false;
  std::optional<RegionBinding> region;
  friend bool operator==(const VsnfSpec&, const VsnfSpec&) = default;
};

/// downstream: user endpoint (ep1) -> remote endpoint (EP2);
/// upstream: remote endpoint -> user endpoint.
enum class Direction { downstream, upstream };

struct Chain {
  std::string id;
  std::vector<VsnfSpec> vsnfs;  // traversal order
  double beta_req = 0.0;        // bits/s
  double lambda_max = 0.0;      // s
  double sigma = 8000.0;        // bits
  double pi_external = 0.0;     // s
  Direction direction = Direction::downstream;
  friend bool operator==(const Chain&, const Chain&) = default;
};

struct VsnfRef {
  std::size_t chain = 0;
  std::size_t position = 0;
  friend auto operator<=>(const VsnfRef&, const VsnfRef&) = default;
};

using StatefulGroup = std::vector<VsnfRef>;

struct ServiceRequest {
  std::vector<Chain> chains;
  NodeId ep1 = 0;
  std::vector<NodeId> ep2_set;  // sorted, non-empty
  std::vector<StatefulGroup> stateful_groups;
  std::vector<NodeId> veto;  // sorted
  friend bool operator==(const ServiceRequest&, const ServiceRequest&) = default;

  bool in_ep2(NodeId n) const;
  bool is_veto(NodeId n) const;
  std::size_t total_vsnfs() const;
};

/// Integer demands derived from a chain; all accounting goes through these.
Bandwidth bandwidth_demand(const Chain& c);
CpuRate cpu_demand(const VsnfSpec& v, const Chain& c);

/// Throws ConfigError when the request breaks a structural invariant
/// (positive β/λ/σ, non-empty EP2, nodes in range, consistent groups).
void validate_request(const ServiceRequest& req, const PhysicalNetwork& net);

/// Groups every stateful VSNF name that occurs in two or more chains.
std::vector<StatefulGroup> derive_stateful_groups(
    const std::vector<Chain>& chains);

class VsnfCatalog {
 public:
  VsnfCatalog() = default;
  explicit VsnfCatalog(std::vector<VsnfSpec> entries);

  const VsnfSpec* find(const std::string& name) const;
  const VsnfSpec& at(const std::string& name) const;
  const std::vector<VsnfSpec>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<VsnfSpec> entries_;
};

/// The 13 measured VSNF implementations (cycles/bit).
VsnfCatalog builtin_catalog();

struct RequestGenConfig {
  int min_chains = 1;
  int max_chains = 5;
  int min_vsnfs = 0;
  int max_vsnfs = 3;
  double min_bandwidth = 1e6;  // log-uniform
  double max_bandwidth = 1e8;
  std::vector<double> latency_menu{0.100, 0.150, 0.200, 0.400};
  double sigma = 8000.0;
  double border_pi = 5e-3;
  std::string border_region = "border";
  double border_bias = 0.8;
  // Chance that a VSNF name in a request is pinned to ep1 or EP2 (half each).
  double region_bind_probability = 0.0;
  // Draw EP2 as this many distinct nodes instead of one (0 = off).
  int ep2_count = 0;
  std::string veto_region = "veto";

  void validate() const;
};

class RequestGenerator {
 public:
  RequestGenerator(const PhysicalNetwork& net, const VsnfCatalog& catalog,
                   RequestGenConfig cfg);

  ServiceRequest generate(std::mt19937_64& rng) const;
  const RequestGenConfig& config() const { return cfg_; }

 private:
  const PhysicalNetwork* net_;
  const VsnfCatalog* catalog_;
  RequestGenConfig cfg_;
};

inline ServiceRequest generate_request(const PhysicalNetwork& net,
                                       const VsnfCatalog& catalog,
                                       const RequestGenConfig& cfg,
                                       std::mt19937_64& rng) {
  return RequestGenerator(net, catalog, cfg).generate(rng);
}

/// Application-agnostic transform: one chain per traffic direction carrying
/// the union of that direction's VSNFs.
ServiceRequest baseline_request(const ServiceRequest& req);

}  // namespace pess
