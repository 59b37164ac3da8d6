#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "pess/embedding.hpp"
#include "pess/service.hpp"
#include "pess/topology.hpp"

namespace pess {

using ChainInstanceId = std::uint64_t;
using ServiceId = std::uint64_t;

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CostParams {
  double alpha = 1.0;
  double delta = 1e-6;
};

/// ⟨γ⟩^c: the average residual CPU a chain's hosts must keep for its
/// latency bound to hold. exhausted = fixed delays already use the budget.
struct GammaThreshold {
  double value = 0.0;
  bool exhausted = false;
};

struct OperationalChain {
  ChainInstanceId id = 0;
  ServiceId service = 0;
  Chain chain;
  ChainEmbedding embedding;
  GammaThreshold threshold;
  ResourceDemand demand;
};

/// Residual capacities plus the registry of operational chains and the
/// per-node guard (operational chain with the largest ⟨γ⟩ among those with a
/// VSNF on the node). Single writer; copies are independent snapshots.
class NetworkState {
 public:
  explicit NetworkState(const PhysicalNetwork& net);

  const PhysicalNetwork& network() const { return *net_; }

  CpuRate residual_gamma(NodeId n) const { return residual_gamma_[n]; }
  Bandwidth residual_beta(ArcId a) const { return residual_beta_[a]; }
  const std::vector<CpuRate>& residual_gamma() const { return residual_gamma_; }
  const std::vector<Bandwidth>& residual_beta() const { return residual_beta_; }

  /// Throws CapacityError naming the first node/arc that would go negative;
  /// the state is left untouched in that case.
  void debit(const ResourceDemand& d);
  void credit(const ResourceDemand& d);

  /// Debits the embedding, registers every chain as operational and updates
  /// the node guards.
  ServiceId register_service(const ServiceRequest& req, const Embedding& emb,
                             double delta);
  /// Releases every chain of the service; guards pointing at a released
  /// chain are rebuilt from the chains still on that node.
  void release(ServiceId id);

  const std::map<ChainInstanceId, OperationalChain>& operational() const {
    return operational_;
  }
  const OperationalChain& chain(ChainInstanceId id) const {
    return operational_.at(id);
  }
  std::optional<ChainInstanceId> guard(NodeId n) const { return guard_[n]; }
  const std::set<ChainInstanceId>& chains_on(NodeId n) const {
    return chains_on_[n];
  }
  std::size_t active_services() const { return services_.size(); }
  bool has_service(ServiceId id) const { return services_.count(id) != 0; }
  const std::vector<ChainInstanceId>& service_chains(ServiceId id) const {
    return services_.at(id);
  }

  /// Total CPU in use, Σ(γ_i − γ'_i).
  CpuRate consumed_gamma() const;

 private:
  bool outranks(ChainInstanceId a, ChainInstanceId b) const;
  void rebuild_guard(NodeId n);

  const PhysicalNetwork* net_;
  std::vector<CpuRate> residual_gamma_;
  std::vector<Bandwidth> residual_beta_;
  std::map<ChainInstanceId, OperationalChain> operational_;
  std::map<ServiceId, std::vector<ChainInstanceId>> services_;
  std::vector<std::set<ChainInstanceId>> chains_on_;
  std::vector<std::optional<ChainInstanceId>> guard_;
  ChainInstanceId next_chain_ = 1;
  ServiceId next_service_ = 1;
};

/// Copy of state with the embedding's demand debited (no registration).
NetworkState residual_after(const NetworkState& state, const Embedding& emb,
                            const ServiceRequest& req);

}  // namespace pess
