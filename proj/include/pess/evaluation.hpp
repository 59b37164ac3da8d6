#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pess/embedding.hpp"
#include "pess/state.hpp"

namespace pess {

// Delay model --------------------------------------------------------------

/// Time for one packet through a VSNF: γ_u·σ / ((γ'_i − γ^c_u) + δ).
double processing_delay(double gamma_u, double sigma, double residual_gamma_i,
                        double gamma_cu, double delta);

/// Σ over routed arcs of propagation plus queuing. A segment whose source
/// entity is a VSNF pays the departure half of the tail node's queuing
/// budget; a segment whose target is a VSNF pays the arrival half of the
/// head node's budget. Endpoint-only incidences are bypassed.
double path_latency(const ChainEmbedding& emb, const PhysicalNetwork& net);

/// End-to-end latency of a chain against the state's residuals, reduced by
/// extra_load (the CPU of a request not yet debited). Pass an empty load
/// when the chain's own demand is already in state.
double chain_latency(const Chain& chain, const ChainEmbedding& emb,
                     const NetworkState& state, const NodeLoad& extra_load,
                     double delta);

GammaThreshold gamma_threshold(const Chain& chain, const ChainEmbedding& emb,
                               const PhysicalNetwork& net, double delta);

/// Σ b_kl·β^c + α·Σ c_i·γ^c_u with b, c taken from the residuals in state
/// (i.e. before the embedding is applied).
double embedding_cost(const NetworkState& state, const Embedding& emb,
                      const ServiceRequest& req, const CostParams& params);

// Constraint battery ---------------------------------------------------------

enum class Violation {
  none,
  routing,
  capacity_node,
  capacity_link,
  latency,
  operational_latency,
  stateful,
  region,
  veto,
  order,
};

std::string_view to_string(Violation v);

struct Verdict {
  Violation code = Violation::none;
  std::string detail;
  std::optional<ChainInstanceId> operational_chain;

  explicit operator bool() const { return code == Violation::none; }
  static Verdict ok() { return {}; }
  static Verdict fail(Violation v, std::string d) {
    return {v, std::move(d), std::nullopt};
  }
};

/// Structure of the x/y assignment: one host per entity, endpoints on ep1 /
/// EP2 per direction, each route a simple directed path between consecutive
/// hosts with existing arcs.
Verdict check_routing(const Embedding& emb, const ServiceRequest& req,
                      const PhysicalNetwork& net);

/// Stateful co-location, region containment, veto exclusion and traversal
/// order of the hosted VSNFs.
Verdict check_security(const Embedding& emb, const ServiceRequest& req,
                       const PhysicalNetwork& net);

Verdict check_capacity(const NetworkState& state, const ResourceDemand& demand);

/// Latency bound of every chain in the request, with the request's own CPU
/// counted against each host.
Verdict check_latency(const NetworkState& state, const Embedding& emb,
                      const ServiceRequest& req, const ResourceDemand& demand,
                      double delta);

enum class RecheckScope {
  guard,  // only node_guard chains of nodes receiving CPU demand
  full,   // every operational chain with a VSNF on such a node
};

/// Would the candidate push an operational chain past its latency bound?
Verdict recheck_operational(const NetworkState& state,
                            const ResourceDemand& demand, double delta,
                            RecheckScope scope = RecheckScope::guard);

/// Routing, security, capacity, latency and operational-chain checks, in
/// that order; the first failure is reported.
Verdict check_embedding(const NetworkState& state, const Embedding& emb,
                        const ServiceRequest& req, double delta,
                        RecheckScope scope = RecheckScope::guard);

}  // namespace pess
