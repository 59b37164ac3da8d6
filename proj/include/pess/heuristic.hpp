#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "pess/embedding.hpp"
#include "pess/evaluation.hpp"
#include "pess/shortest_path.hpp"
#include "pess/state.hpp"

namespace pess {

struct PessOptions {
  CostParams params;
  // Scan candidates most expensive first.
  bool descending_scan = false;
  // Run the expansion step from every reached ep2, not only the best one.
  bool expand_all_ep2 = false;
  RecheckScope recheck = RecheckScope::guard;
};

/// A physical path with every chain of a request placed on it. VSNFs use at
/// most three nodes of the path: ep1, ep2 and the best-residual node.
struct CandidateSolution {
  PhysicalPath path;
  NodeId ep2 = 0;
  Embedding embedding;
  double cost = 0.0;
};

enum class Rejection { none, no_route, infeasible };
std::string_view to_string(Rejection r);

struct PessStats {
  int dijkstra_runs = 0;
  std::size_t initial_paths = 0;
  std::size_t expansion_nodes = 0;
  std::size_t candidates = 0;
  std::size_t scanned = 0;
};

struct PessResult {
  std::optional<CandidateSolution> solution;
  Rejection rejection = Rejection::none;
  Verdict last_failure;  // why the last candidate was dropped, if any
  std::vector<double> chain_latencies;  // at acceptance, per request chain
  std::optional<ServiceId> service;     // set by pess_embed
  PessStats stats;

  explicit operator bool() const { return solution.has_value(); }
};

/// Places the request on a fixed ep1 -> ep2 path: region-bound VSNFs on ep1
/// or ep2, everything else on the non-veto path node with the most residual
/// CPU (ties to the lowest id). Returns the violated constraint otherwise.
/// Capacity, latency and security are validated; operational chains are not.
std::variant<CandidateSolution, Verdict> place_on_path(
    const PhysicalPath& path, const ServiceRequest& req,
    const NetworkState& state, const CostParams& params);

/// Builds and ranks candidates, returns the cheapest one that passes the
/// operational-chain check. Does not modify state.
PessResult pess_select(const NetworkState& state, const ServiceRequest& req,
                       const PessOptions& opts = {});

/// pess_select followed by register_operational on acceptance.
PessResult pess_embed(NetworkState& state, const ServiceRequest& req,
                      const PessOptions& opts = {});

/// Debits residuals and records the request's chains with their ⟨γ⟩ in the
/// node guards.
ServiceId register_operational(NetworkState& state, const Embedding& emb,
                               const ServiceRequest& req, double delta);

}  // namespace pess
