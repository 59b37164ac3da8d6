#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pess/embedding.hpp"
#include "pess/evaluation.hpp"
#include "pess/state.hpp"

namespace pess {

enum class Objective { resource_cost, active_nodes, min_latency };

std::string_view to_string(Objective o);
std::optional<Objective> parse_objective(std::string_view s);

struct OracleConfig {
  Objective objective = Objective::resource_cost;
  int max_path_len = 0;  // hop bound per segment; 0 means |N| - 1
  std::int64_t max_enumeration = 5'000'000;
  RecheckScope recheck = RecheckScope::guard;
  bool record_scores = false;

  void validate() const;
};

enum class OracleStatus { optimal, infeasible, budget_exceeded };
std::string_view to_string(OracleStatus s);

struct OracleResult {
  OracleStatus status = OracleStatus::infeasible;
  std::optional<Embedding> embedding;
  double score = 0.0;
  double cost = 0.0;  // embedding_cost of the winner, whatever the objective
  std::vector<double> chain_latencies;
  std::int64_t placements = 0;
  std::int64_t combinations = 0;
  // Every feasible score seen, sorted ascending (only with record_scores).
  std::vector<double> scores;

  explicit operator bool() const { return status == OracleStatus::optimal; }
};

double objective_value(const Embedding& emb, const NetworkState& state,
                       const ServiceRequest& req, Objective objective,
                       const CostParams& params);

/// Number of distinct nodes hosting at least one VSNF.
int active_node_count(const Embedding& emb);

/// Exhaustive search over placements, remote endpoints and per-segment
/// simple paths. Placements are split across OpenMP threads.
OracleResult exact_embed(const NetworkState& state, const ServiceRequest& req,
                         const OracleConfig& cfg, const CostParams& params);

/// Same search on the calling thread only.
OracleResult exact_embed_serial(const NetworkState& state,
                                const ServiceRequest& req,
                                const OracleConfig& cfg,
                                const CostParams& params);

}  // namespace pess
