#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pess/heuristic.hpp"
#include "pess/oracle.hpp"
#include "pess/service.hpp"
#include "pess/state.hpp"
#include "pess/topology.hpp"

namespace pess {

enum class Solver { pess, baseline };
std::string_view to_string(Solver s);

struct WorkloadConfig {
  double load_erlang = 1000.0;
  std::int64_t n_requests = 100'000;
  std::int64_t warmup = 80'000;
  double mean_holding = 1.0;
  std::uint64_t seed = 1;
  RequestGenConfig request_gen;
  PessOptions pess;

  void validate() const;
};

struct Arrival {
  double time = 0.0;
  double holding = 0.0;
  ServiceRequest request;
};

/// Pre-generated arrival sequence; twin runs replay the same one.
struct ArrivalStream {
  std::vector<Arrival> arrivals;
  std::uint64_t fingerprint = 0;
};

ArrivalStream generate_stream(const PhysicalNetwork& net,
                              const VsnfCatalog& catalog,
                              const WorkloadConfig& cfg);

/// FNV-1a over every field of the sequence.
std::uint64_t stream_fingerprint(const std::vector<Arrival>& arrivals);

struct TimingStats {
  std::size_t samples = 0;
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double max = 0.0;

  static TimingStats from(std::vector<double> seconds);
};

struct Metrics {
  Solver solver = Solver::pess;
  double load_erlang = 0.0;
  std::uint64_t seed = 0;
  std::int64_t offered = 0;
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t rejected_no_route = 0;
  std::int64_t rejected_infeasible = 0;
  double blocking_probability = 0.0;
  double consumed_cpu_fraction = 0.0;
  std::map<std::string, double> consumed_cpu_by_region;
  double active_services = 0.0;
  double mean_chain_latency = 0.0;
  std::int64_t latency_samples = 0;
  std::optional<double> delay_ratio_vs;
  TimingStats embed_time;
  std::uint64_t stream_fingerprint = 0;
};

struct SimEvent {
  enum class Kind { arrival, departure };
  Kind kind = Kind::arrival;
  std::int64_t index = 0;  // arrival index; -1 for departures
  double time = 0.0;
  const ServiceRequest* request = nullptr;  // as embedded (after transform)
  const PessResult* result = nullptr;
  std::optional<ServiceId> service;
};

/// Called after every event with the state it produced.
using SimObserver = std::function<void(const SimEvent&, const NetworkState&)>;

Metrics run_stream(const PhysicalNetwork& net, const ArrivalStream& stream,
                   const WorkloadConfig& cfg, Solver solver,
                   const SimObserver& observer = {});

Metrics run_simulation(const PhysicalNetwork& net, const VsnfCatalog& catalog,
                       const WorkloadConfig& cfg, Solver solver,
                       const SimObserver& observer = {});

struct TwinResult {
  Metrics pess;
  Metrics baseline;
  double delay_ratio = 1.0;  // baseline / PESS mean chain latency
};

TwinResult run_twin_comparison(const PhysicalNetwork& net,
                               const VsnfCatalog& catalog,
                               const WorkloadConfig& cfg);

struct SweepPoint {
  double load_erlang = 0.0;
  std::uint64_t seed = 0;
};

/// Twin comparison at every (load, seed) point, one OpenMP task per point.
/// Results follow the order of points.
std::vector<TwinResult> run_sweep(const PhysicalNetwork& net,
                                  const VsnfCatalog& catalog,
                                  const WorkloadConfig& base,
                                  const std::vector<SweepPoint>& points);
std::vector<TwinResult> run_sweep_serial(const PhysicalNetwork& net,
                                         const VsnfCatalog& catalog,
                                         const WorkloadConfig& base,
                                         const std::vector<SweepPoint>& points);

struct OverheadReport {
  std::int64_t recorded = 0;
  std::int64_t compared = 0;          // both solved
  std::int64_t budget_skipped = 0;
  std::int64_t both_rejected = 0;
  std::int64_t heuristic_only_rejected = 0;
  std::int64_t oracle_only_rejected = 0;  // heuristic accepted, oracle did not
  std::int64_t dominance_violations = 0;  // heuristic cheaper than oracle
  std::int64_t heuristic_infeasible = 0;  // accepted but failed the battery
  std::vector<double> overheads;          // (cost_h - cost_o) / cost_o
  double median_overhead = 0.0;
  double mean_overhead = 0.0;
  double max_overhead = 0.0;
  TimingStats heuristic_time;
  TimingStats oracle_time;
};

/// Warms the network with the heuristic; every arrival after warmup is solved
/// both ways on the same state before the heuristic's decision is applied.
OverheadReport run_heuristic_vs_oracle(const PhysicalNetwork& net,
                                       const VsnfCatalog& catalog,
                                       const WorkloadConfig& cfg,
                                       const OracleConfig& oracle_cfg,
                                       double tolerance = 1e-9);

struct ScalabilityPoint {
  int n_nodes = 1000;
  int m = 5;
  int ep2_size = 1;
};

struct ScalabilityRow {
  ScalabilityPoint point;
  int requests = 0;
  int accepted = 0;
  double mean_seconds = 0.0;
  double max_seconds = 0.0;
};

/// Fresh BA topology and state per point; requests are embedded in sequence.
std::vector<ScalabilityRow> run_scalability(
    const std::vector<ScalabilityPoint>& sizes, int per_size_requests,
    std::uint64_t seed, const VsnfCatalog& catalog,
    const RequestGenConfig& gen = {}, const PessOptions& opts = {});

}  // namespace pess
