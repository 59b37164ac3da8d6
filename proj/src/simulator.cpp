#include "pess/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <numeric>
#include <queue>
#include <random>

namespace pess {

std::string_view to_string(Solver s) {
  return s == Solver::pess ? "pess" : "baseline";
}

void WorkloadConfig::validate() const {
  if (!(load_erlang > 0)) throw ConfigError("load must be positive");
  if (n_requests <= 0) throw ConfigError("request count must be positive");
  if (warmup < 0 || warmup >= n_requests)
    throw ConfigError("warmup must lie in [0, n_requests)");
  if (!(mean_holding > 0)) throw ConfigError("mean holding time must be positive");
  request_gen.validate();
}

namespace {

class Fnv1a {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= b[i];
      h_ *= 1099511628211ULL;
    }
  }
  template <class T>
  void value(T v) {
    bytes(&v, sizeof v);
  }
  void text(const std::string& s) {
    value(s.size());
    bytes(s.data(), s.size());
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 14695981039346656037ULL;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::uint64_t stream_fingerprint(const std::vector<Arrival>& arrivals) {
  Fnv1a h;
  for (const auto& a : arrivals) {
    h.value(a.time);
    h.value(a.holding);
    const auto& r = a.request;
    h.value(r.ep1);
    for (NodeId n : r.ep2_set) h.value(n);
    h.value(-1);
    for (NodeId n : r.veto) h.value(n);
    h.value(-2);
    for (const auto& c : r.chains) {
      h.text(c.id);
      h.value(c.beta_req);
      h.value(c.lambda_max);
      h.value(c.sigma);
      h.value(c.pi_external);
      h.value(static_cast<int>(c.direction));
      for (const auto& v : c.vsnfs) {
        h.text(v.name);
        h.value(v.gamma_u);
        h.value(v.stateful);
        h.value(v.region ? static_cast<int>(v.region->kind) : -1);
        if (v.region) h.text(v.region->name);
      }
      h.value(-3);
    }
    h.value(-4);
  }
  return h.digest();
}

ArrivalStream generate_stream(const PhysicalNetwork& net,
                              const VsnfCatalog& catalog,
                              const WorkloadConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::exponential_distribution<double> gap(cfg.load_erlang / cfg.mean_holding);
  std::exponential_distribution<double> hold(1.0 / cfg.mean_holding);
  const RequestGenerator gen(net, catalog, cfg.request_gen);

  ArrivalStream stream;
  stream.arrivals.reserve(static_cast<std::size_t>(cfg.n_requests));
  double t = 0.0;
  for (std::int64_t i = 0; i < cfg.n_requests; ++i) {
    Arrival a;
    t += gap(rng);
    a.time = t;
    a.holding = hold(rng);
    a.request = gen.generate(rng);
    stream.arrivals.push_back(std::move(a));
  }
  stream.fingerprint = stream_fingerprint(stream.arrivals);
  return stream;
}

TimingStats TimingStats::from(std::vector<double> seconds) {
  TimingStats s;
  s.samples = seconds.size();
  if (seconds.empty()) return s;
  std::sort(seconds.begin(), seconds.end());
  auto pct = [&](double q) {
    const auto i = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(seconds.size())) - 1);
    return seconds[std::min(i, seconds.size() - 1)];
  };
  s.mean = std::accumulate(seconds.begin(), seconds.end(), 0.0) /
           static_cast<double>(seconds.size());
  s.p50 = pct(0.50);
  s.p95 = pct(0.95);
  s.p99 = pct(0.99);
  s.max = seconds.back();
  return s;
}

namespace {

// Time-weighted averages of the quantities sampled after each event.
class Occupancy {
 public:
  explicit Occupancy(const PhysicalNetwork& net) : net_(&net) {
    total_ = static_cast<double>(net.total_gamma());
    for (const auto& [name, nodes] : net.regions()) {
      double cap = 0.0;
      for (NodeId n : nodes) cap += static_cast<double>(net.node(n).gamma_nominal);
      regions_.push_back({name, cap, 0.0, 0.0});
    }
  }

  void sample(const NetworkState& state) {
    cpu_now_ = static_cast<double>(state.consumed_gamma()) / total_;
    active_now_ = static_cast<double>(state.active_services());
    for (auto& r : regions_) {
      double used = 0.0;
      for (NodeId n : net_->region(r.name))
        used += static_cast<double>(net_->node(n).gamma_nominal -
                                    state.residual_gamma(n));
      r.now = used / r.capacity;
    }
  }

  void start(double t) {
    counting_ = true;
    start_ = last_ = t;
  }

  void advance(double t) {
    if (!counting_) return;
    const double dt = t - last_;
    cpu_area_ += dt * cpu_now_;
    active_area_ += dt * active_now_;
    for (auto& r : regions_) r.area += dt * r.now;
    last_ = t;
  }

  void finish(Metrics& m) const {
    const double span = last_ - start_;
    const bool timed = counting_ && span > 0;
    m.consumed_cpu_fraction = timed ? cpu_area_ / span : cpu_now_;
    m.active_services = timed ? active_area_ / span : active_now_;
    for (const auto& r : regions_)
      m.consumed_cpu_by_region[r.name] = timed ? r.area / span : r.now;
  }

 private:
  struct Region {
    std::string name;
    double capacity;
    double now;
    double area;
  };
  const PhysicalNetwork* net_;
  double total_ = 0.0;
  std::vector<Region> regions_;
  bool counting_ = false;
  double start_ = 0.0, last_ = 0.0;
  double cpu_now_ = 0.0, active_now_ = 0.0;
  double cpu_area_ = 0.0, active_area_ = 0.0;
};

using Departure = std::pair<double, ServiceId>;
using DepartureQueue =
    std::priority_queue<Departure, std::vector<Departure>, std::greater<>>;

}  // namespace

Metrics run_stream(const PhysicalNetwork& net, const ArrivalStream& stream,
                   const WorkloadConfig& cfg, Solver solver,
                   const SimObserver& observer) {
  Metrics m;
  m.solver = solver;
  m.load_erlang = cfg.load_erlang;
  m.seed = cfg.seed;
  m.stream_fingerprint = stream.fingerprint;

  NetworkState state(net);
  Occupancy occ(net);
  occ.sample(state);
  DepartureQueue departures;
  std::vector<double> timings;
  double latency_sum = 0.0;

  for (std::size_t i = 0; i < stream.arrivals.size(); ++i) {
    const Arrival& a = stream.arrivals[i];
    while (!departures.empty() && departures.top().first <= a.time) {
      const auto [t, sid] = departures.top();
      departures.pop();
      occ.advance(t);
      state.release(sid);
      occ.sample(state);
      if (observer) {
        SimEvent ev;
        ev.kind = SimEvent::Kind::departure;
        ev.index = -1;
        ev.time = t;
        ev.service = sid;
        observer(ev, state);
      }
    }
    occ.advance(a.time);
    const bool counting = static_cast<std::int64_t>(i) >= cfg.warmup;
    if (static_cast<std::int64_t>(i) == cfg.warmup) occ.start(a.time);

    const ServiceRequest req =
        solver == Solver::baseline ? baseline_request(a.request) : a.request;
    const auto t0 = Clock::now();
    PessResult result = pess_embed(state, req, cfg.pess);
    const double elapsed = seconds_since(t0);
    occ.sample(state);

    if (counting) {
      ++m.offered;
      timings.push_back(elapsed);
      if (result) {
        ++m.accepted;
        if (!result.chain_latencies.empty()) {
          latency_sum += std::accumulate(result.chain_latencies.begin(),
                                         result.chain_latencies.end(), 0.0) /
                         static_cast<double>(result.chain_latencies.size());
          ++m.latency_samples;
        }
      } else {
        ++m.rejected;
        if (result.rejection == Rejection::no_route)
          ++m.rejected_no_route;
        else
          ++m.rejected_infeasible;
      }
    }
    if (result) departures.emplace(a.time + a.holding, *result.service);
    if (observer) {
      SimEvent ev;
      ev.kind = SimEvent::Kind::arrival;
      ev.index = static_cast<std::int64_t>(i);
      ev.time = a.time;
      ev.request = &req;
      ev.result = &result;
      ev.service = result.service;
      observer(ev, state);
    }
  }

  occ.finish(m);
  m.blocking_probability =
      m.offered > 0 ? static_cast<double>(m.rejected) / static_cast<double>(m.offered)
                    : 0.0;
  m.mean_chain_latency =
      m.latency_samples > 0 ? latency_sum / static_cast<double>(m.latency_samples)
                            : 0.0;
  m.embed_time = TimingStats::from(std::move(timings));
  return m;
}

Metrics run_simulation(const PhysicalNetwork& net, const VsnfCatalog& catalog,
                       const WorkloadConfig& cfg, Solver solver,
                       const SimObserver& observer) {
  return run_stream(net, generate_stream(net, catalog, cfg), cfg, solver,
                    observer);
}

TwinResult run_twin_comparison(const PhysicalNetwork& net,
                               const VsnfCatalog& catalog,
                               const WorkloadConfig& cfg) {
  const ArrivalStream stream = generate_stream(net, catalog, cfg);
  TwinResult r;
  r.pess = run_stream(net, stream, cfg, Solver::pess);
  r.baseline = run_stream(net, stream, cfg, Solver::baseline);
  r.delay_ratio = r.pess.mean_chain_latency > 0
                      ? r.baseline.mean_chain_latency / r.pess.mean_chain_latency
                      : 1.0;
  r.baseline.delay_ratio_vs = r.delay_ratio;
  return r;
}

namespace {

WorkloadConfig at_point(const WorkloadConfig& base, const SweepPoint& p) {
  WorkloadConfig cfg = base;
  cfg.load_erlang = p.load_erlang;
  cfg.seed = p.seed;
  return cfg;
}

}  // namespace

std::vector<TwinResult> run_sweep(const PhysicalNetwork& net,
                                  const VsnfCatalog& catalog,
                                  const WorkloadConfig& base,
                                  const std::vector<SweepPoint>& points) {
  std::vector<TwinResult> out(points.size());
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = run_twin_comparison(net, catalog, at_point(base, points[i]));
    } catch (...) {
#pragma omp critical(pess_sweep_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<TwinResult> run_sweep_serial(const PhysicalNetwork& net,
                                         const VsnfCatalog& catalog,
                                         const WorkloadConfig& base,
                                         const std::vector<SweepPoint>& points) {
  std::vector<TwinResult> out;
  out.reserve(points.size());
  for (const auto& p : points)
    out.push_back(run_twin_comparison(net, catalog, at_point(base, p)));
  return out;
}

OverheadReport run_heuristic_vs_oracle(const PhysicalNetwork& net,
                                       const VsnfCatalog& catalog,
                                       const WorkloadConfig& cfg,
                                       const OracleConfig& oracle_cfg,
                                       double tolerance) {
  OracleConfig ocfg = oracle_cfg;
  ocfg.objective = Objective::resource_cost;
  const auto& params = cfg.pess.params;
  const ArrivalStream stream = generate_stream(net, catalog, cfg);

  OverheadReport rep;
  NetworkState state(net);
  DepartureQueue departures;
  std::vector<double> th, to;

  for (std::size_t i = 0; i < stream.arrivals.size(); ++i) {
    const Arrival& a = stream.arrivals[i];
    while (!departures.empty() && departures.top().first <= a.time) {
      state.release(departures.top().second);
      departures.pop();
    }
    const ServiceRequest& req = a.request;

    if (static_cast<std::int64_t>(i) >= cfg.warmup) {
      ++rep.recorded;
      auto t0 = Clock::now();
      PessResult h = pess_select(state, req, cfg.pess);
      th.push_back(seconds_since(t0));
      t0 = Clock::now();
      OracleResult o = exact_embed(state, req, ocfg, params);
      to.push_back(seconds_since(t0));

      if (h && !check_embedding(state, h.solution->embedding, req, params.delta,
                                cfg.pess.recheck))
        ++rep.heuristic_infeasible;

      if (o.status == OracleStatus::budget_exceeded) {
        ++rep.budget_skipped;
      } else if (!h && !o) {
        ++rep.both_rejected;
      } else if (!h) {
        ++rep.heuristic_only_rejected;
      } else if (!o) {
        ++rep.oracle_only_rejected;
      } else {
        ++rep.compared;
        const double ch = h.solution->cost;
        const double co = o.cost;
        if (ch < co - tolerance * std::max(std::abs(co), 1e-300))
          ++rep.dominance_violations;
        rep.overheads.push_back(co > 0 ? (ch - co) / co : 0.0);
      }

      if (h) {
        const ServiceId sid =
            register_operational(state, h.solution->embedding, req, params.delta);
        departures.emplace(a.time + a.holding, sid);
      }
    } else {
      PessResult h = pess_embed(state, req, cfg.pess);
      if (h) departures.emplace(a.time + a.holding, *h.service);
    }
  }

  if (!rep.overheads.empty()) {
    std::vector<double> sorted = rep.overheads;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    rep.median_overhead =
        n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    rep.mean_overhead =
        std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
    rep.max_overhead = sorted.back();
  }
  rep.heuristic_time = TimingStats::from(std::move(th));
  rep.oracle_time = TimingStats::from(std::move(to));
  return rep;
}

std::vector<ScalabilityRow> run_scalability(
    const std::vector<ScalabilityPoint>& sizes, int per_size_requests,
    std::uint64_t seed, const VsnfCatalog& catalog,
    const RequestGenConfig& gen, const PessOptions& opts) {
  std::vector<ScalabilityRow> rows;
  for (const auto& point : sizes) {
    BarabasiAlbertConfig bcfg;
    bcfg.n_nodes = point.n_nodes;
    bcfg.m = point.m;
    bcfg.seed = seed;
    const PhysicalNetwork net = generate_barabasi_albert(bcfg);
    NetworkState state(net);

    RequestGenConfig rcfg = gen;
    rcfg.ep2_count = 1;
    const RequestGenerator generator(net, catalog, rcfg);

    ScalabilityRow row;
    row.point = point;
    double total = 0.0;
    for (int j = 0; j < per_size_requests; ++j) {
      std::mt19937_64 body(seed + static_cast<std::uint64_t>(j));
      ServiceRequest req = generator.generate(body);

      // EP2 sets are nested across sizes: a prefix of one shuffle per request.
      std::vector<NodeId> pool;
      for (NodeId n = 0; n < static_cast<NodeId>(net.num_nodes()); ++n)
        if (n != req.ep1 && n != req.ep2_set.front()) pool.push_back(n);
      std::mt19937_64 pick(seed ^ (0x9E3779B97F4A7C15ULL * (j + 1)));
      std::shuffle(pool.begin(), pool.end(), pick);
      const auto extra = std::min<std::size_t>(
          static_cast<std::size_t>(std::max(point.ep2_size - 1, 0)), pool.size());
      req.ep2_set.insert(req.ep2_set.end(), pool.begin(), pool.begin() + extra);
      std::sort(req.ep2_set.begin(), req.ep2_set.end());

      const auto t0 = Clock::now();
      const PessResult r = pess_embed(state, req, opts);
      const double dt = seconds_since(t0);
      total += dt;
      row.max_seconds = std::max(row.max_seconds, dt);
      ++row.requests;
      if (r) ++row.accepted;
    }
    row.mean_seconds = row.requests > 0 ? total / row.requests : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pess
