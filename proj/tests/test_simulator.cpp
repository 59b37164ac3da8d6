#include <set>

#include "doctest.h"
#include "pess/simulator.hpp"
#include "support.hpp"

using namespace pess;
namespace t = pess::testing;

namespace {

PhysicalNetwork small_ba() {
  BarabasiAlbertConfig b;
  b.n_nodes = 20;
  b.m = 2;
  b.seed = 3;
  const auto base = generate_barabasi_albert(b);
  return PhysicalNetwork(base.nodes(), base.links(), {{"border", {0, 1, 2}}});
}

WorkloadConfig quick(double load, std::uint64_t seed) {
  WorkloadConfig cfg;
  cfg.load_erlang = load;
  cfg.n_requests = 1500;
  cfg.warmup = 500;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("workload validation") {
  WorkloadConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.warmup = cfg.n_requests;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.load_erlang = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.mean_holding = -1;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("timing stats") {
  const auto s = TimingStats::from({4, 1, 3, 2});
  CHECK(s.samples == 4);
  CHECK(s.mean == 2.5);
  CHECK(s.max == 4);
  CHECK(s.p50 >= 2);
  CHECK(s.p50 <= 3);
  CHECK(TimingStats::from({}).samples == 0);
}

TEST_CASE("streams are reproducible and seed-sensitive") {
  const auto net = small_ba();
  const auto cat = builtin_catalog();
  const auto a = generate_stream(net, cat, quick(100, 5));
  const auto b = generate_stream(net, cat, quick(100, 5));
  const auto c = generate_stream(net, cat, quick(100, 6));
  REQUIRE(a.arrivals.size() == 1500);
  CHECK(a.fingerprint == b.fingerprint);
  CHECK(a.fingerprint == stream_fingerprint(a.arrivals));
  CHECK(a.fingerprint != c.fingerprint);
  for (std::size_t i = 1; i < a.arrivals.size(); ++i)
    CHECK(a.arrivals[i].time >= a.arrivals[i - 1].time);
  double mean_gap = a.arrivals.back().time / static_cast<double>(a.arrivals.size());
  CHECK(mean_gap == doctest::Approx(1.0 / 100).epsilon(0.15));
}

TEST_CASE("simulation is deterministic and conserves requests") {
  const auto net = small_ba();
  const auto cat = builtin_catalog();
  const auto cfg = quick(300, 2);
  const auto m1 = run_simulation(net, cat, cfg, Solver::pess);
  const auto m2 = run_simulation(net, cat, cfg, Solver::pess);
  CHECK(m1.offered == 1000);
  CHECK(m1.offered == m1.accepted + m1.rejected);
  CHECK(m1.rejected == m1.rejected_no_route + m1.rejected_infeasible);
  CHECK(m1.accepted == m2.accepted);
  CHECK(m1.consumed_cpu_fraction == m2.consumed_cpu_fraction);
  CHECK(m1.mean_chain_latency == m2.mean_chain_latency);
  CHECK(m1.stream_fingerprint == m2.stream_fingerprint);
  CHECK(m1.blocking_probability ==
        doctest::Approx(static_cast<double>(m1.rejected) / m1.offered));
  CHECK(m1.consumed_cpu_fraction > 0);
  CHECK(m1.consumed_cpu_fraction < 1);
  CHECK(m1.embed_time.samples == 1000);
  CHECK(m1.consumed_cpu_by_region.count("border") == 1);
}

TEST_CASE("light load blocks nothing") {
  const auto net = small_ba();
  const auto cat = builtin_catalog();
  auto cfg = quick(1, 4);
  cfg.request_gen.latency_menu = {1.0};
  const auto m = run_simulation(net, cat, cfg, Solver::pess);
  CHECK(m.rejected == 0);
  CHECK(m.blocking_probability == 0.0);
}

TEST_CASE("observer sees a consistent state after every event") {
  const auto net = small_ba();
  const auto cat = builtin_catalog();
  auto cfg = quick(400, 9);
  cfg.n_requests = 600;
  cfg.warmup = 100;
  std::set<ServiceId> live;
  std::int64_t arrivals = 0, departures = 0, bad = 0;
  run_simulation(net, cat, cfg, Solver::pess, [&](const SimEvent& e, const NetworkState& s) {
    if (e.kind == SimEvent::Kind::arrival) {
      ++arrivals;
      REQUIRE(e.request);
      REQUIRE(e.result);
      if (e.service) {
        live.insert(*e.service);
        if (!e.result->solution) ++bad;
      } else if (e.result->solution) {
        ++bad;
      }
    } else {
      ++departures;
      REQUIRE(e.service);
      live.erase(*e.service);
    }
    if (s.residual_gamma() != t::rebuilt_gamma(s)) ++bad;
    if (s.residual_beta() != t::rebuilt_beta(s)) ++bad;
    if (static_cast<std::size_t>(s.active_services()) != live.size()) ++bad;
  });
  CHECK(arrivals == 600);
  CHECK(departures > 0);
  CHECK(bad == 0);
}

TEST_CASE("twin comparison replays one stream") {
  const auto net = small_ba();
  const auto cat = builtin_catalog();
  const auto tw = run_twin_comparison(net, cat, quick(300, 1));
  CHECK(tw.pess.stream_fingerprint == tw.baseline.stream_fingerprint);
  CHECK(tw.pess.offered == tw.baseline.offered);
  CHECK(tw.pess.solver == Solver::pess);
  CHECK(tw.baseline.solver == Solver::baseline);
  REQUIRE(tw.baseline.delay_ratio_vs);
  CHECK(*tw.baseline.delay_ratio_vs == tw.delay_ratio);
  CHECK(tw.delay_ratio ==
        doctest::Approx(tw.baseline.mean_chain_latency / tw.pess.mean_chain_latency));
}

TEST_CASE("chains without VSNFs give equal latency for both solvers") {
  const auto net = small_ba();
  const auto cat = builtin_catalog();
  auto cfg = quick(50, 12);
  cfg.request_gen.min_vsnfs = cfg.request_gen.max_vsnfs = 0;
  cfg.request_gen.min_chains = cfg.request_gen.max_chains = 1;
  cfg.request_gen.border_bias = 0;
  const auto tw = run_twin_comparison(net, cat, cfg);
  CHECK(tw.pess.accepted == tw.baseline.accepted);
  CHECK(tw.delay_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parallel sweep matches the serial sweep") {
  const auto net = small_ba();
  const auto cat = builtin_catalog();
  auto base = quick(100, 1);
  base.n_requests = 400;
  base.warmup = 100;
  const std::vector<SweepPoint> pts{{100, 1}, {400, 1}, {100, 2}};
  const auto par = run_sweep(net, cat, base, pts);
  const auto ser = run_sweep_serial(net, cat, base, pts);
  REQUIRE(par.size() == 3);
  REQUIRE(ser.size() == 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(par[i].pess.load_erlang == pts[i].load_erlang);
    CHECK(par[i].pess.seed == pts[i].seed);
    CHECK(par[i].pess.accepted == ser[i].pess.accepted);
    CHECK(par[i].baseline.accepted == ser[i].baseline.accepted);
    CHECK(par[i].pess.consumed_cpu_fraction == ser[i].pess.consumed_cpu_fraction);
    CHECK(par[i].delay_ratio == ser[i].delay_ratio);
  }
}

TEST_CASE("heuristic versus oracle on a small network") {
  BarabasiAlbertConfig b;
  b.n_nodes = 7;
  b.m = 2;
  b.node_template.gamma_nominal = 5'000'000'000;
  b.link_bandwidth = 1'000'000'000;
  const auto net = generate_barabasi_albert(b);
  WorkloadConfig cfg;
  cfg.load_erlang = 5;
  cfg.n_requests = 60;
  cfg.warmup = 20;
  cfg.request_gen.max_chains = 2;
  cfg.request_gen.max_vsnfs = 2;
  const auto rep = run_heuristic_vs_oracle(net, builtin_catalog(), cfg, {});
  CHECK(rep.recorded == 40);
  CHECK(rep.recorded == rep.compared + rep.budget_skipped + rep.both_rejected +
                            rep.heuristic_only_rejected + rep.oracle_only_rejected);
  CHECK(rep.dominance_violations == 0);
  CHECK(rep.heuristic_infeasible == 0);
  CHECK(rep.oracle_only_rejected == 0);
  CHECK(static_cast<std::int64_t>(rep.overheads.size()) == rep.compared);
  for (double o : rep.overheads) CHECK(o >= -1e-9);
  CHECK(rep.max_overhead >= rep.median_overhead);
}

TEST_CASE("scalability rows") {
  const auto rows = run_scalability({{60, 2, 1}, {60, 2, 5}}, 5, 3, builtin_catalog());
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.requests == 5);
    CHECK(r.accepted <= r.requests);
    CHECK(r.mean_seconds > 0);
    CHECK(r.max_seconds >= r.mean_seconds);
  }
  CHECK(rows[1].point.ep2_size == 5);
}
