#include <benchmark/benchmark.h>

#include <random>

#include "pess/oracle.hpp"
#include "pess/simulator.hpp"

using namespace pess;

namespace {

struct OracleCase {
  PhysicalNetwork net;
  ServiceRequest req;
};

OracleCase oracle_case() {
  BarabasiAlbertConfig b;
  b.n_nodes = 7;
  b.m = 2;
  b.seed = 4;
  auto net = generate_barabasi_albert(b);
  RequestGenConfig g;
  g.min_chains = g.max_chains = 2;
  g.min_vsnfs = g.max_vsnfs = 1;
  const auto cat = builtin_catalog();
  std::mt19937_64 rng(9);
  auto req = RequestGenerator(net, cat, g).generate(rng);
  return {std::move(net), std::move(req)};
}

template <class Solve>
void run_oracle(benchmark::State& st, Solve solve) {
  const auto c = oracle_case();
  const NetworkState s(c.net);
  OracleConfig cfg;
  for (auto _ : st) {
    auto r = solve(s, c.req, cfg, CostParams{});
    benchmark::DoNotOptimize(r.score);
    st.counters["combinations"] = static_cast<double>(r.combinations);
    st.counters["optimal"] = r.status == OracleStatus::optimal;
  }
}

void BM_OracleSerial(benchmark::State& st) { run_oracle(st, exact_embed_serial); }
void BM_OracleParallel(benchmark::State& st) { run_oracle(st, exact_embed); }

template <class Sweep>
void run_sweep_bench(benchmark::State& st, Sweep sweep) {
  BarabasiAlbertConfig b;
  b.n_nodes = 20;
  b.m = 2;
  const auto net = generate_barabasi_albert(b);
  const auto cat = builtin_catalog();
  WorkloadConfig base;
  base.n_requests = 2000;
  base.warmup = 1000;
  const std::vector<SweepPoint> points{{200, 1}, {400, 1}, {200, 2}, {400, 2}};
  for (auto _ : st) {
    auto r = sweep(net, cat, base, points);
    benchmark::DoNotOptimize(r.front().delay_ratio);
  }
}

void BM_SweepSerial(benchmark::State& st) { run_sweep_bench(st, run_sweep_serial); }
void BM_SweepParallel(benchmark::State& st) { run_sweep_bench(st, run_sweep); }

}  // namespace

BENCHMARK(BM_OracleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
