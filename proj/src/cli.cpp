#include "pess/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "pess/heuristic.hpp"
#include "pess/io.hpp"
#include "pess/oracle.hpp"
#include "pess/simulator.hpp"

namespace pess {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct GlobalOptions {
  std::uint64_t seed = 1;
  double delta = 1e-6;
  double alpha = 1.0;
  std::string out_dir = ".";
  int threads = 0;
  std::string config_file;
};

struct TopologyOptions {
  std::string kind = "ba";
  int nodes = 20;
  int attachment_m = 2;
  std::string file;
};

struct SolverOptions {
  bool descending = false;
  bool expand_all = false;
  std::string recheck = "guard";
};

struct WorkloadOptions {
  std::vector<double> loads{1000.0};
  std::int64_t requests = 100'000;
  std::int64_t warmup = 80'000;
  double holding = 1.0;
  int seeds = 1;
  int max_chains = 5;
  int max_vsnfs = 3;
  double region_bind = 0.0;
  int ep2_count = 0;
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Progressive embedding of security service chains", "pess"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", g_.seed, "Random seed")->capture_default_str();
    app.add_option("--delta", g_.delta, "Cost regulariser δ")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--alpha", g_.alpha, "CPU cost weight α")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--out", g_.out_dir, "Output directory")->capture_default_str();
    app.add_option("--threads", g_.threads, "Worker threads (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--config", g_.config_file,
                   "JSON file with workload / request_gen sections")
        ->check(CLI::ExistingFile);

    std::string topo_file, request_file, embedding_out, objective = "resource-cost";
    int max_path_len = 0;
    std::int64_t max_enum = OracleConfig{}.max_enumeration;

    auto* embed = app.add_subcommand("embed", "Embed one request with the heuristic");
    embed->add_option("--topology-file", topo_file, "Topology document")
        ->required()
        ->check(CLI::ExistingFile);
    embed->add_option("--request", request_file, "Request document")
        ->required()
        ->check(CLI::ExistingFile);
    embed->add_option("--output", embedding_out, "Write the result document here");
    add_solver_flags(embed);

    auto* oracle = app.add_subcommand("oracle", "Solve one request exhaustively");
    oracle->add_option("--topology-file", topo_file, "Topology document")
        ->required()
        ->check(CLI::ExistingFile);
    oracle->add_option("--request", request_file, "Request document")
        ->required()
        ->check(CLI::ExistingFile);
    oracle->add_option("--output", embedding_out, "Write the result document here");
    oracle->add_option("--objective", objective)
        ->check(CLI::IsMember({"resource-cost", "active-nodes", "min-latency"}))
        ->capture_default_str();
    oracle->add_option("--max-path-len", max_path_len, "Hop bound (0 = |N|-1)")
        ->check(CLI::NonNegativeNumber);
    oracle->add_option("--max-enumeration", max_enum)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::string solver = "pess";
    auto* simulate = app.add_subcommand("simulate", "Poisson workload, one solver");
    add_topology_flags(simulate);
    add_workload_flags(simulate);
    add_solver_flags(simulate);
    simulate->add_option("--solver", solver)
        ->check(CLI::IsMember({"pess", "baseline"}))
        ->capture_default_str();

    auto* compare = app.add_subcommand("compare", "PESS against the baseline on twin networks");
    add_topology_flags(compare);
    add_workload_flags(compare);
    add_solver_flags(compare);

    auto* gap = app.add_subcommand("oracle-gap", "Heuristic cost overhead over the oracle");
    add_topology_flags(gap);
    add_workload_flags(gap);
    add_solver_flags(gap);
    gap->add_option("--max-path-len", max_path_len)->check(CLI::NonNegativeNumber);
    gap->add_option("--max-enumeration", max_enum)->check(CLI::PositiveNumber);

    std::vector<std::string> sizes{"1000:5"};
    std::vector<double> ep2{1, 0.1, 0.25};
    int per_size = 20;
    auto* scal = app.add_subcommand("scalability", "Embedding time against graph and EP2 size");
    scal->add_option("--sizes", sizes, "Graph sizes as NODES:M")->delimiter(',');
    scal->add_option("--ep2", ep2, "EP2 sizes; values below 1 are fractions of |N|")
        ->delimiter(',');
    scal->add_option("--per-size", per_size, "Requests per point")
        ->check(CLI::PositiveNumber);
    add_solver_flags(scal);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out_, err_);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out_, err_);
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n";
      const CLI::App* sub = app.get_subcommands().empty()
                                ? &app
                                : app.get_subcommands().front();
      err_ << sub->help();
      return 1;
    }

#ifdef _OPENMP
    if (g_.threads > 0) omp_set_num_threads(g_.threads);
#endif

    try {
      if (*embed) return cmd_embed(topo_file, request_file, embedding_out);
      if (*oracle) {
        OracleConfig ocfg;
        ocfg.objective = *parse_objective(objective);
        ocfg.max_path_len = max_path_len;
        ocfg.max_enumeration = max_enum;
        ocfg.recheck = solver_options().recheck;
        return cmd_oracle(topo_file, request_file, embedding_out, ocfg);
      }
      if (*simulate)
        return cmd_simulate(solver == "baseline" ? Solver::baseline : Solver::pess,
                            *simulate);
      if (*compare) return cmd_compare(*compare);
      if (*gap) {
        OracleConfig ocfg;
        ocfg.max_path_len = max_path_len;
        ocfg.max_enumeration = max_enum;
        ocfg.recheck = solver_options().recheck;
        return cmd_oracle_gap(*gap, ocfg);
      }
      if (*scal) return cmd_scalability(sizes, ep2, per_size);
    } catch (const ParseError& e) {
      err_ << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return 1;
    }
    return 1;
  }

 private:
  void add_topology_flags(CLI::App* sub) {
    sub->add_option("--topology", t_.kind)
        ->check(CLI::IsMember({"ba", "file"}))
        ->capture_default_str();
    sub->add_option("--nodes", t_.nodes, "Barabási-Albert node count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--attachment-m", t_.attachment_m, "Barabási-Albert m")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--topology-file", t_.file, "Topology document")
        ->check(CLI::ExistingFile);
  }

  void add_workload_flags(CLI::App* sub) {
    sub->add_option("--loads", w_.loads, "Offered loads in Erlang")->delimiter(',');
    sub->add_option("--requests", w_.requests, "Arrivals per run")
                        ->check(CLI::PositiveNumber);
    sub->add_option("--warmup", w_.warmup, "Arrivals before statistics")
                      ->check(CLI::NonNegativeNumber);
    sub->add_option("--holding", w_.holding, "Mean holding time")
                       ->check(CLI::PositiveNumber);
    sub->add_option("--seeds", w_.seeds, "Seeds per load point (seed, seed+1, ...)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-chains", w_.max_chains)
                          ->check(CLI::PositiveNumber);
    sub->add_option("--max-vsnfs", w_.max_vsnfs)
                         ->check(CLI::NonNegativeNumber);
    sub->add_option("--region-bind-prob", w_.region_bind)
                           ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--ep2-count", w_.ep2_count)
                         ->check(CLI::NonNegativeNumber);
  }

  void add_solver_flags(CLI::App* sub) {
    sub->add_flag("--descending", s_.descending, "Scan candidates most expensive first");
    sub->add_flag("--expand-all-ep2", s_.expand_all,
                  "Expand from every reached EP2 node");
    sub->add_option("--recheck", s_.recheck, "Operational-chain check scope")
        ->check(CLI::IsMember({"guard", "full"}));
  }

  PessOptions solver_options() const {
    PessOptions o;
    o.params.alpha = g_.alpha;
    o.params.delta = g_.delta;
    o.descending_scan = s_.descending;
    o.expand_all_ep2 = s_.expand_all;
    o.recheck = s_.recheck == "full" ? RecheckScope::full : RecheckScope::guard;
    return o;
  }

  static bool given(const CLI::App& sub, const std::string& flag) {
    const CLI::Option* o = sub.get_option_no_throw(flag);
    return o && o->count() > 0;
  }

  WorkloadConfig workload(const CLI::App& sub) const {
    WorkloadConfig cfg;
    if (!g_.config_file.empty()) {
      const json doc = parse_json(read_file(g_.config_file), g_.config_file);
      if (doc.contains("workload")) update_from_json(doc["workload"], cfg);
      if (doc.contains("request_gen"))
        update_from_json(doc["request_gen"], cfg.request_gen);
    }
    if (given(sub, "--requests")) cfg.n_requests = w_.requests;
    if (given(sub, "--warmup")) cfg.warmup = w_.warmup;
    if (given(sub, "--holding")) cfg.mean_holding = w_.holding;
    if (given(sub, "--max-chains")) {
      cfg.request_gen.max_chains = w_.max_chains;
      cfg.request_gen.min_chains = std::min(cfg.request_gen.min_chains, w_.max_chains);
    }
    if (given(sub, "--max-vsnfs")) {
      cfg.request_gen.max_vsnfs = w_.max_vsnfs;
      cfg.request_gen.min_vsnfs = std::min(cfg.request_gen.min_vsnfs, w_.max_vsnfs);
    }
    if (given(sub, "--region-bind-prob")) cfg.request_gen.region_bind_probability = w_.region_bind;
    if (given(sub, "--ep2-count")) cfg.request_gen.ep2_count = w_.ep2_count;
    cfg.seed = g_.seed;
    cfg.pess = solver_options();
    if (cfg.warmup >= cfg.n_requests)
      throw ConfigError("--warmup must be smaller than --requests");
    cfg.validate();
    return cfg;
  }

  PhysicalNetwork topology() const {
    if (t_.kind == "file" || !t_.file.empty()) {
      if (t_.file.empty()) throw ConfigError("--topology file needs --topology-file");
      return load_topology(t_.file);
    }
    if (t_.attachment_m >= t_.nodes)
      throw ConfigError("--attachment-m must be smaller than --nodes");
    BarabasiAlbertConfig b;
    b.n_nodes = t_.nodes;
    b.m = t_.attachment_m;
    b.seed = g_.seed;
    return generate_barabasi_albert(b);
  }

  json topology_summary(const PhysicalNetwork& net) const {
    const bool from_file = t_.kind == "file" || !t_.file.empty();
    json j{{"kind", from_file ? "file" : "ba"}, {"nodes", net.num_nodes()}, {"links", net.num_links()}};
    if (from_file)
      j["file"] = t_.file;
    else
      j["attachment_m"] = t_.attachment_m;
    return j;
  }

  json globals_summary(const std::string& command) const {
    return {{"command", command}, {"seed", g_.seed},       {"delta", g_.delta},
            {"alpha", g_.alpha},  {"out", g_.out_dir},     {"threads", g_.threads}};
  }

  fs::path output(const std::string& name) const {
    fs::create_directories(g_.out_dir);
    return fs::path(g_.out_dir) / name;
  }

  std::vector<SweepPoint> sweep_points() const {
    std::vector<SweepPoint> points;
    for (double load : w_.loads)
      for (int s = 0; s < w_.seeds; ++s)
        points.push_back({load, g_.seed + static_cast<std::uint64_t>(s)});
    return points;
  }

  int cmd_embed(const std::string& topo_file, const std::string& request_file,
                const std::string& out_file) {
    const PhysicalNetwork net = load_topology(topo_file);
    const VsnfCatalog catalog = builtin_catalog();
    const ServiceRequest req = load_request(request_file, net, catalog);
    NetworkState state(net);
    const PessResult r = pess_embed(state, req, solver_options());
    if (!r) {
      out_ << "rejected: " << to_string(r.rejection) << "\n";
      if (r.last_failure.code != Violation::none)
        err_ << "last failure: " << to_string(r.last_failure.code) << " "
             << r.last_failure.detail << "\n";
      return 2;
    }
    json doc = embedding_to_json(r.solution->embedding, req, net);
    doc["cost"] = r.solution->cost;
    doc["chain_latencies"] = r.chain_latencies;
    out_ << "cost: " << sig6(r.solution->cost) << "\n";
    for (std::size_t c = 0; c < req.chains.size(); ++c)
      out_ << "latency " << req.chains[c].id << ": " << sig6(r.chain_latencies[c])
           << "\n";
    out_ << doc.dump(2) << "\n";
    if (!out_file.empty()) write_file_atomic(out_file, doc.dump(2) + "\n");
    return 0;
  }

  int cmd_oracle(const std::string& topo_file, const std::string& request_file,
                 const std::string& out_file, const OracleConfig& ocfg) {
    const PhysicalNetwork net = load_topology(topo_file);
    const VsnfCatalog catalog = builtin_catalog();
    const ServiceRequest req = load_request(request_file, net, catalog);
    const NetworkState state(net);
    CostParams params{g_.alpha, g_.delta};
    const OracleResult r = exact_embed(state, req, ocfg, params);
    if (!r) {
      out_ << "rejected: " << to_string(r.status) << "\n";
      return 2;
    }
    json doc = embedding_to_json(*r.embedding, req, net);
    doc["objective"] = to_string(ocfg.objective);
    doc["score"] = r.score;
    doc["cost"] = r.cost;
    doc["chain_latencies"] = r.chain_latencies;
    out_ << "objective: " << to_string(ocfg.objective) << "\n"
         << "score: " << sig6(r.score) << "\n"
         << "cost: " << sig6(r.cost) << "\n";
    out_ << doc.dump(2) << "\n";
    if (!out_file.empty()) write_file_atomic(out_file, doc.dump(2) + "\n");
    return 0;
  }

  void write_metrics(const std::vector<Metrics>& rows, json summary) const {
    std::string csv = metrics_csv_header();
    std::string timing = timing_csv_header();
    json runs = json::array();
    for (const auto& m : rows) {
      csv += metrics_csv_row(m);
      timing += timing_csv_row(m);
      runs.push_back(to_json(m));
    }
    summary["runs"] = std::move(runs);
    write_file_atomic(output("metrics.csv"), csv);
    write_file_atomic(output("timing.csv"), timing);
    write_file_atomic(output("summary.json"), summary.dump(2) + "\n");
  }

  void print_metrics(const Metrics& m) const {
    out_ << to_string(m.solver) << " load=" << sig6(m.load_erlang)
         << " seed=" << m.seed << " blocking=" << sig6(m.blocking_probability)
         << " cpu=" << sig6(m.consumed_cpu_fraction)
         << " active=" << sig6(m.active_services)
         << " latency=" << sig6(m.mean_chain_latency);
    if (m.delay_ratio_vs) out_ << " delay_ratio=" << sig6(*m.delay_ratio_vs);
    out_ << "\n";
  }

  int cmd_simulate(Solver solver, const CLI::App& sub) {
    const WorkloadConfig base = workload(sub);
    const PhysicalNetwork net = topology();
    const VsnfCatalog catalog = builtin_catalog();
    const auto points = sweep_points();
    std::vector<Metrics> rows(points.size());
    const auto n = static_cast<std::int64_t>(points.size());
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        WorkloadConfig cfg = base;
        cfg.load_erlang = points[i].load_erlang;
        cfg.seed = points[i].seed;
        rows[i] = run_simulation(net, catalog, cfg, solver);
      } catch (...) {
#pragma omp critical(pess_cli_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);

    json summary{{"config", globals_summary("simulate")}};
    summary["config"]["solver"] = to_string(solver);
    summary["config"]["loads"] = w_.loads;
    summary["config"]["seeds"] = w_.seeds;
    summary["config"]["topology"] = topology_summary(net);
    summary["config"]["workload"] = to_json(base);
    for (const auto& m : rows) print_metrics(m);
    write_metrics(rows, std::move(summary));
    return 0;
  }

  int cmd_compare(const CLI::App& sub) {
    const WorkloadConfig base = workload(sub);
    const PhysicalNetwork net = topology();
    const VsnfCatalog catalog = builtin_catalog();
    const auto results = run_sweep(net, catalog, base, sweep_points());
    std::vector<Metrics> rows;
    for (const auto& r : results) {
      rows.push_back(r.pess);
      rows.push_back(r.baseline);
      print_metrics(r.pess);
      print_metrics(r.baseline);
    }
    json summary{{"config", globals_summary("compare")}};
    summary["config"]["loads"] = w_.loads;
    summary["config"]["seeds"] = w_.seeds;
    summary["config"]["topology"] = topology_summary(net);
    summary["config"]["workload"] = to_json(base);
    write_metrics(rows, std::move(summary));
    return 0;
  }

  int cmd_oracle_gap(const CLI::App& sub, const OracleConfig& ocfg) {
    WorkloadConfig cfg = workload(sub);
    cfg.load_erlang = w_.loads.front();
    const PhysicalNetwork net = topology();
    const VsnfCatalog catalog = builtin_catalog();
    const OverheadReport rep = run_heuristic_vs_oracle(net, catalog, cfg, ocfg);

    std::string csv = "# pess-oracle-gap-csv v1\nindex,overhead\n";
    for (std::size_t i = 0; i < rep.overheads.size(); ++i)
      csv += std::to_string(i) + "," + format_double(rep.overheads[i]) + "\n";
    json summary{{"config", globals_summary("oracle-gap")}};
    summary["config"]["topology"] = topology_summary(net);
    summary["config"]["workload"] = to_json(cfg);
    summary["config"]["oracle"] = {{"max_path_len", ocfg.max_path_len},
                                   {"max_enumeration", ocfg.max_enumeration}};
    summary["report"] = to_json(rep);
    summary["heuristic_time"] = to_json(rep.heuristic_time);
    summary["oracle_time"] = to_json(rep.oracle_time);
    write_file_atomic(output("oracle_gap.csv"), csv);
    write_file_atomic(output("summary.json"), summary.dump(2) + "\n");

    out_ << "compared " << rep.compared << " of " << rep.recorded
         << " (budget skipped " << rep.budget_skipped << ")\n"
         << "overhead median " << sig6(rep.median_overhead) << " mean "
         << sig6(rep.mean_overhead) << " max " << sig6(rep.max_overhead) << "\n"
         << "dominance violations " << rep.dominance_violations
         << ", infeasible acceptances " << rep.heuristic_infeasible << "\n";
    return rep.dominance_violations == 0 && rep.heuristic_infeasible == 0 ? 0 : 1;
  }

  int cmd_scalability(const std::vector<std::string>& sizes,
                      const std::vector<double>& ep2, int per_size) {
    std::vector<ScalabilityPoint> points;
    for (const auto& s : sizes) {
      const auto colon = s.find(':');
      if (colon == std::string::npos)
        throw ConfigError("--sizes entries look like NODES:M, got '" + s + "'");
      const int n = std::stoi(s.substr(0, colon));
      const int m = std::stoi(s.substr(colon + 1));
      if (m < 1 || m >= n) throw ConfigError("invalid size '" + s + "'");
      for (double e : ep2) {
        int k = e < 1.0 ? static_cast<int>(std::lround(e * n)) : static_cast<int>(e);
        points.push_back({n, m, std::max(k, 1)});
      }
    }
    const auto rows = run_scalability(points, per_size, g_.seed, builtin_catalog(),
                                      RequestGenConfig{}, solver_options());
    std::string csv = "# pess-scalability-csv v1\nnodes,m,ep2,requests,accepted,mean_s,max_s\n";
    for (const auto& r : rows) {
      csv += std::to_string(r.point.n_nodes) + "," + std::to_string(r.point.m) + "," +
             std::to_string(r.point.ep2_size) + "," + std::to_string(r.requests) +
             "," + std::to_string(r.accepted) + "," + format_double(r.mean_seconds) +
             "," + format_double(r.max_seconds) + "\n";
      out_ << "nodes=" << r.point.n_nodes << " m=" << r.point.m
           << " ep2=" << r.point.ep2_size << " mean_ms=" << sig6(r.mean_seconds * 1e3)
           << "\n";
    }
    write_file_atomic(output("scalability.csv"), csv);
    return 0;
  }

  std::ostream& out_;
  std::ostream& err_;
  GlobalOptions g_;
  TopologyOptions t_;
  SolverOptions s_;
  WorkloadOptions w_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  return Cli(out, err).run(args);
}

}  // namespace pess
