#include "pess/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace pess {

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::resource_cost: return "resource-cost";
    case Objective::active_nodes: return "active-nodes";
    case Objective::min_latency: return "min-latency";
  }
  return "unknown";
}

std::optional<Objective> parse_objective(std::string_view s) {
  for (auto o : {Objective::resource_cost, Objective::active_nodes,
                 Objective::min_latency})
    if (to_string(o) == s) return o;
  return std::nullopt;
}

std::string_view to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::optimal: return "optimal";
    case OracleStatus::infeasible: return "infeasible";
    case OracleStatus::budget_exceeded: return "budget-exceeded";
  }
  return "unknown";
}

void OracleConfig::validate() const {
  if (max_path_len < 0)
    throw ConfigError("max_path_len must be >= 1 (0 selects |N|-1)");
  if (max_enumeration <= 0)
    throw ConfigError("max_enumeration must be positive");
}

int active_node_count(const Embedding& emb) {
  std::set<NodeId> active;
  for (const auto& ce : emb.chains)
    for (std::size_t i = 1; i + 1 < ce.hosts.size(); ++i)
      active.insert(ce.hosts[i]);
  return static_cast<int>(active.size());
}

double objective_value(const Embedding& emb, const NetworkState& state,
                       const ServiceRequest& req, Objective objective,
                       const CostParams& params) {
  switch (objective) {
    case Objective::resource_cost:
      return embedding_cost(state, emb, req, params);
    case Objective::active_nodes:
      return active_node_count(emb);
    case Objective::min_latency: {
      const NodeLoad load = request_demand(req, emb).cpu;
      double total = 0.0;
      for (std::size_t c = 0; c < req.chains.size(); ++c)
        total += chain_latency(req.chains[c], emb.chains[c], state, load,
                               params.delta);
      return total;
    }
  }
  return 0.0;
}

namespace {

using Count = std::int64_t;

Count saturating_mul(Count a, Count b, Count cap) {
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap + 1;
  return std::min(a * b, cap + 1);
}

using Route = std::vector<ArcId>;

// Simple directed paths between every ordered pair of a node subset.
class PathCache {
 public:
  PathCache(const PhysicalNetwork& net, int hop_bound, Count cap)
      : net_(&net), hop_bound_(hop_bound), cap_(cap) {}

  bool build(const std::vector<NodeId>& endpoints) {
    std::vector<char> wanted(net_->num_nodes(), 0);
    for (NodeId n : endpoints) wanted[n] = 1;
    for (NodeId s : endpoints) {
      paths_[{s, s}] = {Route{}};
      std::vector<char> visited(net_->num_nodes(), 0);
      Route stack;
      visited[s] = 1;
      if (!dfs(s, s, wanted, visited, stack)) return false;
    }
    return true;
  }

  const std::vector<Route>& get(NodeId from, NodeId to) const {
    static const std::vector<Route> none;
    auto it = paths_.find({from, to});
    return it == paths_.end() ? none : it->second;
  }

 private:
  bool dfs(NodeId source, NodeId at, const std::vector<char>& wanted,
           std::vector<char>& visited, Route& stack) {
    if (static_cast<int>(stack.size()) >= hop_bound_) return true;
    for (ArcId a : net_->out_arcs(at)) {
      const NodeId next = net_->arc(a).head;
      if (visited[next]) continue;
      stack.push_back(a);
      if (wanted[next]) {
        paths_[{source, next}].push_back(stack);
        if (++stored_ > cap_) return false;
      }
      visited[next] = 1;
      const bool ok = dfs(source, next, wanted, visited, stack);
      visited[next] = 0;
      stack.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  const PhysicalNetwork* net_;
  int hop_bound_;
  Count cap_;
  Count stored_ = 0;
  std::map<std::pair<NodeId, NodeId>, std::vector<Route>> paths_;
};

struct ChainOption {
  ChainEmbedding embedding;
  ArcLoad load;
};

struct Candidate {
  double score = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> code;
  Embedding embedding;
  bool found = false;

  bool beats(const Candidate& other) const {
    if (!found) return false;
    if (!other.found) return true;
    if (score != other.score) return score < other.score;
    return code < other.code;
  }
};

std::vector<std::int64_t> canonical_code(const Embedding& emb) {
  std::vector<std::int64_t> code;
  for (const auto& ce : emb.chains) {
    code.insert(code.end(), ce.hosts.begin(), ce.hosts.end());
    code.push_back(-1);
    for (const auto& r : ce.routes) {
      code.insert(code.end(), r.begin(), r.end());
      code.push_back(-2);
    }
    code.push_back(-3);
  }
  return code;
}

class Search {
 public:
  Search(const NetworkState& state, const ServiceRequest& req,
         const OracleConfig& cfg, const CostParams& params)
      : state_(state),
        net_(state.network()),
        req_(req),
        cfg_(cfg),
        params_(params),
        paths_(net_,
               cfg.max_path_len > 0 ? cfg.max_path_len
                                    : static_cast<int>(net_.num_nodes()) - 1,
               cfg.max_enumeration) {}

  OracleResult run(bool parallel) {
    cfg_.validate();
    OracleResult result;
    build_units();

    Count placements = 1;
    for (const auto& u : units_)
      placements = saturating_mul(placements, static_cast<Count>(u.allowed.size()),
                                  cfg_.max_enumeration);
    for (std::size_t c = 0; c < req_.chains.size(); ++c)
      placements = saturating_mul(placements,
                                  static_cast<Count>(req_.ep2_set.size()),
                                  cfg_.max_enumeration);
    result.placements = placements;
    if (placements > cfg_.max_enumeration) {
      result.status = OracleStatus::budget_exceeded;
      return result;
    }
    if (placements == 0) return result;

    std::set<NodeId> endpoints{req_.ep1};
    endpoints.insert(req_.ep2_set.begin(), req_.ep2_set.end());
    for (const auto& u : units_) endpoints.insert(u.allowed.begin(), u.allowed.end());
    if (!paths_.build({endpoints.begin(), endpoints.end()})) {
      result.status = OracleStatus::budget_exceeded;
      return result;
    }

    // Pass 1: size of the pruned space, independent of visiting order.
    std::vector<Count> counts(static_cast<std::size_t>(placements), 0);
    Count total = 0;
    bool overflow = false;
#pragma omp parallel for schedule(dynamic) reduction(+ : total) \
    reduction(|| : overflow) if (parallel)
    for (Count p = 0; p < placements; ++p) {
      std::vector<std::vector<ChainOption>> options;
      const Count n = chain_options(p, options);
      counts[p] = n;
      total += std::min(n, cfg_.max_enumeration + 1);
      overflow = overflow || n > cfg_.max_enumeration;
    }
    result.combinations = std::min(total, cfg_.max_enumeration + 1);
    if (overflow || total > cfg_.max_enumeration) {
      result.status = OracleStatus::budget_exceeded;
      return result;
    }

    // Pass 2: score every combination.
    Candidate best;
    std::vector<double> scores;
#pragma omp parallel if (parallel)
    {
      Candidate local;
      std::vector<double> local_scores;
#pragma omp for schedule(dynamic)
      for (Count p = 0; p < placements; ++p) {
        if (counts[p] == 0) continue;
        std::vector<std::vector<ChainOption>> options;
        chain_options(p, options);
        combine(options, local, local_scores);
      }
#pragma omp critical(pess_oracle_merge)
      {
        if (local.beats(best)) best = std::move(local);
        scores.insert(scores.end(), local_scores.begin(), local_scores.end());
      }
    }

    if (!best.found) return result;
    if (auto v = check_embedding(state_, best.embedding, req_, params_.delta,
                                 cfg_.recheck);
        !v)
      throw std::logic_error("oracle produced an invalid embedding: " +
                             std::string(to_string(v.code)) + " " + v.detail);

    std::sort(scores.begin(), scores.end());
    result.scores = std::move(scores);
    result.status = OracleStatus::optimal;
    result.score = best.score;
    result.cost = embedding_cost(state_, best.embedding, req_, params_);
    const NodeLoad load = request_demand(req_, best.embedding).cpu;
    for (std::size_t c = 0; c < req_.chains.size(); ++c)
      result.chain_latencies.push_back(
          chain_latency(req_.chains[c], best.embedding.chains[c], state_, load,
                        params_.delta));
    result.embedding = std::move(best.embedding);
    return result;
  }

 private:
  struct Unit {
    std::vector<VsnfRef> members;
    std::vector<NodeId> allowed;
  };

  void build_units() {
    std::vector<std::vector<VsnfRef>> groups = req_.stateful_groups;
    std::set<VsnfRef> grouped;
    for (const auto& g : groups) grouped.insert(g.begin(), g.end());
    for (std::size_t c = 0; c < req_.chains.size(); ++c)
      for (std::size_t p = 0; p < req_.chains[c].vsnfs.size(); ++p)
        if (!grouped.count({c, p})) groups.push_back({{c, p}});

    for (auto& members : groups) {
      Unit u;
      for (NodeId n = 0; n < static_cast<NodeId>(net_.num_nodes()); ++n) {
        if (req_.is_veto(n)) continue;
        bool ok = true;
        for (const auto& ref : members) {
          const auto& v = req_.chains[ref.chain].vsnfs[ref.position];
          if (!v.region) continue;
          switch (v.region->kind) {
            case RegionBinding::Kind::ep1: ok = ok && n == req_.ep1; break;
            case RegionBinding::Kind::ep2: ok = ok && req_.in_ep2(n); break;
            case RegionBinding::Kind::named:
              ok = ok && net_.in_region(v.region->name, n);
              break;
          }
        }
        if (ok) u.allowed.push_back(n);
      }
      u.members = std::move(members);
      units_.push_back(std::move(u));
    }
  }

  // Decodes placement p and fills the latency- and bandwidth-feasible route
  // options of every chain. Returns the number of chain combinations.
  Count chain_options(Count p, std::vector<std::vector<ChainOption>>& out) const {
    std::vector<std::vector<NodeId>> host(req_.chains.size());
    for (std::size_t c = 0; c < req_.chains.size(); ++c)
      host[c].resize(req_.chains[c].vsnfs.size());
    for (const auto& u : units_) {
      const auto k = static_cast<Count>(u.allowed.size());
      const NodeId h = u.allowed[static_cast<std::size_t>(p % k)];
      p /= k;
      for (const auto& ref : u.members) host[ref.chain][ref.position] = h;
    }
    std::vector<NodeId> remote(req_.chains.size());
    const auto n_ep2 = static_cast<Count>(req_.ep2_set.size());
    for (auto& r : remote) {
      r = req_.ep2_set[static_cast<std::size_t>(p % n_ep2)];
      p /= n_ep2;
    }

    ResourceDemand demand;
    for (std::size_t c = 0; c < req_.chains.size(); ++c)
      for (std::size_t i = 0; i < host[c].size(); ++i)
        demand.cpu.add(host[c][i],
                       cpu_demand(req_.chains[c].vsnfs[i], req_.chains[c]));
    if (!check_capacity(state_, demand)) return 0;
    if (!recheck_operational(state_, demand, params_.delta, cfg_.recheck))
      return 0;

    out.assign(req_.chains.size(), {});
    Count total = 1;
    for (std::size_t c = 0; c < req_.chains.size(); ++c) {
      const auto& chain = req_.chains[c];
      const bool down = chain.direction == Direction::downstream;
      ChainEmbedding ce;
      ce.hosts.push_back(down ? req_.ep1 : remote[c]);
      ce.hosts.insert(ce.hosts.end(), host[c].begin(), host[c].end());
      ce.hosts.push_back(down ? remote[c] : req_.ep1);

      std::vector<const std::vector<Route>*> segments;
      Count raw = 1;
      for (std::size_t s = 0; s + 1 < ce.hosts.size(); ++s) {
        segments.push_back(&paths_.get(ce.hosts[s], ce.hosts[s + 1]));
        raw = saturating_mul(raw, static_cast<Count>(segments.back()->size()),
                             cfg_.max_enumeration);
      }
      if (raw > cfg_.max_enumeration) return cfg_.max_enumeration + 1;
      ce.routes.resize(segments.size());

      const Bandwidth bw = bandwidth_demand(chain);
      for (Count t = 0; t < raw; ++t) {
        Count rest = t;
        for (std::size_t s = 0; s < segments.size(); ++s) {
          const auto k = static_cast<Count>(segments[s]->size());
          ce.routes[s] = (*segments[s])[static_cast<std::size_t>(rest % k)];
          rest /= k;
        }
        if (chain_latency(chain, ce, state_, demand.cpu, params_.delta) >
            chain.lambda_max)
          continue;
        ChainOption opt{ce, {}};
        for (const auto& r : ce.routes)
          for (ArcId a : r) opt.load.add(a, bw);
        bool fits = true;
        for (const auto& [a, v] : opt.load.entries())
          fits = fits && v <= state_.residual_beta(a);
        if (fits) out[c].push_back(std::move(opt));
      }
      total = saturating_mul(total, static_cast<Count>(out[c].size()),
                             cfg_.max_enumeration);
    }
    return total;
  }

  void combine(const std::vector<std::vector<ChainOption>>& options,
               Candidate& best, std::vector<double>& scores) const {
    Count n = 1;
    for (const auto& o : options) n *= static_cast<Count>(o.size());
    for (Count t = 0; t < n; ++t) {
      Count rest = t;
      Embedding emb;
      ArcLoad load;
      for (const auto& o : options) {
        const auto k = static_cast<Count>(o.size());
        const auto& opt = o[static_cast<std::size_t>(rest % k)];
        rest /= k;
        emb.chains.push_back(opt.embedding);
        for (const auto& [a, v] : opt.load.entries()) load.add(a, v);
      }
      bool fits = true;
      for (const auto& [a, v] : load.entries())
        fits = fits && v <= state_.residual_beta(a);
      if (!fits) continue;

      Candidate cand;
      cand.found = true;
      cand.score = objective_value(emb, state_, req_, cfg_.objective, params_);
      if (cfg_.record_scores) scores.push_back(cand.score);
      if (best.found && cand.score > best.score) continue;
      cand.code = canonical_code(emb);
      if (!cand.beats(best)) continue;
      cand.embedding = std::move(emb);
      best = std::move(cand);
    }
  }

  const NetworkState& state_;
  const PhysicalNetwork& net_;
  const ServiceRequest& req_;
  OracleConfig cfg_;
  CostParams params_;
  PathCache paths_;
  std::vector<Unit> units_;
};

}  // namespace

OracleResult exact_embed(const NetworkState& state, const ServiceRequest& req,
                         const OracleConfig& cfg, const CostParams& params) {
  return Search(state, req, cfg, params).run(true);
}

OracleResult exact_embed_serial(const NetworkState& state,
                                const ServiceRequest& req,
                                const OracleConfig& cfg,
                                const CostParams& params) {
  return Search(state, req, cfg, params).run(false);
}

}  // namespace pess
