#include "pess/heuristic.hpp"

#include <algorithm>
#include <set>

namespace pess {

std::string_view to_string(Rejection r) {
  switch (r) {
    case Rejection::none: return "none";
    case Rejection::no_route: return "no-route";
    case Rejection::infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

// Stateful groups become one placement unit; every other VSNF is its own.
std::vector<std::vector<VsnfRef>> placement_units(const ServiceRequest& req) {
  std::vector<std::vector<VsnfRef>> units = req.stateful_groups;
  std::set<VsnfRef> grouped;
  for (const auto& g : req.stateful_groups) grouped.insert(g.begin(), g.end());
  for (std::size_t c = 0; c < req.chains.size(); ++c)
    for (std::size_t p = 0; p < req.chains[c].vsnfs.size(); ++p)
      if (!grouped.count({c, p})) units.push_back({{c, p}});
  return units;
}

bool ranks_before(const CandidateSolution& a, const CandidateSolution& b,
                  bool descending) {
  if (a.cost != b.cost) return descending ? a.cost > b.cost : a.cost < b.cost;
  if (a.path.nodes.size() != b.path.nodes.size())
    return a.path.nodes.size() < b.path.nodes.size();
  return a.path.nodes < b.path.nodes;
}

}  // namespace

std::variant<CandidateSolution, Verdict> place_on_path(
    const PhysicalPath& path, const ServiceRequest& req,
    const NetworkState& state, const CostParams& params) {
  const auto& net = state.network();
  const NodeId ep1 = path.nodes.front();
  const NodeId ep2 = path.nodes.back();
  if (ep1 != req.ep1 || !req.in_ep2(ep2))
    return Verdict::fail(Violation::routing, "path does not join ep1 and EP2");

  auto index_of = [&](NodeId n) {
    return static_cast<std::size_t>(
        std::find(path.nodes.begin(), path.nodes.end(), n) -
        path.nodes.begin());
  };

  std::optional<NodeId> best;
  for (NodeId n : path.nodes) {
    if (req.is_veto(n)) continue;
    if (!best || state.residual_gamma(n) > state.residual_gamma(*best) ||
        (state.residual_gamma(n) == state.residual_gamma(*best) && n < *best))
      best = n;
  }

  std::vector<std::vector<NodeId>> host(req.chains.size());
  for (std::size_t c = 0; c < req.chains.size(); ++c)
    host[c].assign(req.chains[c].vsnfs.size(), -1);

  for (const auto& unit : placement_units(req)) {
    std::optional<NodeId> pinned;
    for (const auto& ref : unit) {
      const auto& v = req.chains[ref.chain].vsnfs[ref.position];
      if (!v.region) continue;
      NodeId target = ep1;
      switch (v.region->kind) {
        case RegionBinding::Kind::ep1: target = ep1; break;
        case RegionBinding::Kind::ep2: target = ep2; break;
        case RegionBinding::Kind::named:
          if (net.in_region(v.region->name, ep2))
            target = ep2;
          else if (net.in_region(v.region->name, ep1))
            target = ep1;
          else
            return Verdict::fail(Violation::region,
                                 v.name + ": no path endpoint in region " +
                                     v.region->name);
          break;
      }
      if (pinned && *pinned != target)
        return Verdict::fail(Violation::stateful,
                             v.name + ": conflicting region bindings");
      pinned = target;
    }
    if (!pinned && !best)
      return Verdict::fail(Violation::veto, "every path node is vetoed");
    const NodeId h = pinned ? *pinned : *best;
    if (req.is_veto(h))
      return Verdict::fail(Violation::veto,
                           "region-bound VSNF on veto node " + net.node(h).name);
    for (const auto& ref : unit) host[ref.chain][ref.position] = h;
  }

  CandidateSolution cand;
  cand.path = path;
  cand.ep2 = ep2;
  cand.embedding.chains.resize(req.chains.size());
  for (std::size_t c = 0; c < req.chains.size(); ++c) {
    const bool down = req.chains[c].direction == Direction::downstream;
    auto& ce = cand.embedding.chains[c];
    ce.hosts.push_back(down ? ep1 : ep2);
    ce.hosts.insert(ce.hosts.end(), host[c].begin(), host[c].end());
    ce.hosts.push_back(down ? ep2 : ep1);

    for (std::size_t s = 0; s + 1 < ce.hosts.size(); ++s) {
      const std::size_t i = index_of(ce.hosts[s]);
      const std::size_t j = index_of(ce.hosts[s + 1]);
      if (down ? j < i : j > i)
        return Verdict::fail(Violation::order,
                             "chain " + req.chains[c].id +
                                 ": VSNF order runs against the path");
      std::vector<ArcId> route;
      if (down) {
        route.assign(path.arcs.begin() + i, path.arcs.begin() + j);
      } else {
        for (std::size_t k = i; k > j; --k)
          route.push_back(PhysicalNetwork::reverse(path.arcs[k - 1]));
      }
      ce.routes.push_back(std::move(route));
    }
  }

  const ResourceDemand demand = request_demand(req, cand.embedding);
  if (auto v = check_capacity(state, demand); !v) return v;
  if (auto v = check_latency(state, cand.embedding, req, demand, params.delta);
      !v)
    return v;
  if (auto v = check_security(cand.embedding, req, net); !v) return v;
  cand.cost = embedding_cost(state, cand.embedding, req, params);
  return cand;
}

PessResult pess_select(const NetworkState& state, const ServiceRequest& req,
                       const PessOptions& opts) {
  const auto& net = state.network();
  const double delta = opts.params.delta;
  PessResult result;

  // Every chain crosses the whole path, so per-direction totals give both
  // the exact bandwidth feasibility of an edge and its cost contribution.
  Bandwidth down_bw = 0, up_bw = 0;
  double down_rate = 0.0, up_rate = 0.0;
  for (const auto& c : req.chains) {
    if (c.direction == Direction::downstream) {
      down_bw += bandwidth_demand(c);
      down_rate += c.beta_req;
    } else {
      up_bw += bandwidth_demand(c);
      up_rate += c.beta_req;
    }
  }
  const ArcWeight forward = [&](ArcId a) -> std::optional<double> {
    const ArcId r = PhysicalNetwork::reverse(a);
    const Bandwidth fwd = state.residual_beta(a);
    const Bandwidth bwd = state.residual_beta(r);
    if (fwd < down_bw || bwd < up_bw) return std::nullopt;
    return down_rate / (static_cast<double>(fwd) + delta) +
           up_rate / (static_cast<double>(bwd) + delta);
  };
  const ArcWeight backward = [&](ArcId a) {
    return forward(PhysicalNetwork::reverse(a));
  };

  ShortestPathTree initial(net, req.ep1, req.ep2_set, forward);
  result.stats.dijkstra_runs = 1;

  std::vector<NodeId> reached_ep2;
  std::vector<PhysicalPath> initial_paths;
  for (NodeId ep : req.ep2_set)
    if (initial.reached(ep)) {
      reached_ep2.push_back(ep);
      initial_paths.push_back(initial.path_to(ep));
    }
  result.stats.initial_paths = initial_paths.size();
  if (initial_paths.empty()) {
    result.rejection = Rejection::no_route;
    return result;
  }

  std::vector<CandidateSolution> candidates;
  std::set<std::vector<NodeId>> seen;
  auto consider = [&](PhysicalPath p) {
    if (!seen.insert(p.nodes).second) return;
    auto placed = place_on_path(p, req, state, opts.params);
    if (auto* cand = std::get_if<CandidateSolution>(&placed))
      candidates.push_back(std::move(*cand));
    else
      result.last_failure = std::get<Verdict>(placed);
  };
  for (const auto& p : initial_paths) consider(p);

  // Expansion set: nodes outside the initial paths, not vetoed, with more
  // residual CPU than any node on those paths.
  std::vector<char> on_initial(net.num_nodes(), 0);
  CpuRate best_initial_residual = 0;
  for (const auto& p : initial_paths)
    for (NodeId n : p.nodes) {
      on_initial[n] = 1;
      best_initial_residual =
          std::max(best_initial_residual, state.residual_gamma(n));
    }
  std::vector<NodeId> expansion;
  for (NodeId n = 0; n < static_cast<NodeId>(net.num_nodes()); ++n)
    if (!on_initial[n] && !req.is_veto(n) &&
        state.residual_gamma(n) > best_initial_residual)
      expansion.push_back(n);
  result.stats.expansion_nodes = expansion.size();

  if (!expansion.empty()) {
    std::vector<NodeId> roots;
    if (opts.expand_all_ep2) {
      roots = reached_ep2;
    } else if (!candidates.empty()) {
      auto best = std::min_element(
          candidates.begin(), candidates.end(),
          [](const auto& a, const auto& b) { return ranks_before(a, b, false); });
      roots.push_back(best->ep2);
    } else {
      roots.push_back(*std::min_element(
          reached_ep2.begin(), reached_ep2.end(), [&](NodeId a, NodeId b) {
            return std::pair(initial.distance(a), a) <
                   std::pair(initial.distance(b), b);
          }));
    }

    ShortestPathTree from_ep1(net, req.ep1, expansion, forward);
    ++result.stats.dijkstra_runs;
    for (NodeId ep2 : roots) {
      ShortestPathTree from_ep2(net, ep2, expansion, backward);
      ++result.stats.dijkstra_runs;
      for (NodeId e : expansion) {
        if (!from_ep1.reached(e) || !from_ep2.reached(e)) continue;
        PhysicalPath head = from_ep1.path_to(e);
        PhysicalPath tail = from_ep2.path_to(e);
        PhysicalPath joined = head;
        for (auto it = tail.nodes.rbegin() + 1; it != tail.nodes.rend(); ++it)
          joined.nodes.push_back(*it);
        for (auto it = tail.arcs.rbegin(); it != tail.arcs.rend(); ++it)
          joined.arcs.push_back(PhysicalNetwork::reverse(*it));
        std::vector<NodeId> sorted = joined.nodes;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
          continue;
        consider(std::move(joined));
      }
    }
  }

  result.stats.candidates = candidates.size();
  std::sort(candidates.begin(), candidates.end(),
            [&](const auto& a, const auto& b) {
              return ranks_before(a, b, opts.descending_scan);
            });

  for (auto& cand : candidates) {
    ++result.stats.scanned;
    const ResourceDemand demand = request_demand(req, cand.embedding);
    Verdict v = recheck_operational(state, demand, delta, opts.recheck);
    if (!v) {
      result.last_failure = std::move(v);
      continue;
    }
    for (std::size_t c = 0; c < req.chains.size(); ++c)
      result.chain_latencies.push_back(chain_latency(
          req.chains[c], cand.embedding.chains[c], state, demand.cpu, delta));
    result.solution = std::move(cand);
    return result;
  }
  result.rejection = Rejection::infeasible;
  return result;
}

ServiceId register_operational(NetworkState& state, const Embedding& emb,
                               const ServiceRequest& req, double delta) {
  return state.register_service(req, emb, delta);
}

PessResult pess_embed(NetworkState& state, const ServiceRequest& req,
                      const PessOptions& opts) {
  PessResult result = pess_select(state, req, opts);
  if (result.solution)
    result.service = register_operational(state, result.solution->embedding,
                                          req, opts.params.delta);
  return result;
}

}  // namespace pess
