#include "pess/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace pess {

double processing_delay(double gamma_u, double sigma, double residual_gamma_i,
                        double gamma_cu, double delta) {
  return gamma_u * sigma / ((residual_gamma_i - gamma_cu) + delta);
}

double path_latency(const ChainEmbedding& emb, const PhysicalNetwork& net) {
  const std::size_t n_vsnfs = emb.hosts.size() - 2;
  double total = 0.0;
  for (std::size_t s = 0; s < emb.routes.size(); ++s) {
    const auto& route = emb.routes[s];
    if (route.empty()) continue;
    for (ArcId a : route) total += net.link(a >> 1).lambda_prop;
    if (s >= 1) total += 0.5 * net.node(emb.hosts[s]).queuing_budget;
    if (s + 1 <= n_vsnfs) total += 0.5 * net.node(emb.hosts[s + 1]).queuing_budget;
  }
  return total;
}

double chain_latency(const Chain& chain, const ChainEmbedding& emb,
                     const NetworkState& state, const NodeLoad& extra_load,
                     double delta) {
  double total = chain.pi_external + path_latency(emb, state.network());
  for (std::size_t p = 0; p < chain.vsnfs.size(); ++p) {
    const NodeId host = emb.vsnf_host(p);
    total += processing_delay(chain.vsnfs[p].gamma_u, chain.sigma,
                              static_cast<double>(state.residual_gamma(host)),
                              static_cast<double>(extra_load.at(host)), delta);
  }
  return total;
}

GammaThreshold gamma_threshold(const Chain& chain, const ChainEmbedding& emb,
                               const PhysicalNetwork& net, double delta) {
  double cycles_per_packet = 0.0;
  for (const auto& v : chain.vsnfs) cycles_per_packet += v.gamma_u * chain.sigma;
  const double budget =
      chain.lambda_max - chain.pi_external - path_latency(emb, net);
  if (budget <= 0.0)
    return {std::numeric_limits<double>::infinity(), true};
  return {cycles_per_packet / budget - delta, false};
}

double embedding_cost(const NetworkState& state, const Embedding& emb,
                      const ServiceRequest& req, const CostParams& params) {
  double bandwidth_cost = 0.0;
  double cpu_cost = 0.0;
  for (std::size_t c = 0; c < req.chains.size(); ++c) {
    const auto& chain = req.chains[c];
    const auto& ce = emb.chains[c];
    for (const auto& route : ce.routes)
      for (ArcId a : route)
        bandwidth_cost +=
            chain.beta_req /
            (static_cast<double>(state.residual_beta(a)) + params.delta);
    for (std::size_t p = 0; p < chain.vsnfs.size(); ++p)
      cpu_cost += chain.vsnfs[p].gamma_u * chain.beta_req /
                  (static_cast<double>(state.residual_gamma(ce.vsnf_host(p))) +
                   params.delta);
  }
  return bandwidth_cost + params.alpha * cpu_cost;
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::none: return "none";
    case Violation::routing: return "routing";
    case Violation::capacity_node: return "capacity-node";
    case Violation::capacity_link: return "capacity-link";
    case Violation::latency: return "latency";
    case Violation::operational_latency: return "operational-latency";
    case Violation::stateful: return "stateful";
    case Violation::region: return "region";
    case Violation::veto: return "veto";
    case Violation::order: return "order";
  }
  return "unknown";
}

Verdict check_routing(const Embedding& emb, const ServiceRequest& req,
                      const PhysicalNetwork& net) {
  if (emb.chains.size() != req.chains.size())
    return Verdict::fail(Violation::routing, "chain count mismatch");
  const auto n_nodes = static_cast<NodeId>(net.num_nodes());
  const auto n_arcs = static_cast<ArcId>(net.num_arcs());

  for (std::size_t c = 0; c < req.chains.size(); ++c) {
    const auto& chain = req.chains[c];
    const auto& ce = emb.chains[c];
    const std::string where = "chain " + chain.id + ": ";
    if (ce.hosts.size() != chain.vsnfs.size() + 2)
      return Verdict::fail(Violation::routing, where + "wrong host count");
    if (ce.routes.size() != ce.hosts.size() - 1)
      return Verdict::fail(Violation::routing, where + "wrong route count");
    for (NodeId h : ce.hosts)
      if (h < 0 || h >= n_nodes)
        return Verdict::fail(Violation::routing, where + "unknown host");

    const NodeId src = ce.hosts.front();
    const NodeId dst = ce.hosts.back();
    const bool ends_ok = chain.direction == Direction::downstream
                             ? src == req.ep1 && req.in_ep2(dst)
                             : req.in_ep2(src) && dst == req.ep1;
    if (!ends_ok)
      return Verdict::fail(Violation::routing, where + "endpoints misplaced");

    for (std::size_t s = 0; s < ce.routes.size(); ++s) {
      const auto& route = ce.routes[s];
      const NodeId from = ce.hosts[s];
      const NodeId to = ce.hosts[s + 1];
      if (route.empty()) {
        if (from != to)
          return Verdict::fail(Violation::routing,
                               where + "missing route for segment " +
                                   std::to_string(s));
        continue;
      }
      std::set<NodeId> visited{from};
      NodeId at = from;
      for (ArcId a : route) {
        if (a < 0 || a >= n_arcs)
          return Verdict::fail(Violation::routing, where + "unknown arc");
        const Arc arc = net.arc(a);
        if (arc.tail != at)
          return Verdict::fail(Violation::routing,
                               where + "route is not contiguous");
        if (!visited.insert(arc.head).second)
          return Verdict::fail(Violation::routing,
                               where + "route revisits " +
                                   net.node(arc.head).name);
        at = arc.head;
      }
      if (at != to)
        return Verdict::fail(Violation::routing,
                             where + "route ends off its target host");
    }
  }
  return Verdict::ok();
}

Verdict check_security(const Embedding& emb, const ServiceRequest& req,
                       const PhysicalNetwork& net) {
  for (const auto& group : req.stateful_groups) {
    const NodeId first =
        emb.chains[group.front().chain].vsnf_host(group.front().position);
    for (const auto& ref : group)
      if (emb.chains[ref.chain].vsnf_host(ref.position) != first)
        return Verdict::fail(
            Violation::stateful,
            req.chains[ref.chain].vsnfs[ref.position].name +
                " instances are split across nodes");
  }

  for (std::size_t c = 0; c < req.chains.size(); ++c) {
    const auto& chain = req.chains[c];
    const auto& ce = emb.chains[c];
    for (std::size_t p = 0; p < chain.vsnfs.size(); ++p) {
      const auto& v = chain.vsnfs[p];
      const NodeId host = ce.vsnf_host(p);
      if (req.is_veto(host))
        return Verdict::fail(Violation::veto, "chain " + chain.id + ": " +
                                                  v.name + " on veto node " +
                                                  net.node(host).name);
      if (!v.region) continue;
      bool inside = false;
      switch (v.region->kind) {
        case RegionBinding::Kind::ep1: inside = host == req.ep1; break;
        case RegionBinding::Kind::ep2: inside = req.in_ep2(host); break;
        case RegionBinding::Kind::named:
          inside = net.in_region(v.region->name, host);
          break;
      }
      if (!inside)
        return Verdict::fail(Violation::region, "chain " + chain.id + ": " +
                                                    v.name + " outside its region");
    }

    for (std::size_t s = 0; s < ce.routes.size(); ++s) {
      const auto& route = ce.routes[s];
      const bool ordered =
          route.empty()
              ? ce.hosts[s] == ce.hosts[s + 1]
              : net.arc(route.front()).tail == ce.hosts[s] &&
                    net.arc(route.back()).head == ce.hosts[s + 1];
      if (!ordered)
        return Verdict::fail(Violation::order,
                             "chain " + chain.id + ": segment " +
                                 std::to_string(s) + " skips its VSNF");
    }
  }
  return Verdict::ok();
}

Verdict check_capacity(const NetworkState& state, const ResourceDemand& demand) {
  const auto& net = state.network();
  for (const auto& [n, v] : demand.cpu.entries())
    if (v > state.residual_gamma(n))
      return Verdict::fail(Violation::capacity_node,
                           "node " + net.node(n).name);
  for (const auto& [a, v] : demand.bandwidth.entries())
    if (v > state.residual_beta(a)) {
      const Arc arc = net.arc(a);
      return Verdict::fail(Violation::capacity_link,
                           "arc " + net.node(arc.tail).name + "->" +
                               net.node(arc.head).name);
    }
  return Verdict::ok();
}

Verdict check_latency(const NetworkState& state, const Embedding& emb,
                      const ServiceRequest& req, const ResourceDemand& demand,
                      double delta) {
  for (std::size_t c = 0; c < req.chains.size(); ++c) {
    const auto& chain = req.chains[c];
    if (chain_latency(chain, emb.chains[c], state, demand.cpu, delta) >
        chain.lambda_max)
      return Verdict::fail(Violation::latency, "chain " + chain.id);
  }
  return Verdict::ok();
}

Verdict recheck_operational(const NetworkState& state,
                            const ResourceDemand& demand, double delta,
                            RecheckScope scope) {
  std::set<ChainInstanceId> selected;
  for (const auto& [n, v] : demand.cpu.entries()) {
    if (v <= 0) continue;
    if (scope == RecheckScope::guard) {
      if (auto g = state.guard(n)) selected.insert(*g);
    } else {
      const auto& on = state.chains_on(n);
      selected.insert(on.begin(), on.end());
    }
  }
  for (ChainInstanceId id : selected) {
    const auto& op = state.chain(id);
    if (chain_latency(op.chain, op.embedding, state, demand.cpu, delta) >
        op.chain.lambda_max) {
      Verdict v = Verdict::fail(Violation::operational_latency,
                                "operational chain " + std::to_string(id));
      v.operational_chain = id;
      return v;
    }
  }
  return Verdict::ok();
}

Verdict check_embedding(const NetworkState& state, const Embedding& emb,
                        const ServiceRequest& req, double delta,
                        RecheckScope scope) {
  const auto& net = state.network();
  if (auto v = check_routing(emb, req, net); !v) return v;
  if (auto v = check_security(emb, req, net); !v) return v;
  const ResourceDemand demand = request_demand(req, emb);
  if (auto v = check_capacity(state, demand); !v) return v;
  if (auto v = check_latency(state, emb, req, demand, delta); !v) return v;
  return recheck_operational(state, demand, delta, scope);
}

}  // namespace pess
