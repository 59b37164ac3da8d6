#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pess/embedding.hpp"
#include "pess/service.hpp"
#include "pess/state.hpp"
#include "pess/topology.hpp"

namespace pess::testing {

struct NodeSpec {
  std::string name;
  CpuRate gamma = 67'200'000'000;
  double queuing = 9.6e-4;
};

struct LinkSpec {
  std::string a, b;
  Bandwidth bandwidth = 10'000'000'000;
  double delay = 5e-4;
};

inline PhysicalNetwork make_network(const std::vector<NodeSpec>& nodes,
                                    const std::vector<LinkSpec>& links,
                                    PhysicalNetwork::RegionMap regions = {}) {
  std::vector<PhysicalNode> ns;
  std::map<std::string, NodeId> ids;
  for (const auto& n : nodes) {
    const auto id = static_cast<NodeId>(ns.size());
    ids[n.name] = id;
    ns.push_back({id, n.name, n.gamma, n.queuing});
  }
  std::vector<PhysicalLink> ls;
  for (const auto& l : links) {
    const auto id = static_cast<LinkId>(ls.size());
    ls.push_back({id, ids.at(l.a), ids.at(l.b), l.bandwidth, l.delay});
  }
  return PhysicalNetwork(std::move(ns), std::move(ls), std::move(regions));
}

inline VsnfSpec vsnf(std::string name, double gamma, bool stateful = false,
                     std::optional<RegionBinding> region = std::nullopt) {
  return {std::move(name), gamma, stateful, std::move(region)};
}

inline Chain chain(std::string id, std::vector<VsnfSpec> vsnfs, double beta,
                   double lambda, Direction dir = Direction::downstream,
                   double pi = 0.0) {
  Chain c;
  c.id = std::move(id);
  c.vsnfs = std::move(vsnfs);
  c.beta_req = beta;
  c.lambda_max = lambda;
  c.pi_external = pi;
  c.direction = dir;
  return c;
}

inline ServiceRequest request(NodeId ep1, std::vector<NodeId> ep2,
                              std::vector<Chain> chains,
                              std::vector<NodeId> veto = {}) {
  ServiceRequest r;
  r.ep1 = ep1;
  r.ep2_set = std::move(ep2);
  std::sort(r.ep2_set.begin(), r.ep2_set.end());
  r.chains = std::move(chains);
  r.veto = std::move(veto);
  std::sort(r.veto.begin(), r.veto.end());
  r.stateful_groups = derive_stateful_groups(r.chains);
  return r;
}

// Reference latency, summed term by term.
inline double reference_latency(const Chain& c, const ChainEmbedding& e,
                                const NetworkState& s,
                                const NodeLoad& request_cpu, double delta) {
  const auto& net = s.network();
  const std::size_t k = c.vsnfs.size();
  double total = c.pi_external;
  for (std::size_t seg = 0; seg + 1 < e.hosts.size(); ++seg) {
    if (e.routes[seg].empty()) continue;
    for (ArcId a : e.routes[seg]) total += net.link(a / 2).lambda_prop;
    const bool from_vsnf = seg >= 1;
    const bool to_vsnf = seg + 1 <= k;
    if (from_vsnf) total += net.node(e.hosts[seg]).queuing_budget / 2;
    if (to_vsnf) total += net.node(e.hosts[seg + 1]).queuing_budget / 2;
  }
  for (std::size_t p = 0; p < k; ++p) {
    const NodeId h = e.hosts[p + 1];
    const double free_after = static_cast<double>(s.residual_gamma(h)) -
                              static_cast<double>(request_cpu.at(h));
    total += c.vsnfs[p].gamma_u * c.sigma / (free_after + delta);
  }
  return total;
}

// Residuals recomputed from the registry of operational chains.
inline std::vector<CpuRate> rebuilt_gamma(const NetworkState& s) {
  const auto& net = s.network();
  std::vector<CpuRate> r(net.num_nodes());
  for (NodeId n = 0; n < static_cast<NodeId>(net.num_nodes()); ++n)
    r[n] = net.node(n).gamma_nominal;
  for (const auto& [id, op] : s.operational())
    for (std::size_t p = 0; p < op.chain.vsnfs.size(); ++p)
      r[op.embedding.hosts[p + 1]] -= cpu_demand(op.chain.vsnfs[p], op.chain);
  return r;
}

inline std::vector<Bandwidth> rebuilt_beta(const NetworkState& s) {
  const auto& net = s.network();
  std::vector<Bandwidth> r(net.num_arcs());
  for (ArcId a = 0; a < static_cast<ArcId>(net.num_arcs()); ++a)
    r[a] = net.link(a / 2).beta_nominal;
  for (const auto& [id, op] : s.operational())
    for (const auto& route : op.embedding.routes)
      for (ArcId a : route) r[a] -= bandwidth_demand(op.chain);
  return r;
}

// Operational chain with the highest threshold among those with a VSNF on n.
inline std::optional<ChainInstanceId> brute_force_guard(const NetworkState& s,
                                                        NodeId n) {
  std::optional<ChainInstanceId> best;
  double best_value = 0.0;
  for (const auto& [id, op] : s.operational()) {
    bool hosts = false;
    for (std::size_t p = 0; p < op.chain.vsnfs.size(); ++p)
      hosts = hosts || op.embedding.hosts[p + 1] == n;
    if (!hosts) continue;
    const double v = op.threshold.value;
    if (!best || v > best_value) {
      best = id;
      best_value = v;
    }
  }
  return best;
}

// Every constraint of an accepted embedding, checked from first principles.
// cpu and bw are the request's own demand when the state does not hold it
// yet; pass empty loads for a state that already does.
inline std::vector<std::string> battery_violations(
    const NetworkState& s, const ServiceRequest& req, const Embedding& emb,
    const NodeLoad& cpu, const std::map<ArcId, Bandwidth>& bw, double delta) {
  const auto& net = s.network();
  std::vector<std::string> out;
  auto fail = [&](std::size_t c, const std::string& what) {
    out.push_back("chain " + std::to_string(c) + ": " + what);
  };
  if (emb.chains.size() != req.chains.size()) {
    out.push_back("chain count");
    return out;
  }
  for (NodeId n = 0; n < static_cast<NodeId>(net.num_nodes()); ++n)
    if (s.residual_gamma(n) - cpu.at(n) < 0) out.push_back("cpu overdraft");
  for (ArcId a = 0; a < static_cast<ArcId>(net.num_arcs()); ++a) {
    const auto it = bw.find(a);
    if (s.residual_beta(a) - (it == bw.end() ? 0 : it->second) < 0)
      out.push_back("bandwidth overdraft");
  }
  for (std::size_t c = 0; c < req.chains.size(); ++c) {
    const Chain& ch = req.chains[c];
    const ChainEmbedding& e = emb.chains[c];
    const std::size_t k = ch.vsnfs.size();
    if (e.hosts.size() != k + 2 || e.routes.size() != k + 1) {
      fail(c, "shape");
      continue;
    }
    const bool down = ch.direction == Direction::downstream;
    const NodeId local = down ? e.hosts.front() : e.hosts.back();
    const NodeId remote = down ? e.hosts.back() : e.hosts.front();
    if (local != req.ep1) fail(c, "ep1 end");
    if (std::find(req.ep2_set.begin(), req.ep2_set.end(), remote) == req.ep2_set.end())
      fail(c, "ep2 end");
    for (std::size_t seg = 0; seg <= k; ++seg) {
      NodeId at = e.hosts[seg];
      std::vector<NodeId> seen{at};
      for (ArcId a : e.routes[seg]) {
        if (a < 0 || a >= static_cast<ArcId>(net.num_arcs()) || net.arc(a).tail != at) {
          fail(c, "broken route");
          break;
        }
        at = net.arc(a).head;
        if (std::find(seen.begin(), seen.end(), at) != seen.end()) fail(c, "route not simple");
        seen.push_back(at);
      }
      if (at != e.hosts[seg + 1]) fail(c, "route misses host");
    }
    for (std::size_t p = 0; p < k; ++p) {
      const NodeId h = e.hosts[p + 1];
      if (std::find(req.veto.begin(), req.veto.end(), h) != req.veto.end()) fail(c, "veto");
      const auto& r = ch.vsnfs[p].region;
      if (!r) continue;
      const bool inside = r->kind == RegionBinding::Kind::ep1   ? h == req.ep1
                          : r->kind == RegionBinding::Kind::ep2 ? h == remote
                                                                : net.in_region(r->name, h);
      if (!inside) fail(c, "region");
    }
    if (reference_latency(ch, e, s, cpu, delta) > ch.lambda_max) fail(c, "latency");
  }
  for (const auto& group : req.stateful_groups)
    for (const auto& ref : group)
      if (emb.chains[ref.chain].hosts[ref.position + 1] !=
          emb.chains[group.front().chain].hosts[group.front().position + 1])
        out.push_back("stateful split");
  return out;
}

inline std::vector<std::string> battery_violations_pre(const NetworkState& s,
                                                       const ServiceRequest& req,
                                                       const Embedding& emb,
                                                       double delta) {
  NodeLoad cpu;
  std::map<ArcId, Bandwidth> bw;
  for (std::size_t c = 0; c < req.chains.size(); ++c) {
    const Chain& ch = req.chains[c];
    for (std::size_t p = 0; p < ch.vsnfs.size(); ++p)
      cpu.add(emb.chains[c].hosts[p + 1], cpu_demand(ch.vsnfs[p], ch));
    for (const auto& route : emb.chains[c].routes)
      for (ArcId a : route) bw[a] += bandwidth_demand(ch);
  }
  return battery_violations(s, req, emb, cpu, bw, delta);
}

}  // namespace pess::testing
