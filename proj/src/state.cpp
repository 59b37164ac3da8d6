#include "pess/state.hpp"

#include <numeric>

#include "pess/evaluation.hpp"

namespace pess {

std::size_t ChainEmbedding::num_arcs() const {
  std::size_t n = 0;
  for (const auto& r : routes) n += r.size();
  return n;
}

ResourceDemand chain_demand(const Chain& chain, const ChainEmbedding& emb) {
  ResourceDemand d;
  for (std::size_t p = 0; p < chain.vsnfs.size(); ++p)
    d.cpu.add(emb.vsnf_host(p), cpu_demand(chain.vsnfs[p], chain));
  const Bandwidth bw = bandwidth_demand(chain);
  for (const auto& route : emb.routes)
    for (ArcId a : route) d.bandwidth.add(a, bw);
  return d;
}

ResourceDemand request_demand(const ServiceRequest& req, const Embedding& emb) {
  ResourceDemand d;
  for (std::size_t c = 0; c < req.chains.size(); ++c) {
    const auto& chain = req.chains[c];
    const auto& ce = emb.chains.at(c);
    for (std::size_t p = 0; p < chain.vsnfs.size(); ++p)
      d.cpu.add(ce.vsnf_host(p), cpu_demand(chain.vsnfs[p], chain));
    const Bandwidth bw = bandwidth_demand(chain);
    for (const auto& route : ce.routes)
      for (ArcId a : route) d.bandwidth.add(a, bw);
  }
  return d;
}

NetworkState::NetworkState(const PhysicalNetwork& net)
    : net_(&net),
      residual_gamma_(net.num_nodes()),
      residual_beta_(net.num_arcs()),
      chains_on_(net.num_nodes()),
      guard_(net.num_nodes()) {
  for (const auto& n : net.nodes()) residual_gamma_[n.id] = n.gamma_nominal;
  for (const auto& l : net.links())
    residual_beta_[2 * l.id] = residual_beta_[2 * l.id + 1] = l.beta_nominal;
}

void NetworkState::debit(const ResourceDemand& d) {
  for (const auto& [n, v] : d.cpu.entries())
    if (v > residual_gamma_[n])
      throw CapacityError("node " + net_->node(n).name + ": demand " +
                          std::to_string(v) + " exceeds residual " +
                          std::to_string(residual_gamma_[n]));
  for (const auto& [a, v] : d.bandwidth.entries())
    if (v > residual_beta_[a]) {
      const Arc arc = net_->arc(a);
      throw CapacityError("arc " + net_->node(arc.tail).name + "->" +
                          net_->node(arc.head).name + ": demand " +
                          std::to_string(v) + " exceeds residual " +
                          std::to_string(residual_beta_[a]));
    }
  for (const auto& [n, v] : d.cpu.entries()) residual_gamma_[n] -= v;
  for (const auto& [a, v] : d.bandwidth.entries()) residual_beta_[a] -= v;
}

void NetworkState::credit(const ResourceDemand& d) {
  for (const auto& [n, v] : d.cpu.entries()) residual_gamma_[n] += v;
  for (const auto& [a, v] : d.bandwidth.entries()) residual_beta_[a] += v;
}

bool NetworkState::outranks(ChainInstanceId a, ChainInstanceId b) const {
  const auto& ta = operational_.at(a).threshold;
  const auto& tb = operational_.at(b).threshold;
  if (ta.value != tb.value) return ta.value > tb.value;
  return a < b;
}

ServiceId NetworkState::register_service(const ServiceRequest& req,
                                         const Embedding& emb, double delta) {
  debit(request_demand(req, emb));

  const ServiceId sid = next_service_++;
  auto& members = services_[sid];
  for (std::size_t c = 0; c < req.chains.size(); ++c) {
    const ChainInstanceId id = next_chain_++;
    OperationalChain op;
    op.id = id;
    op.service = sid;
    op.chain = req.chains[c];
    op.embedding = emb.chains[c];
    op.threshold = gamma_threshold(op.chain, op.embedding, *net_, delta);
    op.demand = chain_demand(op.chain, op.embedding);
    operational_.emplace(id, std::move(op));
    members.push_back(id);

    for (const auto& [node, cpu] : operational_.at(id).demand.cpu.entries()) {
      chains_on_[node].insert(id);
      if (!guard_[node] || outranks(id, *guard_[node])) guard_[node] = id;
    }
  }
  return sid;
}

void NetworkState::rebuild_guard(NodeId n) {
  guard_[n].reset();
  for (ChainInstanceId id : chains_on_[n])
    if (!guard_[n] || outranks(id, *guard_[n])) guard_[n] = id;
}

void NetworkState::release(ServiceId id) {
  auto it = services_.find(id);
  if (it == services_.end())
    throw std::out_of_range("unknown service " + std::to_string(id));

  std::set<NodeId> stale;
  for (ChainInstanceId cid : it->second) {
    auto op = operational_.find(cid);
    credit(op->second.demand);
    for (const auto& [node, cpu] : op->second.demand.cpu.entries()) {
      chains_on_[node].erase(cid);
      if (guard_[node] == cid) stale.insert(node);
    }
    operational_.erase(op);
  }
  services_.erase(it);
  for (NodeId n : stale) rebuild_guard(n);
}

CpuRate NetworkState::consumed_gamma() const {
  CpuRate used = 0;
  for (const auto& n : net_->nodes())
    used += n.gamma_nominal - residual_gamma_[n.id];
  return used;
}

NetworkState residual_after(const NetworkState& state, const Embedding& emb,
                            const ServiceRequest& req) {
  NetworkState next = state;
  next.debit(request_demand(req, emb));
  return next;
}

}  // namespace pess
