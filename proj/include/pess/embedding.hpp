#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "pess/service.hpp"
#include "pess/topology.hpp"

namespace pess {

/// Placement and routing of one chain. hosts[0] and hosts.back() are the
/// chain's source and target endpoints; hosts[1..k] carry the VSNFs in
/// traversal order. routes[s] is the directed path hosts[s] -> hosts[s+1]
/// (empty when both entities share a node).
struct ChainEmbedding {
  std::vector<NodeId> hosts;
  std::vector<std::vector<ArcId>> routes;

  NodeId vsnf_host(std::size_t position) const { return hosts[position + 1]; }
  std::size_t num_arcs() const;
  friend bool operator==(const ChainEmbedding&, const ChainEmbedding&) = default;
};

struct Embedding {
  std::vector<ChainEmbedding> chains;  // parallel to ServiceRequest::chains
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

/// Sparse per-key demand, kept sorted by key.
template <class Key, class Value>
class SparseLoad {
 public:
  void add(Key k, Value v) {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), k,
        [](const auto& e, Key key) { return e.first < key; });
    if (it != entries_.end() && it->first == k)
      it->second += v;
    else
      entries_.insert(it, {k, v});
  }
  Value at(Key k) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), k,
        [](const auto& e, Key key) { return e.first < key; });
    return it != entries_.end() && it->first == k ? it->second : Value{};
  }
  const std::vector<std::pair<Key, Value>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::pair<Key, Value>> entries_;
};

using NodeLoad = SparseLoad<NodeId, CpuRate>;
using ArcLoad = SparseLoad<ArcId, Bandwidth>;

struct ResourceDemand {
  NodeLoad cpu;
  ArcLoad bandwidth;
};

/// Demand of a single chain: γ^c_u per hosted VSNF, β^c per routed arc.
ResourceDemand chain_demand(const Chain& chain, const ChainEmbedding& emb);
/// Sum over all chains of the request.
ResourceDemand request_demand(const ServiceRequest& req, const Embedding& emb);

}  // namespace pess
