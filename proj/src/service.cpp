#include "pess/service.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace pess {

bool ServiceRequest::in_ep2(NodeId n) const {
  return std::binary_search(ep2_set.begin(), ep2_set.end(), n);
}

bool ServiceRequest::is_veto(NodeId n) const {
  return std::binary_search(veto.begin(), veto.end(), n);
}

std::size_t ServiceRequest::total_vsnfs() const {
  std::size_t total = 0;
  for (const auto& c : chains) total += c.vsnfs.size();
  return total;
}

Bandwidth bandwidth_demand(const Chain& c) { return std::llround(c.beta_req); }

CpuRate cpu_demand(const VsnfSpec& v, const Chain& c) {
  return std::llround(v.gamma_u * c.beta_req);
}

void validate_request(const ServiceRequest& req, const PhysicalNetwork& net) {
  const auto n = static_cast<NodeId>(net.num_nodes());
  auto in_range = [n](NodeId x) { return x >= 0 && x < n; };
  if (!in_range(req.ep1)) throw ConfigError("ep1 is not a network node");
  if (req.ep2_set.empty()) throw ConfigError("EP2 is empty");
  if (!std::is_sorted(req.ep2_set.begin(), req.ep2_set.end()) ||
      !std::is_sorted(req.veto.begin(), req.veto.end()))
    throw ConfigError("EP2 and veto sets must be sorted");
  for (NodeId x : req.ep2_set)
    if (!in_range(x)) throw ConfigError("EP2 references an unknown node");
  for (NodeId x : req.veto)
    if (!in_range(x)) throw ConfigError("veto references an unknown node");

  for (const auto& c : req.chains) {
    const std::string where = "chain " + c.id + ": ";
    if (!(c.beta_req > 0)) throw ConfigError(where + "bandwidth must be > 0");
    if (!(c.lambda_max > 0)) throw ConfigError(where + "latency must be > 0");
    if (!(c.sigma > 0)) throw ConfigError(where + "packet size must be > 0");
    if (!(c.pi_external >= 0))
      throw ConfigError(where + "external latency must be >= 0");
    for (const auto& v : c.vsnfs) {
      if (!(v.gamma_u > 0))
        throw ConfigError(where + v.name + ": cycles/bit must be > 0");
      if (v.region && v.region->kind == RegionBinding::Kind::named &&
          net.region(v.region->name).empty())
        throw ConfigError(where + v.name + ": unknown region " +
                          v.region->name);
    }
  }

  std::set<VsnfRef> grouped;
  for (const auto& g : req.stateful_groups) {
    if (g.empty()) throw ConfigError("empty stateful group");
    const std::string* name = nullptr;
    for (const auto& ref : g) {
      if (ref.chain >= req.chains.size() ||
          ref.position >= req.chains[ref.chain].vsnfs.size())
        throw ConfigError("stateful group references a missing VSNF");
      const auto& v = req.chains[ref.chain].vsnfs[ref.position];
      if (name && *name != v.name)
        throw ConfigError("stateful group mixes " + *name + " and " + v.name);
      name = &v.name;
      if (!grouped.insert(ref).second)
        throw ConfigError("VSNF " + v.name + " is in two stateful groups");
    }
  }
}

std::vector<StatefulGroup> derive_stateful_groups(
    const std::vector<Chain>& chains) {
  std::map<std::string, StatefulGroup> by_name;
  std::vector<std::string> order;
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (std::size_t p = 0; p < chains[c].vsnfs.size(); ++p) {
      const auto& v = chains[c].vsnfs[p];
      if (!v.stateful) continue;
      auto [it, fresh] = by_name.try_emplace(v.name);
      if (fresh) order.push_back(v.name);
      it->second.push_back({c, p});
    }

  std::vector<StatefulGroup> groups;
  for (const auto& name : order) {
    auto& g = by_name[name];
    std::set<std::size_t> distinct;
    for (const auto& r : g) distinct.insert(r.chain);
    if (distinct.size() >= 2) groups.push_back(std::move(g));
  }
  return groups;
}

VsnfCatalog::VsnfCatalog(std::vector<VsnfSpec> entries)
    : entries_(std::move(entries)) {
  std::set<std::string> names;
  for (const auto& e : entries_) {
    if (!names.insert(e.name).second)
      throw ConfigError("duplicate catalog entry " + e.name);
    if (!(e.gamma_u > 0))
      throw ConfigError("catalog entry " + e.name + " needs cycles/bit > 0");
  }
}

const VsnfSpec* VsnfCatalog::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

const VsnfSpec& VsnfCatalog::at(const std::string& name) const {
  if (const auto* e = find(name)) return *e;
  throw ConfigError("unknown VSNF " + name);
}

VsnfCatalog builtin_catalog() {
  // IDS/IPS and firewall classes keep flow state; VPN and monitoring do not.
  return VsnfCatalog({
      {"snort", 9.5, true, std::nullopt},
      {"suricata", 8.2, true, std::nullopt},
      {"openvpn-aesni", 31.0, false, std::nullopt},
      {"strongswan-aesni", 16.0, false, std::nullopt},
      {"fortigate-ngfw", 9.0, true, std::nullopt},
      {"fortigate-sslvpn", 13.6, false, std::nullopt},
      {"fortigate-ipsecvpn", 14.5, false, std::nullopt},
      {"fortigate-threat", 11.3, true, std::nullopt},
      {"cisco-asav-ids", 4.2, true, std::nullopt},
      {"cisco-asav-vpn", 6.9, false, std::nullopt},
      {"juniper-vsrx-fw", 2.3, true, std::nullopt},
      {"juniper-vsrx-ips", 2.4, true, std::nullopt},
      {"juniper-vsrx-appmon", 1.5, false, std::nullopt},
  });
}

void RequestGenConfig::validate() const {
  if (min_chains < 0 || max_chains < min_chains)
    throw ConfigError("invalid chain-count range");
  if (min_vsnfs < 0 || max_vsnfs < min_vsnfs)
    throw ConfigError("invalid VSNFs-per-chain range");
  if (!(min_bandwidth > 0) || max_bandwidth < min_bandwidth)
    throw ConfigError("invalid bandwidth range");
  if (latency_menu.empty()) throw ConfigError("latency menu is empty");
  for (double l : latency_menu)
    if (!(l > 0)) throw ConfigError("latency menu entries must be > 0");
  if (!(sigma > 0)) throw ConfigError("packet size must be > 0");
  if (!(border_pi >= 0)) throw ConfigError("external latency must be >= 0");
  if (border_bias < 0 || border_bias > 1)
    throw ConfigError("border bias must lie in [0,1]");
  if (region_bind_probability < 0 || region_bind_probability > 1)
    throw ConfigError("region binding probability must lie in [0,1]");
  if (ep2_count < 0) throw ConfigError("EP2 count must be >= 0");
}

RequestGenerator::RequestGenerator(const PhysicalNetwork& net,
                                   const VsnfCatalog& catalog,
                                   RequestGenConfig cfg)
    : net_(&net), catalog_(&catalog), cfg_(std::move(cfg)) {
  cfg_.validate();
  if (catalog.empty()) throw ConfigError("VSNF catalog is empty");
}

ServiceRequest RequestGenerator::generate(std::mt19937_64& rng) const {
  const auto n = static_cast<NodeId>(net_->num_nodes());
  using IntDist = std::uniform_int_distribution<int>;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ServiceRequest req;
  req.ep1 = IntDist(0, n - 1)(rng);

  auto other_node = [&] {
    if (n == 1) return req.ep1;
    NodeId x = IntDist(0, n - 2)(rng);
    return x >= req.ep1 ? x + 1 : x;
  };

  double pi = 0.0;
  auto border = net_->region(cfg_.border_region);
  if (cfg_.ep2_count > 0) {
    std::vector<NodeId> pool;
    for (NodeId i = 0; i < n; ++i)
      if (i != req.ep1) pool.push_back(i);
    const auto k = std::min<std::size_t>(cfg_.ep2_count, pool.size());
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    req.ep2_set.assign(pool.begin(), pool.begin() + k);
    if (req.ep2_set.empty()) req.ep2_set.push_back(req.ep1);
  } else if (!border.empty() && unit(rng) < cfg_.border_bias) {
    req.ep2_set.assign(border.begin(), border.end());
    pi = cfg_.border_pi;
  } else {
    req.ep2_set.push_back(other_node());
  }
  std::sort(req.ep2_set.begin(), req.ep2_set.end());

  auto veto = net_->region(cfg_.veto_region);
  req.veto.assign(veto.begin(), veto.end());

  const int n_chains = IntDist(cfg_.min_chains, cfg_.max_chains)(rng);
  const int max_v = std::min<int>(cfg_.max_vsnfs, catalog_->size());
  const int min_v = std::min(cfg_.min_vsnfs, max_v);
  const double log_lo = std::log(cfg_.min_bandwidth);
  const double log_hi = std::log(cfg_.max_bandwidth);

  std::map<std::string, std::optional<RegionBinding>> binding;
  std::vector<std::size_t> idx(catalog_->size());

  for (int c = 0; c < n_chains; ++c) {
    Chain chain;
    chain.id = "c" + std::to_string(c + 1);
    const int k = IntDist(min_v, max_v)(rng);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
      VsnfSpec v = catalog_->entries()[idx[i]];
      auto [it, fresh] = binding.try_emplace(v.name);
      if (fresh && cfg_.region_bind_probability > 0 &&
          unit(rng) < cfg_.region_bind_probability)
        it->second = unit(rng) < 0.5 ? RegionBinding::at_ep1()
                                     : RegionBinding::at_ep2();
      v.region = it->second;
      chain.vsnfs.push_back(std::move(v));
    }
    chain.beta_req =
        std::round(std::exp(log_lo + (log_hi - log_lo) * unit(rng)));
    chain.lambda_max = cfg_.latency_menu[IntDist(
        0, static_cast<int>(cfg_.latency_menu.size()) - 1)(rng)];
    chain.sigma = cfg_.sigma;
    chain.pi_external = pi;
    chain.direction =
        unit(rng) < 0.5 ? Direction::downstream : Direction::upstream;
    req.chains.push_back(std::move(chain));
  }
  req.stateful_groups = derive_stateful_groups(req.chains);
  return req;
}

ServiceRequest baseline_request(const ServiceRequest& req) {
  ServiceRequest out;
  out.ep1 = req.ep1;
  out.ep2_set = req.ep2_set;
  out.veto = req.veto;

  for (Direction dir : {Direction::downstream, Direction::upstream}) {
    std::vector<const Chain*> members;
    for (const auto& c : req.chains)
      if (c.direction == dir) members.push_back(&c);
    if (members.empty()) continue;

    Chain merged;
    merged.id = dir == Direction::downstream ? "base-down" : "base-up";
    merged.direction = dir;
    if (members.size() == 1) {
      merged.vsnfs = members.front()->vsnfs;
      merged.beta_req = members.front()->beta_req;
      merged.lambda_max = members.front()->lambda_max;
      merged.sigma = members.front()->sigma;
      merged.pi_external = members.front()->pi_external;
    } else {
      double weighted_sigma = 0.0;
      merged.lambda_max = members.front()->lambda_max;
      for (const Chain* c : members) {
        for (const auto& v : c->vsnfs) {
          auto same = [&](const VsnfSpec& w) { return w.name == v.name; };
          if (std::none_of(merged.vsnfs.begin(), merged.vsnfs.end(), same))
            merged.vsnfs.push_back(v);
        }
        merged.beta_req += c->beta_req;
        merged.lambda_max = std::min(merged.lambda_max, c->lambda_max);
        merged.pi_external = std::max(merged.pi_external, c->pi_external);
        weighted_sigma += c->beta_req * c->sigma;
      }
      merged.sigma = weighted_sigma / merged.beta_req;
    }
    out.chains.push_back(std::move(merged));
  }
  out.stateful_groups = derive_stateful_groups(out.chains);
  return out;
}

}  // namespace pess
