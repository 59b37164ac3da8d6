#include "pess/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pess {

using nlohmann::json;

namespace {

std::string describe(const std::string& source, int line, int column,
                     const std::string& location, const std::string& message) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line) + ":" + std::to_string(column);
  out += ": ";
  if (!location.empty()) out += location + ": ";
  return out + message;
}

}  // namespace

ParseError::ParseError(std::string source, int line, int column,
                       std::string location, const std::string& message)
    : std::runtime_error(describe(source, line, column, location, message)),
      source_(std::move(source)),
      line_(line),
      column_(column),
      location_(std::move(location)) {}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
    int line = 1, column = 1;
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ParseError(source, line, column, {}, msg);
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& where, const std::string& msg) const {
    throw ParseError(source_, 0, 0, where, msg);
  }

  const json& object(const json& v, const std::string& where) const {
    if (!v.is_object()) fail(where, "expected an object");
    return v;
  }
  const json& array(const json& v, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array");
    return v;
  }
  const json& field(const json& obj, const char* key,
                    const std::string& where) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(where, key), "missing field");
    return *it;
  }
  const json* optional_field(const json& obj, const char* key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }
  double number(const json& v, const std::string& where) const {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  }
  std::int64_t integral(const json& v, const std::string& where) const {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    const double d = number(v, where);
    if (!std::isfinite(d) || std::abs(d) > 9e18) fail(where, "value out of range");
    return std::llround(d);
  }
  std::string text(const json& v, const std::string& where) const {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
  }
  bool boolean(const json& v, const std::string& where) const {
    if (!v.is_boolean()) fail(where, "expected true or false");
    return v.get<bool>();
  }
  void known_keys(const json& obj, const std::string& where,
                  std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : obj.items())
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        fail(join(where, key), "unknown field");
  }

  static std::string join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
  }
  static std::string index(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
  }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

NodeId node_ref(const Reader& r, const json& v, const std::string& where,
                const std::map<std::string, NodeId>& names, std::size_t count) {
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0 || i >= static_cast<std::int64_t>(count))
      r.fail(where, "node index out of range");
    return static_cast<NodeId>(i);
  }
  const std::string name = r.text(v, where);
  auto it = names.find(name);
  if (it == names.end()) r.fail(where, "unknown node '" + name + "'");
  return it->second;
}

NodeId node_ref(const Reader& r, const json& v, const std::string& where,
                const PhysicalNetwork& net) {
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0 || i >= static_cast<std::int64_t>(net.num_nodes()))
      r.fail(where, "node index out of range");
    return static_cast<NodeId>(i);
  }
  const std::string name = r.text(v, where);
  auto id = net.find_node(name);
  if (!id) r.fail(where, "unknown node '" + name + "'");
  return *id;
}

}  // namespace

PhysicalNetwork topology_from_json(const json& doc, const std::string& source) {
  const Reader r(source);
  r.object(doc, "document");
  if (const json* f = r.optional_field(doc, "format"))
    if (r.text(*f, "format") != "pess-topology/1")
      r.fail("format", "unsupported format (expected pess-topology/1)");

  PhysicalNode tmpl = default_node_profile();
  Bandwidth default_bw = 10'000'000'000;
  if (const json* d = r.optional_field(doc, "defaults")) {
    r.object(*d, "defaults");
    if (const json* v = r.optional_field(*d, "gamma"))
      tmpl.gamma_nominal = r.integral(*v, "defaults.gamma");
    if (const json* v = r.optional_field(*d, "queuing_budget"))
      tmpl.queuing_budget = r.number(*v, "defaults.queuing_budget");
    if (const json* v = r.optional_field(*d, "bandwidth"))
      default_bw = r.integral(*v, "defaults.bandwidth");
  }

  std::vector<PhysicalNode> nodes;
  std::map<std::string, NodeId> names;
  const json& jnodes = r.array(r.field(doc, "nodes", ""), "nodes");
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const std::string where = Reader::index("nodes", i);
    PhysicalNode n = tmpl;
    n.id = static_cast<NodeId>(i);
    n.name.clear();
    const json& jn = jnodes[i];
    if (jn.is_string()) {
      n.name = jn.get<std::string>();
    } else {
      r.object(jn, where);
      if (const json* v = r.optional_field(jn, "name"))
        n.name = r.text(*v, where + ".name");
      if (const json* v = r.optional_field(jn, "gamma"))
        n.gamma_nominal = r.integral(*v, where + ".gamma");
      if (const json* v = r.optional_field(jn, "queuing_budget"))
        n.queuing_budget = r.number(*v, where + ".queuing_budget");
    }
    if (n.name.empty()) n.name = "n" + std::to_string(i);
    if (!names.emplace(n.name, n.id).second)
      r.fail(where + ".name", "duplicate node '" + n.name + "'");
    if (n.gamma_nominal <= 0) r.fail(where + ".gamma", "capacity must be positive");
    if (n.queuing_budget < 0)
      r.fail(where + ".queuing_budget", "queuing budget must be >= 0");
    nodes.push_back(std::move(n));
  }

  std::vector<PhysicalLink> links;
  std::set<std::pair<NodeId, NodeId>> seen;
  const json& jlinks = r.array(r.field(doc, "links", ""), "links");
  for (std::size_t i = 0; i < jlinks.size(); ++i) {
    const std::string where = Reader::index("links", i);
    const json& jl = r.object(jlinks[i], where);
    PhysicalLink l;
    l.id = static_cast<LinkId>(i);
    l.a = node_ref(r, r.field(jl, "a", where), where + ".a", names, nodes.size());
    l.b = node_ref(r, r.field(jl, "b", where), where + ".b", names, nodes.size());
    if (l.a == l.b) r.fail(where, "self loop");
    if (!seen.insert(std::minmax(l.a, l.b)).second)
      r.fail(where, "duplicate link");
    l.beta_nominal = default_bw;
    if (const json* v = r.optional_field(jl, "bandwidth"))
      l.beta_nominal = r.integral(*v, where + ".bandwidth");
    if (l.beta_nominal <= 0) r.fail(where + ".bandwidth", "bandwidth must be positive");
    if (const json* v = r.optional_field(jl, "delay")) {
      l.lambda_prop = r.number(*v, where + ".delay");
      if (l.lambda_prop < 0) r.fail(where + ".delay", "delay must be >= 0");
    } else if (const json* v = r.optional_field(jl, "distance_km")) {
      const double km = r.number(*v, where + ".distance_km");
      if (km < 0) r.fail(where + ".distance_km", "distance must be >= 0");
      l.lambda_prop = propagation_delay(km);
    }
    links.push_back(l);
  }

  PhysicalNetwork::RegionMap regions;
  if (const json* jr = r.optional_field(doc, "regions")) {
    r.object(*jr, "regions");
    for (const auto& [name, members] : jr->items()) {
      const std::string where = "regions." + name;
      r.array(members, where);
      if (members.empty()) r.fail(where, "region is empty");
      auto& ids = regions[name];
      for (std::size_t i = 0; i < members.size(); ++i)
        ids.push_back(node_ref(r, members[i], Reader::index(where, i), names,
                               nodes.size()));
    }
  }

  try {
    return PhysicalNetwork(std::move(nodes), std::move(links), std::move(regions));
  } catch (const TopologyError& e) {
    r.fail("", e.what());
  }
}

PhysicalNetwork parse_topology(std::string_view text, const std::string& source) {
  return topology_from_json(parse_json(text, source), source);
}

PhysicalNetwork load_topology(const std::filesystem::path& path) {
  return parse_topology(read_file(path), path.string());
}

json topology_to_json(const PhysicalNetwork& net) {
  json doc;
  doc["format"] = "pess-topology/1";
  json nodes = json::array();
  for (const auto& n : net.nodes())
    nodes.push_back({{"name", n.name},
                     {"gamma", n.gamma_nominal},
                     {"queuing_budget", n.queuing_budget}});
  doc["nodes"] = std::move(nodes);
  json links = json::array();
  for (const auto& l : net.links())
    links.push_back({{"a", net.node(l.a).name},
                     {"b", net.node(l.b).name},
                     {"bandwidth", l.beta_nominal},
                     {"delay", l.lambda_prop}});
  doc["links"] = std::move(links);
  json regions = json::object();
  for (const auto& [name, ids] : net.regions()) {
    json members = json::array();
    for (NodeId n : ids) members.push_back(net.node(n).name);
    regions[name] = std::move(members);
  }
  doc["regions"] = std::move(regions);
  return doc;
}

std::string dump_topology(const PhysicalNetwork& net) {
  return topology_to_json(net).dump(2) + "\n";
}

namespace {

std::optional<RegionBinding> parse_binding(const Reader& r, const json& v,
                                           const std::string& where) {
  if (v.is_null()) return std::nullopt;
  const std::string s = r.text(v, where);
  if (s == "ep1") return RegionBinding::at_ep1();
  if (s == "ep2") return RegionBinding::at_ep2();
  if (s.empty()) r.fail(where, "empty region name");
  return RegionBinding::named_region(s);
}

json binding_to_json(const std::optional<RegionBinding>& b) {
  if (!b) return nullptr;
  switch (b->kind) {
    case RegionBinding::Kind::ep1: return "ep1";
    case RegionBinding::Kind::ep2: return "ep2";
    case RegionBinding::Kind::named: return b->name;
  }
  return nullptr;
}

}  // namespace

ServiceRequest request_from_json(const json& doc, const PhysicalNetwork& net,
                                 const VsnfCatalog& catalog,
                                 const std::string& source) {
  const Reader r(source);
  r.object(doc, "document");
  ServiceRequest req;
  req.ep1 = node_ref(r, r.field(doc, "ep1", ""), "ep1", net);

  const json& jep2 = r.field(doc, "ep2", "");
  if (jep2.is_array()) {
    for (std::size_t i = 0; i < jep2.size(); ++i)
      req.ep2_set.push_back(node_ref(r, jep2[i], Reader::index("ep2", i), net));
  } else {
    req.ep2_set.push_back(node_ref(r, jep2, "ep2", net));
  }
  std::sort(req.ep2_set.begin(), req.ep2_set.end());
  req.ep2_set.erase(std::unique(req.ep2_set.begin(), req.ep2_set.end()),
                    req.ep2_set.end());

  if (const json* jv = r.optional_field(doc, "veto")) {
    r.array(*jv, "veto");
    for (std::size_t i = 0; i < jv->size(); ++i)
      req.veto.push_back(node_ref(r, (*jv)[i], Reader::index("veto", i), net));
    std::sort(req.veto.begin(), req.veto.end());
    req.veto.erase(std::unique(req.veto.begin(), req.veto.end()), req.veto.end());
  }

  const json& jchains = r.array(r.field(doc, "chains", ""), "chains");
  for (std::size_t c = 0; c < jchains.size(); ++c) {
    const std::string where = Reader::index("chains", c);
    const json& jc = r.object(jchains[c], where);
    Chain chain;
    chain.id = "c" + std::to_string(c + 1);
    if (const json* v = r.optional_field(jc, "id")) chain.id = r.text(*v, where + ".id");
    if (const json* v = r.optional_field(jc, "direction")) {
      const std::string d = r.text(*v, where + ".direction");
      if (d == "downstream")
        chain.direction = Direction::downstream;
      else if (d == "upstream")
        chain.direction = Direction::upstream;
      else
        r.fail(where + ".direction", "expected downstream or upstream");
    }
    chain.beta_req = r.number(r.field(jc, "bandwidth", where), where + ".bandwidth");
    chain.lambda_max =
        r.number(r.field(jc, "max_latency", where), where + ".max_latency");
    if (const json* v = r.optional_field(jc, "packet_size"))
      chain.sigma = r.number(*v, where + ".packet_size");
    if (const json* v = r.optional_field(jc, "external_latency"))
      chain.pi_external = r.number(*v, where + ".external_latency");

    if (const json* jv = r.optional_field(jc, "vsnfs")) {
      r.array(*jv, where + ".vsnfs");
      for (std::size_t p = 0; p < jv->size(); ++p) {
        const std::string vw = Reader::index(where + ".vsnfs", p);
        const json& item = (*jv)[p];
        VsnfSpec v;
        if (item.is_string()) {
          const VsnfSpec* known = catalog.find(item.get<std::string>());
          if (!known) r.fail(vw, "unknown VSNF '" + item.get<std::string>() + "'");
          v = *known;
        } else {
          r.object(item, vw);
          v.name = r.text(r.field(item, "name", vw), vw + ".name");
          const VsnfSpec* known = catalog.find(v.name);
          if (const json* g = r.optional_field(item, "gamma"))
            v.gamma_u = r.number(*g, vw + ".gamma");
          else if (known)
            v.gamma_u = known->gamma_u;
          else
            r.fail(vw + ".gamma", "missing field for a VSNF outside the catalog");
          if (const json* s = r.optional_field(item, "stateful"))
            v.stateful = r.boolean(*s, vw + ".stateful");
          else if (known)
            v.stateful = known->stateful;
          if (const json* b = r.optional_field(item, "region"))
            v.region = parse_binding(r, *b, vw + ".region");
        }
        chain.vsnfs.push_back(std::move(v));
      }
    }
    req.chains.push_back(std::move(chain));
  }

  if (const json* jg = r.optional_field(doc, "stateful_groups")) {
    r.array(*jg, "stateful_groups");
    for (std::size_t g = 0; g < jg->size(); ++g) {
      const std::string gw = Reader::index("stateful_groups", g);
      const json& members = r.array((*jg)[g], gw);
      StatefulGroup group;
      for (std::size_t i = 0; i < members.size(); ++i) {
        const std::string mw = Reader::index(gw, i);
        const json& m = r.object(members[i], mw);
        const std::string id = r.text(r.field(m, "chain", mw), mw + ".chain");
        auto it = std::find_if(req.chains.begin(), req.chains.end(),
                               [&](const Chain& ch) { return ch.id == id; });
        if (it == req.chains.end()) r.fail(mw + ".chain", "unknown chain '" + id + "'");
        const auto pos = r.integral(r.field(m, "position", mw), mw + ".position");
        if (pos < 0 || pos >= static_cast<std::int64_t>(it->vsnfs.size()))
          r.fail(mw + ".position", "position out of range");
        group.push_back({static_cast<std::size_t>(it - req.chains.begin()),
                         static_cast<std::size_t>(pos)});
      }
      std::sort(group.begin(), group.end());
      req.stateful_groups.push_back(std::move(group));
    }
  } else {
    req.stateful_groups = derive_stateful_groups(req.chains);
  }

  try {
    validate_request(req, net);
  } catch (const ConfigError& e) {
    r.fail("", e.what());
  }
  return req;
}

ServiceRequest parse_request(std::string_view text, const PhysicalNetwork& net,
                             const VsnfCatalog& catalog,
                             const std::string& source) {
  return request_from_json(parse_json(text, source), net, catalog, source);
}

ServiceRequest load_request(const std::filesystem::path& path,
                            const PhysicalNetwork& net,
                            const VsnfCatalog& catalog) {
  return parse_request(read_file(path), net, catalog, path.string());
}

json request_to_json(const ServiceRequest& req, const PhysicalNetwork& net) {
  auto names = [&](const std::vector<NodeId>& ids) {
    json out = json::array();
    for (NodeId n : ids) out.push_back(net.node(n).name);
    return out;
  };
  json doc;
  doc["ep1"] = net.node(req.ep1).name;
  doc["ep2"] = names(req.ep2_set);
  doc["veto"] = names(req.veto);
  json chains = json::array();
  for (const auto& c : req.chains) {
    json vs = json::array();
    for (const auto& v : c.vsnfs) {
      json jv{{"name", v.name}, {"gamma", v.gamma_u}, {"stateful", v.stateful}};
      if (v.region) jv["region"] = binding_to_json(v.region);
      vs.push_back(std::move(jv));
    }
    chains.push_back({{"id", c.id},
                      {"direction", c.direction == Direction::downstream
                                        ? "downstream"
                                        : "upstream"},
                      {"bandwidth", c.beta_req},
                      {"max_latency", c.lambda_max},
                      {"packet_size", c.sigma},
                      {"external_latency", c.pi_external},
                      {"vsnfs", std::move(vs)}});
  }
  doc["chains"] = std::move(chains);
  json groups = json::array();
  for (const auto& g : req.stateful_groups) {
    json members = json::array();
    for (const auto& ref : g)
      members.push_back(
          {{"chain", req.chains[ref.chain].id}, {"position", ref.position}});
    groups.push_back(std::move(members));
  }
  doc["stateful_groups"] = std::move(groups);
  return doc;
}

std::string dump_request(const ServiceRequest& req, const PhysicalNetwork& net) {
  return request_to_json(req, net).dump(2) + "\n";
}

json embedding_to_json(const Embedding& emb, const ServiceRequest& req,
                       const PhysicalNetwork& net) {
  json chains = json::array();
  for (std::size_t c = 0; c < emb.chains.size(); ++c) {
    const auto& ce = emb.chains[c];
    json hosts = json::array();
    for (NodeId h : ce.hosts) hosts.push_back(net.node(h).name);
    json routes = json::array();
    for (std::size_t s = 0; s < ce.routes.size(); ++s) {
      json nodes = json::array({net.node(ce.hosts[s]).name});
      for (ArcId a : ce.routes[s]) nodes.push_back(net.node(net.arc(a).head).name);
      routes.push_back(std::move(nodes));
    }
    chains.push_back({{"id", c < req.chains.size() ? req.chains[c].id : ""},
                      {"hosts", std::move(hosts)},
                      {"routes", std::move(routes)}});
  }
  return {{"chains", std::move(chains)}};
}

Embedding embedding_from_json(const json& doc, const ServiceRequest& req,
                              const PhysicalNetwork& net,
                              const std::string& source) {
  const Reader r(source);
  r.object(doc, "document");
  const json& jchains = r.array(r.field(doc, "chains", ""), "chains");
  if (jchains.size() != req.chains.size())
    r.fail("chains", "expected " + std::to_string(req.chains.size()) + " chains");
  Embedding emb;
  for (std::size_t c = 0; c < jchains.size(); ++c) {
    const std::string where = Reader::index("chains", c);
    const json& jc = r.object(jchains[c], where);
    ChainEmbedding ce;
    const json& jh = r.array(r.field(jc, "hosts", where), where + ".hosts");
    for (std::size_t i = 0; i < jh.size(); ++i)
      ce.hosts.push_back(node_ref(r, jh[i], Reader::index(where + ".hosts", i), net));
    const json& jr = r.array(r.field(jc, "routes", where), where + ".routes");
    for (std::size_t s = 0; s < jr.size(); ++s) {
      const std::string rw = Reader::index(where + ".routes", s);
      const json& nodes = r.array(jr[s], rw);
      if (nodes.empty()) r.fail(rw, "route needs at least one node");
      std::vector<ArcId> route;
      NodeId prev = node_ref(r, nodes[0], Reader::index(rw, 0), net);
      for (std::size_t i = 1; i < nodes.size(); ++i) {
        const NodeId next = node_ref(r, nodes[i], Reader::index(rw, i), net);
        auto arc = net.find_arc(prev, next);
        if (!arc) r.fail(Reader::index(rw, i), "nodes are not adjacent");
        route.push_back(*arc);
        prev = next;
      }
      ce.routes.push_back(std::move(route));
    }
    emb.chains.push_back(std::move(ce));
  }
  return emb;
}

json to_json(const RequestGenConfig& c) {
  return {{"min_chains", c.min_chains},
          {"max_chains", c.max_chains},
          {"min_vsnfs", c.min_vsnfs},
          {"max_vsnfs", c.max_vsnfs},
          {"min_bandwidth", c.min_bandwidth},
          {"max_bandwidth", c.max_bandwidth},
          {"latency_menu", c.latency_menu},
          {"packet_size", c.sigma},
          {"border_external_latency", c.border_pi},
          {"border_region", c.border_region},
          {"border_bias", c.border_bias},
          {"region_bind_probability", c.region_bind_probability},
          {"ep2_count", c.ep2_count},
          {"veto_region", c.veto_region}};
}

void update_from_json(const json& doc, RequestGenConfig& c) {
  const Reader r("<config>");
  r.object(doc, "request_gen");
  r.known_keys(doc, "request_gen",
               {"min_chains", "max_chains", "min_vsnfs", "max_vsnfs", "min_bandwidth",
                "max_bandwidth", "latency_menu", "packet_size", "border_external_latency",
                "border_region", "border_bias", "region_bind_probability", "ep2_count",
                "veto_region"});
  auto get = [&](const char* key, auto& dst) {
    if (const json* v = r.optional_field(doc, key)) {
      try {
        v->get_to(dst);
      } catch (const json::exception&) {
        r.fail(std::string("request_gen.") + key, "wrong type");
      }
    }
  };
  get("min_chains", c.min_chains);
  get("max_chains", c.max_chains);
  get("min_vsnfs", c.min_vsnfs);
  get("max_vsnfs", c.max_vsnfs);
  get("min_bandwidth", c.min_bandwidth);
  get("max_bandwidth", c.max_bandwidth);
  get("latency_menu", c.latency_menu);
  get("packet_size", c.sigma);
  get("border_external_latency", c.border_pi);
  get("border_region", c.border_region);
  get("border_bias", c.border_bias);
  get("region_bind_probability", c.region_bind_probability);
  get("ep2_count", c.ep2_count);
  get("veto_region", c.veto_region);
}

json to_json(const WorkloadConfig& c) {
  return {{"load_erlang", c.load_erlang},
          {"n_requests", c.n_requests},
          {"warmup", c.warmup},
          {"mean_holding", c.mean_holding},
          {"seed", c.seed},
          {"alpha", c.pess.params.alpha},
          {"delta", c.pess.params.delta},
          {"descending_scan", c.pess.descending_scan},
          {"expand_all_ep2", c.pess.expand_all_ep2},
          {"recheck", c.pess.recheck == RecheckScope::guard ? "guard" : "full"},
          {"request_gen", to_json(c.request_gen)}};
}

void update_from_json(const json& doc, WorkloadConfig& c) {
  const Reader r("<config>");
  r.object(doc, "workload");
  r.known_keys(doc, "workload",
               {"load_erlang", "n_requests", "warmup", "mean_holding", "seed", "alpha",
                "delta", "descending_scan", "expand_all_ep2", "recheck", "request_gen"});
  auto get = [&](const char* key, auto& dst) {
    if (const json* v = r.optional_field(doc, key)) {
      try {
        v->get_to(dst);
      } catch (const json::exception&) {
        r.fail(std::string("workload.") + key, "wrong type");
      }
    }
  };
  get("load_erlang", c.load_erlang);
  get("n_requests", c.n_requests);
  get("warmup", c.warmup);
  get("mean_holding", c.mean_holding);
  get("seed", c.seed);
  get("alpha", c.pess.params.alpha);
  get("delta", c.pess.params.delta);
  get("descending_scan", c.pess.descending_scan);
  get("expand_all_ep2", c.pess.expand_all_ep2);
  if (const json* v = r.optional_field(doc, "recheck")) {
    const std::string s = r.text(*v, "workload.recheck");
    if (s == "guard")
      c.pess.recheck = RecheckScope::guard;
    else if (s == "full")
      c.pess.recheck = RecheckScope::full;
    else
      r.fail("workload.recheck", "expected guard or full");
  }
  if (const json* v = r.optional_field(doc, "request_gen"))
    update_from_json(*v, c.request_gen);
}

std::string metrics_csv_header() {
  return std::string(kMetricsCsvSchema) +
         "\nsolver,load_erlang,seed,offered,accepted,rejected,"
         "rejected_no_route,rejected_infeasible,blocking_probability,"
         "consumed_cpu_fraction,active_services,mean_chain_latency,"
         "latency_samples,delay_ratio,stream_fingerprint,consumed_cpu_by_region\n";
}

std::string metrics_csv_row(const Metrics& m) {
  std::ostringstream o;
  o << to_string(m.solver) << ',' << format_double(m.load_erlang) << ','
    << m.seed << ',' << m.offered << ',' << m.accepted << ',' << m.rejected
    << ',' << m.rejected_no_route << ',' << m.rejected_infeasible << ','
    << format_double(m.blocking_probability) << ','
    << format_double(m.consumed_cpu_fraction) << ','
    << format_double(m.active_services) << ','
    << format_double(m.mean_chain_latency) << ',' << m.latency_samples << ','
    << (m.delay_ratio_vs ? format_double(*m.delay_ratio_vs) : "") << ','
    << m.stream_fingerprint << ',';
  bool first = true;
  for (const auto& [name, v] : m.consumed_cpu_by_region) {
    if (!first) o << ';';
    first = false;
    o << name << '=' << format_double(v);
  }
  o << '\n';
  return o.str();
}

std::string timing_csv_header() {
  return "solver,load_erlang,seed,samples,mean_s,p50_s,p95_s,p99_s,max_s\n";
}

std::string timing_csv_row(const Metrics& m) {
  const auto& t = m.embed_time;
  std::ostringstream o;
  o << to_string(m.solver) << ',' << format_double(m.load_erlang) << ','
    << m.seed << ',' << t.samples << ',' << format_double(t.mean) << ','
    << format_double(t.p50) << ',' << format_double(t.p95) << ','
    << format_double(t.p99) << ',' << format_double(t.max) << '\n';
  return o.str();
}

json to_json(const TimingStats& t) {
  return {{"samples", t.samples}, {"mean", t.mean}, {"p50", t.p50},
          {"p95", t.p95},         {"p99", t.p99},   {"max", t.max}};
}

json to_json(const Metrics& m) {
  json j{{"solver", to_string(m.solver)},
         {"load_erlang", m.load_erlang},
         {"seed", m.seed},
         {"offered", m.offered},
         {"accepted", m.accepted},
         {"rejected", m.rejected},
         {"rejected_no_route", m.rejected_no_route},
         {"rejected_infeasible", m.rejected_infeasible},
         {"blocking_probability", m.blocking_probability},
         {"consumed_cpu_fraction", m.consumed_cpu_fraction},
         {"consumed_cpu_by_region", m.consumed_cpu_by_region},
         {"active_services", m.active_services},
         {"mean_chain_latency", m.mean_chain_latency},
         {"latency_samples", m.latency_samples},
         {"stream_fingerprint", m.stream_fingerprint}};
  if (m.delay_ratio_vs) j["delay_ratio"] = *m.delay_ratio_vs;
  return j;
}

json to_json(const OverheadReport& r) {
  return {{"recorded", r.recorded},
          {"compared", r.compared},
          {"budget_skipped", r.budget_skipped},
          {"both_rejected", r.both_rejected},
          {"heuristic_only_rejected", r.heuristic_only_rejected},
          {"oracle_only_rejected", r.oracle_only_rejected},
          {"dominance_violations", r.dominance_violations},
          {"heuristic_infeasible", r.heuristic_infeasible},
          {"median_overhead", r.median_overhead},
          {"mean_overhead", r.mean_overhead},
          {"max_overhead", r.max_overhead}};
}

}  // namespace pess
