#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "pess/io.hpp"
#include "support.hpp"

using namespace pess;
namespace t = pess::testing;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() {
  const char* d = std::getenv("PESS_DATA_DIR");
  return d ? fs::path(d) : fs::path("data");
}

template <class F>
ParseError parse_error_of(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no ParseError");
  return ParseError("", 0, 0, "", "");
}

}  // namespace

TEST_CASE("format_double round-trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-6) == "1e-06");
  CHECK(format_double(3.0) == "3");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("topology document with defaults, distances and regions") {
  const auto net = parse_topology(R"({
    "format": "pess-topology/1",
    "defaults": {"gamma": 1000, "queuing_budget": 0.001, "bandwidth": 500},
    "nodes": ["a", {"name": "b", "gamma": 2000}, "c"],
    "links": [
      {"a": "a", "b": "b", "distance_km": 100},
      {"a": 1, "b": "c", "delay": 0.002, "bandwidth": 700}
    ],
    "regions": {"dc": ["c", "a"]}
  })");
  REQUIRE(net.num_nodes() == 3);
  CHECK(net.node(0).gamma_nominal == 1000);
  CHECK(net.node(1).gamma_nominal == 2000);
  CHECK(net.node(2).queuing_budget == 0.001);
  CHECK(net.link(0).lambda_prop == 5e-4);
  CHECK(net.link(0).beta_nominal == 500);
  CHECK(net.link(1).beta_nominal == 700);
  CHECK(net.link(1).lambda_prop == 0.002);
  const auto dc = net.region("dc");
  CHECK(std::vector<NodeId>(dc.begin(), dc.end()) == std::vector<NodeId>{0, 2});

  const auto again = parse_topology(dump_topology(net));
  CHECK(topology_to_json(again) == topology_to_json(net));
}

TEST_CASE("syntax errors carry line and column") {
  const auto e = parse_error_of([] { parse_topology("{\n  \"nodes\": [\n    \"a\",,\n  ]\n}", "bad.json"); });
  CHECK(e.source() == "bad.json");
  CHECK(e.line() == 3);
  CHECK(e.column() > 0);
  CHECK(std::string(e.what()).rfind("bad.json:3:", 0) == 0);
}

TEST_CASE("semantic errors name the offending field") {
  auto loc = [](const char* text) {
    return parse_error_of([&] { parse_topology(text); }).location();
  };
  CHECK(loc(R"({"nodes": ["a", "b"], "links": [{"a": "a", "b": "zz"}]})") == "links[0].b");
  CHECK(loc(R"({"nodes": ["a", "b"], "links": [{"a": "a", "b": "b", "delay": -1}]})") ==
        "links[0].delay");
  CHECK(loc(R"({"nodes": ["a", 5], "links": []})") == "nodes[1]");
  CHECK(loc(R"({"links": []})") == "nodes");
  CHECK(loc(R"({"nodes": ["a"], "links": [], "regions": {"r": ["q"]}})") == "regions.r[0]");
  CHECK(loc(R"({"format": "other/2", "nodes": ["a"], "links": []})") == "format");
  CHECK_THROWS_AS(parse_topology(R"({"nodes": ["a", "b", "c"], "links": [{"a": "a", "b": "b"}]})"),
                  ParseError);
}

TEST_CASE("request documents") {
  const auto net = t::make_network({{"A"}, {"B"}, {"C"}}, {{"A", "B"}, {"B", "C"}},
                                   {{"dc", {2}}});
  const auto cat = builtin_catalog();
  const auto req = parse_request(R"({
    "ep1": "A",
    "ep2": ["C", "B"],
    "veto": ["B"],
    "chains": [
      {"id": "x", "bandwidth": 1e6, "max_latency": 0.1,
       "vsnfs": ["snort", {"name": "custom", "gamma": 3.5, "region": "dc"}]},
      {"id": "y", "direction": "upstream", "bandwidth": 2e6, "max_latency": 0.2,
       "packet_size": 12000, "external_latency": 0.01, "vsnfs": ["snort"]}
    ]
  })", net, cat);
  CHECK(req.ep1 == 0);
  CHECK(req.ep2_set == std::vector<NodeId>{1, 2});
  CHECK(req.veto == std::vector<NodeId>{1});
  REQUIRE(req.chains.size() == 2);
  CHECK(req.chains[0].vsnfs[0].gamma_u == 9.5);
  CHECK(req.chains[0].vsnfs[1].gamma_u == 3.5);
  CHECK(req.chains[0].vsnfs[1].region == RegionBinding::named_region("dc"));
  CHECK(req.chains[1].direction == Direction::upstream);
  CHECK(req.chains[1].sigma == 12000);
  CHECK(req.chains[1].pi_external == 0.01);
  CHECK(req.stateful_groups == derive_stateful_groups(req.chains));

  CHECK(parse_request(dump_request(req, net), net, cat) == req);

  auto loc = [&](const char* text) {
    return parse_error_of([&] { parse_request(text, net, cat); }).location();
  };
  CHECK(loc(R"({"ep1": "A", "ep2": "C", "chains": [{"bandwidth": 1, "max_latency": 1, "vsnfs": ["nope"]}]})") ==
        "chains[0].vsnfs[0]");
  CHECK(loc(R"({"ep1": "A", "ep2": "C", "chains": [{"max_latency": 1}]})") == "chains[0].bandwidth");
  CHECK(loc(R"({"ep1": "Q", "ep2": "C", "chains": []})") == "ep1");
  CHECK_THROWS_AS(parse_request(R"({"ep1": "A", "ep2": [], "chains": []})", net, cat), ParseError);
}

TEST_CASE("embedding documents round-trip") {
  const auto net = t::make_network({{"A"}, {"B"}, {"C"}}, {{"A", "B"}, {"B", "C"}});
  const auto req = t::request(0, {2}, {t::chain("c", {t::vsnf("x", 1)}, 1e6, 0.1)});
  Embedding emb{{ChainEmbedding{{0, 1, 2}, {{*net.find_arc(0, 1)}, {*net.find_arc(1, 2)}}}}};
  const auto doc = embedding_to_json(emb, req, net);
  CHECK(doc["chains"][0]["hosts"] == nlohmann::json({"A", "B", "C"}));
  CHECK(embedding_from_json(doc, req, net) == emb);
  auto broken = doc;
  broken["chains"][0]["routes"][0] = {"A", "C"};
  CHECK_THROWS_AS(embedding_from_json(broken, req, net), ParseError);
}

TEST_CASE("workload config sections") {
  WorkloadConfig cfg;
  cfg.load_erlang = 321;
  cfg.request_gen.max_chains = 3;
  cfg.pess.descending_scan = true;
  const auto doc = to_json(cfg);
  WorkloadConfig back;
  update_from_json(doc, back);
  CHECK(back.load_erlang == 321);
  CHECK(back.request_gen.max_chains == 3);
  CHECK(back.pess.descending_scan);
  CHECK(to_json(back) == doc);

  WorkloadConfig partial;
  update_from_json(nlohmann::json{{"warmup", 10}}, partial);
  CHECK(partial.warmup == 10);
  CHECK(partial.n_requests == WorkloadConfig{}.n_requests);
  CHECK_THROWS(update_from_json(nlohmann::json{{"warmupp", 10}}, partial));
}

TEST_CASE("metrics rows follow the header") {
  Metrics m;
  m.load_erlang = 1000;
  m.offered = 10;
  m.accepted = 9;
  m.rejected = 1;
  m.consumed_cpu_by_region = {{"border", 0.25}, {"veto", 0.5}};
  const auto header = metrics_csv_header();
  const auto row = metrics_csv_row(m);
  auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(commas(header) == commas(row));
  CHECK(row.find("border=0.25;veto=0.5") != std::string::npos);
  CHECK(commas(timing_csv_header()) == commas(timing_csv_row(m)));
  CHECK(to_json(m)["accepted"] == 9);
}

TEST_CASE("atomic write replaces the file") {
  const auto p = fs::temp_directory_path() / "pess_io_atomic.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  CHECK(read_file(p) == "two");
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));
  fs::remove(p);
  CHECK_THROWS(read_file(p));
}

TEST_CASE("bundled research topologies") {
  const auto garr = load_topology(data_dir() / "topologies" / "garr.json");
  CHECK(garr.num_nodes() == 46);
  CHECK(garr.num_links() == 83);
  std::vector<std::string> border;
  for (NodeId n : garr.region("border")) border.push_back(garr.node(n).name);
  std::sort(border.begin(), border.end());
  CHECK(border == std::vector<std::string>{"FI1", "MI2", "PD2", "RM2", "TO1"});
  for (const auto& l : garr.links()) CHECK(l.lambda_prop > 0);

  const auto stanford = load_topology(data_dir() / "topologies" / "stanford.json");
  CHECK(stanford.num_nodes() == 26);
  CHECK(stanford.num_links() == 46);
  for (const auto& l : stanford.links()) CHECK(l.lambda_prop == 0.0);
  for (const auto& n : stanford.nodes()) CHECK(n.queuing_budget == doctest::Approx(3.2e-4));
  CHECK(stanford.region("border").size() == 2);

  const auto cat = builtin_catalog();
  const auto cctv = load_request(data_dir() / "requests" / "cctv.json", garr, cat);
  CHECK(cctv.chains.size() == 3);
  CHECK(cctv.ep2_set.size() == 5);
  CHECK_FALSE(cctv.stateful_groups.empty());
  CHECK_NOTHROW(load_request(data_dir() / "requests" / "campus_vpn.json", stanford, cat));
}
