#include <set>
#include <stdexcept>

#include "doctest.h"
#include "pess/topology.hpp"
#include "support.hpp"

using namespace pess;
using pess::testing::make_network;

TEST_CASE("propagation delay hand values") {
  CHECK(propagation_delay(100.0) == 5.0e-4);
  CHECK(propagation_delay(10.0) == doctest::Approx(5.0e-5).epsilon(1e-15));
  CHECK(propagation_delay(0.0) == 0.0);
  CHECK_THROWS_AS(propagation_delay(-1.0), std::invalid_argument);
}

TEST_CASE("propagation delay is additive") {
  for (double a : {0.0, 1.5, 10.0, 37.25, 100.0})
    for (double b : {0.0, 2.0, 55.5, 99.0})
      CHECK(std::abs(propagation_delay(a + b) -
                     (propagation_delay(a) + propagation_delay(b))) <= 1e-15);
}

TEST_CASE("node profiles") {
  const auto d = default_node_profile();
  CHECK(d.gamma_nominal == 67'200'000'000);
  CHECK(d.queuing_budget == doctest::Approx(9.6e-4).epsilon(1e-12));
  const auto s = stanford_node_profile();
  CHECK(s.queuing_budget == doctest::Approx(3.2e-4).epsilon(1e-12));
}

namespace {

bool connected(const PhysicalNetwork& net) {
  std::vector<char> seen(net.num_nodes(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const auto& l : net.links()) {
      NodeId v = -1;
      if (l.a == u) v = l.b;
      if (l.b == u) v = l.a;
      if (v >= 0 && !seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == net.num_nodes();
}

}  // namespace

TEST_CASE("Barabasi-Albert edge count and connectivity") {
  struct Case {
    int n, m;
    std::size_t edges;
  };
  for (auto [n, m, edges] : {Case{20, 2, 36}, Case{1000, 5, 4975}, Case{2, 1, 1},
                             Case{8, 2, 12}, Case{50, 3, 141}}) {
    BarabasiAlbertConfig cfg;
    cfg.n_nodes = n;
    cfg.m = m;
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      cfg.seed = seed;
      const auto net = generate_barabasi_albert(cfg);
      CHECK(net.num_nodes() == static_cast<std::size_t>(n));
      CHECK(net.num_links() == edges);
      CHECK(net.num_links() == static_cast<std::size_t>(m * n - m * m));
      CHECK(connected(net));
    }
  }
}

TEST_CASE("Barabasi-Albert delays, determinism and bad parameters") {
  BarabasiAlbertConfig cfg;
  cfg.seed = 7;
  const auto a = generate_barabasi_albert(cfg);
  const auto b = generate_barabasi_albert(cfg);
  REQUIRE(a.num_links() == b.num_links());
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (std::size_t i = 0; i < a.num_links(); ++i) {
    const auto& la = a.link(static_cast<LinkId>(i));
    const auto& lb = b.link(static_cast<LinkId>(i));
    CHECK(la.a == lb.a);
    CHECK(la.b == lb.b);
    CHECK(la.lambda_prop == lb.lambda_prop);
    CHECK(la.lambda_prop >= propagation_delay(10.0));
    CHECK(la.lambda_prop <= propagation_delay(100.0));
    CHECK(la.beta_nominal == 10'000'000'000);
    CHECK(pairs.insert(std::minmax(la.a, la.b)).second);
  }
  cfg.seed = 8;
  const auto c = generate_barabasi_albert(cfg);
  bool differs = false;
  for (std::size_t i = 0; i < c.num_links(); ++i)
    differs = differs || c.link(static_cast<LinkId>(i)).lambda_prop !=
                             a.link(static_cast<LinkId>(i)).lambda_prop;
  CHECK(differs);

  cfg.n_nodes = 3;
  cfg.m = 3;
  CHECK_THROWS_AS(generate_barabasi_albert(cfg), TopologyError);
  cfg.m = 0;
  CHECK_THROWS_AS(generate_barabasi_albert(cfg), TopologyError);
}

TEST_CASE("arcs come in reverse pairs with independent ids") {
  const auto net = make_network({{"A"}, {"B"}, {"C"}}, {{"A", "B"}, {"B", "C"}});
  CHECK(net.num_arcs() == 4);
  const auto ab = net.find_arc(0, 1);
  const auto ba = net.find_arc(1, 0);
  REQUIRE(ab);
  REQUIRE(ba);
  CHECK(PhysicalNetwork::reverse(*ab) == *ba);
  CHECK(net.arc(*ab).tail == 0);
  CHECK(net.arc(*ab).head == 1);
  CHECK_FALSE(net.find_arc(0, 2));
  CHECK(net.out_arcs(1).size() == 2);
  CHECK(net.find_node("C") == 2);
  CHECK_FALSE(net.find_node("Z"));
  CHECK(net.total_gamma() == 3 * 67'200'000'000LL);
}

TEST_CASE("construction rejects invalid networks") {
  using pess::testing::LinkSpec;
  using pess::testing::NodeSpec;
  CHECK_THROWS_AS(make_network({{"A"}, {"B"}, {"C"}}, {{"A", "B"}}), TopologyError);
  CHECK_THROWS_AS(make_network({{"A"}, {"B"}}, {{"A", "A"}}), TopologyError);
  CHECK_THROWS_AS(make_network({{"A"}, {"B"}}, {{"A", "B"}, {"B", "A"}}),
                  TopologyError);
  CHECK_THROWS_AS(make_network({NodeSpec{"A", 0}, {"B"}}, {{"A", "B"}}),
                  TopologyError);
  CHECK_THROWS_AS(make_network({NodeSpec{"A", 1, -1.0}, {"B"}}, {{"A", "B"}}),
                  TopologyError);
  CHECK_THROWS_AS(make_network({{"A"}, {"B"}}, {LinkSpec{"A", "B", 0}}),
                  TopologyError);
  CHECK_THROWS_AS(make_network({{"A"}, {"B"}}, {LinkSpec{"A", "B", 1, -1e-3}}),
                  TopologyError);
  CHECK_THROWS_AS(make_network({{"A"}, {"A"}}, {{"A", "A"}}), TopologyError);
  CHECK_THROWS_AS(make_network({{"A"}, {"B"}}, {{"A", "B"}}, {{"border", {}}}),
                  TopologyError);
  CHECK_THROWS_AS(make_network({{"A"}, {"B"}}, {{"A", "B"}}, {{"border", {5}}}),
                  TopologyError);
}

TEST_CASE("regions are sorted, deduplicated and queryable") {
  const auto net = make_network({{"A"}, {"B"}, {"C"}}, {{"A", "B"}, {"B", "C"}},
                                {{"border", {2, 0, 2}}});
  const auto border = net.region("border");
  REQUIRE(border.size() == 2);
  CHECK(border[0] == 0);
  CHECK(border[1] == 2);
  CHECK(net.in_region("border", 2));
  CHECK_FALSE(net.in_region("border", 1));
  CHECK(net.region("missing").empty());
  CHECK_FALSE(net.in_region("missing", 0));
}

TEST_CASE("smallest network") {
  const auto net = make_network({{"A"}, {"B"}}, {{"A", "B", 10'000'000'000, 0.0}});
  CHECK(net.num_links() == 1);
  CHECK(net.link(0).beta_nominal == 10'000'000'000);
  const auto single = make_network({{"A"}}, {});
  CHECK(single.num_nodes() == 1);
}
