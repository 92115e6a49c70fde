#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gradedroute/errors.hpp"
#include "gradedroute/random.hpp"
#include "gradedroute/topology.hpp"
#include "oracles.hpp"

using namespace gradedroute;

namespace {

Topology square() {
  std::vector<Node> nodes{{0, {0.5, 0.5}, {}}, {1, {0.9, 0.9}, {}}, {2, {0.1, 0.9}, {}},
                          {3, {0.1, 0.1}, {}}, {4, {0.9, 0.1}, {}}, {5, {0.8, 0.7}, {}}};
  std::vector<Link> links{{0, 1, 30, {}}, {0, 5, 30, {}}, {1, 5, 30, {}}, {2, 3, 30, {}}};
  return Topology(7, nodes, links);
}

}  // namespace

TEST(Radius, CdfMatchesMonteCarlo) {
  Rng rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (double r : {0.1, 0.3, 0.7, 1.2}) {
    int hits = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double dx = u(rng) - u(rng), dy = u(rng) - u(rng);
      hits += dx * dx + dy * dy <= r * r;
    }
    EXPECT_NEAR(pair_within_probability(r), static_cast<double>(hits) / n, 0.004) << r;
  }
  EXPECT_DOUBLE_EQ(pair_within_probability(0), 0.0);
  EXPECT_NEAR(pair_within_probability(std::sqrt(2.0)), 1.0, 1e-12);
}

TEST(Radius, InvertsCdf) {
  for (double d : {0.05, 0.3, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(pair_within_probability(radius_for_density(d)), d, 1e-9);
  }
  EXPECT_THROW(radius_for_density(0.0), std::invalid_argument);
  EXPECT_THROW(radius_for_density(1.1), std::invalid_argument);
}

TEST(Generate, ShapeAndDeterminism) {
  const Topology a = generate_topology(64, 0.3, 42);
  const Topology b = generate_topology(64, 0.3, 42);
  ASSERT_EQ(a.size(), 64u);
  ASSERT_EQ(a.links().size(), b.links().size());
  for (std::size_t i = 0; i < a.links().size(); ++i) {
    EXPECT_EQ(a.links()[i].a, b.links()[i].a);
    EXPECT_EQ(a.links()[i].b, b.links()[i].b);
    EXPECT_EQ(a.links()[i].state.initial_load, b.links()[i].state.initial_load);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.nodes()[i].position, b.nodes()[i].position);
    EXPECT_EQ(a.nodes()[i].qos, b.nodes()[i].qos);
  }
  const Topology c = generate_topology(64, 0.3, 43);
  EXPECT_FALSE(c.nodes()[0].position == a.nodes()[0].position);
}

TEST(Generate, NoIsolatedNodes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Topology t = generate_topology(40, 0.01, seed);
    for (NodeId i = 0; i < t.size(); ++i) {
      EXPECT_FALSE(t.neighbors(i).empty());
    }
  }
}

TEST(Generate, RealisedDensityNearTarget) {
  double total = 0;
  const int reps = 20;
  for (int s = 0; s < reps; ++s) {
    const Topology t = generate_topology(200, 0.3, s);
    total += static_cast<double>(t.links().size()) / (200.0 * 199.0 / 2.0);
  }
  EXPECT_NEAR(total / reps, 0.3, 0.02);
}

TEST(Generate, FullDensityIsComplete) {
  const Topology t = generate_topology(12, 1.0, 3);
  EXPECT_EQ(t.links().size(), 66u);
}

TEST(Generate, RejectsTinyNetworks) {
  EXPECT_THROW(generate_topology(1, 0.3, 1), std::invalid_argument);
  EXPECT_THROW(generate_topology(0, 0.3, 1), std::invalid_argument);
}

TEST(Generate, MetricsInRange) {
  const Topology t = generate_topology(100, 0.3, 8);
  for (const Node& n : t.nodes()) {
    EXPECT_GE(n.qos.network_lifetime, 0.0);
    EXPECT_LE(n.qos.network_lifetime, 100.0);
    EXPECT_GE(n.position.x, 0.0);
    EXPECT_LE(n.position.x, 1.0);
  }
  for (const Link& l : t.links()) {
    EXPECT_DOUBLE_EQ(l.capacity_mbps, 30.0);
    EXPECT_GE(l.state.initial_load, 0.0);
    EXPECT_LE(l.state.initial_load, 30.0);
  }
}

TEST(TopologyClass, Queries) {
  const Topology t = square();
  EXPECT_EQ(std::vector<NodeId>(t.neighbors(0).begin(), t.neighbors(0).end()),
            (std::vector<NodeId>{1, 5}));
  EXPECT_TRUE(t.link_between(5, 1).has_value());
  EXPECT_FALSE(t.link_between(0, 2).has_value());
  EXPECT_THROW(t.neighbors(9), std::invalid_argument);
  const auto inc = t.incident_links(0);
  EXPECT_EQ(t.link(inc[1]).other(0), 5u);
}

TEST(TopologyClass, Validation) {
  std::vector<Node> nodes{{0, {0.1, 0.1}, {}}, {1, {0.2, 0.2}, {}}};
  EXPECT_THROW(Topology(0, nodes, {{0, 0, 30, {}}}), std::invalid_argument);
  EXPECT_THROW(Topology(0, nodes, {{0, 1, 30, {}}, {1, 0, 30, {}}}), std::invalid_argument);
  EXPECT_THROW(Topology(0, nodes, {{0, 1, 0, {}}}), std::invalid_argument);
  EXPECT_THROW(Topology(0, nodes, {{0, 2, 30, {}}}), std::invalid_argument);
  nodes[1].id = 5;
  EXPECT_THROW(Topology(0, nodes, {}), std::invalid_argument);
}

TEST(Quadrant, HalfOpenSectors) {
  const Point o{0.5, 0.5};
  EXPECT_EQ(quadrant_of(o, {0.9, 0.5}), Quadrant::Q1);   // 0 degrees
  EXPECT_EQ(quadrant_of(o, {0.5, 0.9}), Quadrant::Q2);   // 90
  EXPECT_EQ(quadrant_of(o, {0.1, 0.5}), Quadrant::Q3);   // 180
  EXPECT_EQ(quadrant_of(o, {0.5, 0.1}), Quadrant::Q4);   // 270
  EXPECT_EQ(quadrant_of(o, {0.6, 0.6}), Quadrant::Q1);
  EXPECT_EQ(quadrant_of(o, {0.4, 0.6}), Quadrant::Q2);
  EXPECT_EQ(quadrant_of(o, {0.4, 0.4}), Quadrant::Q3);
  EXPECT_EQ(quadrant_of(o, {0.6, 0.4}), Quadrant::Q4);
  EXPECT_THROW(quadrant_of(o, o), CoincidentPointError);
}

TEST(Quadrant, AgreesWithAngles) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 10000; ++i) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
    EXPECT_EQ(static_cast<int>(quadrant_of(a, b)), oracle::quadrant_by_angle(a, b));
  }
}

TEST(Quadrant, Candidates) {
  const Topology t = square();
  EXPECT_EQ(quadrant_candidates(t, 0, 1), (std::vector<NodeId>{1, 5}));
  EXPECT_EQ(quadrant_candidates(t, 0, 3), (std::vector<NodeId>{3}));
  EXPECT_THROW(quadrant_candidates(t, 0, 0), std::invalid_argument);
  EXPECT_THROW(quadrant_candidates(t, 0, 17), std::invalid_argument);
}
