#pragma once

// Seeded random geometric topologies in the unit square, adjacency queries
// and the source-centred quadrant partition used to prune routing.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gradedroute/traffic.hpp"

namespace gradedroute {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Locally observed QoS metrics. Delay and congestion are derived during
/// grading and are not stored here.
struct QosInputs {
  double network_lifetime = 0.0;  // remaining lifetime, abstract units
  std::uint32_t node_density = 0; // packets arriving at the node
  bool resource_available = false;

  friend bool operator==(const QosInputs&, const QosInputs&) = default;
};

struct Node {
  NodeId id = 0;
  Point position;
  QosInputs qos;
};

struct Link {
  NodeId a = 0;
  NodeId b = 0;
  double capacity_mbps = 0.0;
  traffic::LinkState state;

  NodeId other(NodeId n) const noexcept { return n == a ? b : a; }
};

/// Parameters for populating a generated network: link capacity, the random
/// node metrics and the initial link-load state.
struct EnvironmentParams {
  double capacity_mbps = 30.0;
  double lifetime_max = 100.0;        // lifetime ~ U[0, lifetime_max]
  double resource_probability = 0.8;  // P(resource available)
  double arrival_rate = 0.3;          // external Poisson rate per node
  double arrival_horizon_s = 10.0;
  double max_initial_load = 30.0;     // T0 ~ U[0, max_initial_load] flows
  double max_flow_arrival_rate = 30.0;
  double service_rate = 1.0;
};

/// Immutable network instance. Node ids are dense (0..n-1) and equal to
/// their index; links are undirected with at most one per unordered pair.
class Topology {
 public:
  Topology() = default;
  /// Validates ids, positions, capacities and link uniqueness.
  Topology(std::uint64_t seed, std::vector<Node> nodes, std::vector<Link> links);

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::span<const Link> links() const noexcept { return links_; }

  const Node& node(NodeId id) const;
  const Link& link(LinkId id) const { return links_.at(id); }
  bool contains(NodeId id) const noexcept { return id < nodes_.size(); }

  /// Sorted neighbour ids. Throws std::invalid_argument for unknown nodes.
  std::span<const NodeId> neighbors(NodeId id) const;
  /// Ids of links incident to `id`, in the same order as neighbors(id).
  std::span<const LinkId> incident_links(NodeId id) const;
  std::optional<LinkId> link_between(NodeId a, NodeId b) const;

 private:
  static std::uint64_t key(NodeId a, NodeId b) noexcept;

  std::uint64_t seed_ = 0;
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::vector<LinkId>> incident_;
  std::unordered_map<std::uint64_t, LinkId> by_pair_;
};

/// Radius r at which two uniform points of the unit square are within r of
/// each other with probability `link_density`.
double radius_for_density(double link_density);

/// Probability that two uniform points of the unit square lie within `r`.
double pair_within_probability(double r);

/// Generates `n` uniform nodes, connects every pair closer than
/// radius_for_density(link_density), then links each isolated node to its
/// nearest neighbour. Node metrics and link states are drawn from
/// independent streams of `seed`. Pure in (n, link_density, seed, env).
Topology generate_topology(std::size_t n, double link_density, std::uint64_t seed,
                           const EnvironmentParams& env = {});

enum class Quadrant : std::uint8_t { Q1 = 1, Q2 = 2, Q3 = 3, Q4 = 4 };

std::string_view to_string(Quadrant q) noexcept;

/// Quadrant of `node` relative to `source`, using half-open angular sectors
/// [0, 90), [90, 180), [180, 270), [270, 360) degrees.
/// Throws CoincidentPointError when the points coincide.
Quadrant quadrant_of(Point source, Point node);

/// Nodes other than `source` lying in the destination's quadrant, sorted.
/// Always contains `destination`.
std::vector<NodeId> quadrant_candidates(const Topology& topology, NodeId source,
                                        NodeId destination);

}  // namespace gradedroute
