#include "gradedroute/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gradedroute/errors.hpp"

namespace gradedroute {

namespace {

constexpr std::uint64_t kPositionStream = 0;
constexpr std::uint64_t kQosStream = 1;
constexpr std::uint64_t kLinkStateStream = 2;

double squared_distance(Point p, Point q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return dx * dx + dy * dy;
}

}  // namespace

Topology::Topology(std::uint64_t seed, std::vector<Node> nodes, std::vector<Link> links)
    : seed_(seed), nodes_(std::move(nodes)), links_(std::move(links)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.id != i) {
      throw std::invalid_argument("topology: node ids must be dense and ordered, got " +
                                  std::to_string(n.id) + " at index " + std::to_string(i));
    }
    if (!(n.position.x >= 0.0 && n.position.x <= 1.0 && n.position.y >= 0.0 &&
          n.position.y <= 1.0)) {
      throw std::invalid_argument("topology: node " + std::to_string(i) +
                                  " lies outside the unit square");
    }
    if (!(n.qos.network_lifetime >= 0.0)) {
      throw std::invalid_argument("topology: negative lifetime on node " + std::to_string(i));
    }
  }
  adjacency_.resize(nodes_.size());
  incident_.resize(nodes_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (l.a >= nodes_.size() || l.b >= nodes_.size()) {
      throw std::invalid_argument("topology: link " + std::to_string(i) +
                                  " references an unknown node");
    }
    if (l.a == l.b) {
      throw std::invalid_argument("topology: self-loop on node " + std::to_string(l.a));
    }
    if (!(l.capacity_mbps > 0.0)) {
      throw std::invalid_argument("topology: link capacity must be positive");
    }
    traffic::validate(l.state);
    const auto [it, inserted] = by_pair_.emplace(key(l.a, l.b), static_cast<LinkId>(i));
    if (!inserted) {
      throw std::invalid_argument("topology: duplicate link " + std::to_string(l.a) + "-" +
                                  std::to_string(l.b));
    }
  }
  // Adjacency sorted by neighbour id so iteration order never depends on
  // link order.
  for (std::size_t i = 0; i < links_.size(); ++i) {
    adjacency_[links_[i].a].push_back(links_[i].b);
    adjacency_[links_[i].b].push_back(links_[i].a);
  }
  for (NodeId v = 0; v < nodes_.size(); ++v) {
    auto& adj = adjacency_[v];
    std::sort(adj.begin(), adj.end());
    incident_[v].reserve(adj.size());
    for (NodeId u : adj) {
      incident_[v].push_back(by_pair_.at(key(u, v)));
    }
  }
}

const Node& Topology::node(NodeId id) const {
  if (!contains(id)) {
    throw std::invalid_argument("topology: unknown node " + std::to_string(id));
  }
  return nodes_[id];
}

std::span<const NodeId> Topology::neighbors(NodeId id) const {
  if (!contains(id)) {
    throw std::invalid_argument("topology: unknown node " + std::to_string(id));
  }
  return adjacency_[id];
}

std::span<const LinkId> Topology::incident_links(NodeId id) const {
  if (!contains(id)) {
    throw std::invalid_argument("topology: unknown node " + std::to_string(id));
  }
  return incident_[id];
}

std::optional<LinkId> Topology::link_between(NodeId a, NodeId b) const {
  const auto it = by_pair_.find(key(a, b));
  if (it == by_pair_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::uint64_t Topology::key(NodeId a, NodeId b) noexcept {
  if (a > b) {
    std::swap(a, b);
  }
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

double pair_within_probability(double r) {
  if (r <= 0.0) {
    return 0.0;
  }
  if (r >= std::numbers::sqrt2) {
    return 1.0;
  }
  const double r2 = r * r;
  if (r <= 1.0) {
    return std::numbers::pi * r2 - 8.0 * r2 * r / 3.0 + r2 * r2 / 2.0;
  }
  return 1.0 / 3.0 - 2.0 * r2 - r2 * r2 / 2.0 +
         4.0 / 3.0 * (2.0 * r2 + 1.0) * std::sqrt(r2 - 1.0) +
         2.0 * r2 * (std::asin(1.0 / r) - std::acos(1.0 / r));
}

double radius_for_density(double link_density) {
  if (!(link_density > 0.0 && link_density <= 1.0)) {
    throw std::invalid_argument("link density must lie in (0, 1]");
  }
  if (link_density == 1.0) {
    return std::numbers::sqrt2;
  }
  // The CDF is increasing on [0, sqrt 2]; bisect to full precision.
  double lo = 0.0;
  double hi = std::numbers::sqrt2;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (pair_within_probability(mid) < link_density ? lo : hi) = mid;
  }
  return hi;
}

Topology generate_topology(std::size_t n, double link_density, std::uint64_t seed,
                           const EnvironmentParams& env) {
  if (n < 2) {
    throw std::invalid_argument("generate_topology: need at least 2 nodes");
  }
  if (n > std::numeric_limits<NodeId>::max()) {
    throw std::invalid_argument("generate_topology: node count too large");
  }
  const double radius = radius_for_density(link_density);

  std::vector<Node> nodes(n);
  {
    Rng rng = make_rng(seed, kPositionStream);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      nodes[i].id = static_cast<NodeId>(i);
      nodes[i].position.x = unit(rng);
      nodes[i].position.y = unit(rng);
    }
  }

  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<std::size_t> degree(n, 0);
  const double r2 = link_density == 1.0 ? std::numeric_limits<double>::infinity() : radius * radius;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (squared_distance(nodes[i].position, nodes[j].position) <= r2) {
        pairs.emplace_back(i, j);
        ++degree[i];
        ++degree[j];
      }
    }
  }
  // Isolated nodes get one link to their nearest node.
  for (NodeId i = 0; i < n; ++i) {
    if (degree[i] != 0) {
      continue;
    }
    NodeId best = i;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (NodeId j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      const double d2 = squared_distance(nodes[i].position, nodes[j].position);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = j;
      }
    }
    pairs.emplace_back(std::min(i, best), std::max(i, best));
    ++degree[i];
    ++degree[best];
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<Link> links;
  links.reserve(pairs.size());
  {
    Rng rng = make_rng(seed, kLinkStateStream);
    std::uniform_real_distribution<double> load(0.0, env.max_initial_load);
    std::uniform_real_distribution<double> rate(0.0, env.max_flow_arrival_rate);
    for (const auto& [a, b] : pairs) {
      Link l;
      l.a = a;
      l.b = b;
      l.capacity_mbps = env.capacity_mbps;
      l.state.initial_load = load(rng);
      l.state.arrival_rate = rate(rng);
      l.state.service_rate = env.service_rate;
      links.push_back(l);
    }
  }

  // Adjacency is needed for arrival routing, so build a provisional topology
  // first and fill in the node metrics afterwards.
  Topology skeleton(seed, nodes, links);
  {
    Rng rng = make_rng(seed, kQosStream);
    std::uniform_real_distribution<double> lifetime(0.0, env.lifetime_max);
    std::bernoulli_distribution resource(env.resource_probability);
    std::vector<std::uint32_t> density(n, 0);
    for (NodeId i = 0; i < n; ++i) {
      nodes[i].qos.network_lifetime = lifetime(rng);
      nodes[i].qos.resource_available = resource(rng);
    }
    for (NodeId i = 0; i < n; ++i) {
      const auto nbrs = skeleton.neighbors(i);
      traffic::ArrivalModel model;
      model.rate = env.arrival_rate;
      model.routing_probs.assign(nbrs.size(), 1.0 / static_cast<double>(nbrs.size()));
      const auto counts = traffic::sample_poisson_arrivals(model, env.arrival_horizon_s, rng);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        density[nbrs[k]] += counts[k];
      }
    }
    for (NodeId i = 0; i < n; ++i) {
      nodes[i].qos.node_density = density[i];
    }
  }
  return Topology(seed, std::move(nodes), std::move(links));
}

std::string_view to_string(Quadrant q) noexcept {
  switch (q) {
    case Quadrant::Q1:
      return "Q1";
    case Quadrant::Q2:
      return "Q2";
    case Quadrant::Q3:
      return "Q3";
    case Quadrant::Q4:
      return "Q4";
  }
  return "?";
}

Quadrant quadrant_of(Point source, Point node) {
  const double dx = node.x - source.x;
  const double dy = node.y - source.y;
  if (dx == 0.0 && dy == 0.0) {
    throw CoincidentPointError("quadrant_of: node coincides with source");
  }
  // Sign tests give the half-open sectors exactly, with no atan2 rounding
  // at the axes.
  if (dx > 0.0 && dy >= 0.0) {
    return Quadrant::Q1;
  }
  if (dx <= 0.0 && dy > 0.0) {
    return Quadrant::Q2;
  }
  if (dx < 0.0 && dy <= 0.0) {
    return Quadrant::Q3;
  }
  return Quadrant::Q4;
}

std::vector<NodeId> quadrant_candidates(const Topology& topology, NodeId source,
                                        NodeId destination) {
  if (!topology.contains(source) || !topology.contains(destination)) {
    throw std::invalid_argument("quadrant_candidates: unknown node");
  }
  if (source == destination) {
    throw std::invalid_argument("quadrant_candidates: source equals destination");
  }
  const Point origin = topology.node(source).position;
  const Quadrant target = quadrant_of(origin, topology.node(destination).position);
  std::vector<NodeId> out;
  for (const Node& n : topology.nodes()) {
    if (n.id == source) {
      continue;
    }
    if (n.id == destination) {
      out.push_back(n.id);
      continue;
    }
    if (n.position == origin) {
      continue;  // co-located with the source: belongs to no quadrant
    }
    if (quadrant_of(origin, n.position) == target) {
      out.push_back(n.id);
    }
  }
  return out;
}

}  // namespace gradedroute
