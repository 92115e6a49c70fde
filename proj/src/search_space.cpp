#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "gradedroute/errors.hpp"
#include "gradedroute/optimizers.hpp"
#include "search_detail.hpp"

namespace gradedroute {

namespace {

constexpr double kDirectHopProbability = 0.5;
constexpr int kRegrowAttempts = 3;

// Randomised DFS from `from` to `to`. `visited` marks nodes that may not be
// entered; it is updated in place. `avoid` is excluded as the first hop.
std::optional<std::vector<NodeId>> dfs_walk(const SearchGraph& graph, NodeId from, NodeId to,
                                            std::vector<bool>& visited, Rng& rng,
                                            std::optional<NodeId> avoid) {
  struct Frame {
    NodeId node;
    std::vector<NodeId> order;
    std::size_t next = 0;
  };
  std::bernoulli_distribution direct(kDirectHopProbability);
  auto expand = [&](NodeId u) {
    Frame f{u, {}, 0};
    const auto nbrs = graph.neighbors(u);
    f.order.assign(nbrs.begin(), nbrs.end());
    std::shuffle(f.order.begin(), f.order.end(), rng);
    const auto it = std::find(f.order.begin(), f.order.end(), to);
    if (it != f.order.end() && direct(rng)) {
      std::iter_swap(f.order.begin(), it);
    }
    return f;
  };

  if (from == to) {
    return std::vector<NodeId>{from};
  }
  visited[from] = true;
  std::vector<Frame> stack;
  stack.push_back(expand(from));
  if (avoid) {
    std::erase(stack.back().order, *avoid);
  }
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.node == to) {
      std::vector<NodeId> out;
      out.reserve(stack.size());
      for (const Frame& f : stack) {
        out.push_back(f.node);
      }
      return out;
    }
    NodeId next = 0;
    bool found = false;
    while (top.next < top.order.size()) {
      const NodeId candidate = top.order[top.next++];
      if (!visited[candidate]) {
        next = candidate;
        found = true;
        break;
      }
    }
    if (!found) {
      stack.pop_back();
      continue;
    }
    visited[next] = true;
    stack.push_back(expand(next));
  }
  return std::nullopt;
}

}  // namespace

SearchGraph::SearchGraph(const Topology& topology, std::span<const NodeId> members)
    : topology_(&topology), member_(topology.size(), false), adjacency_(topology.size()) {
  for (NodeId id : members) {
    if (!topology.contains(id)) {
      throw std::invalid_argument("search graph: unknown node " + std::to_string(id));
    }
    if (!member_[id]) {
      member_[id] = true;
      members_.push_back(id);
    }
  }
  std::sort(members_.begin(), members_.end());
  for (NodeId id : members_) {
    for (NodeId nb : topology.neighbors(id)) {
      if (member_[nb]) {
        adjacency_[id].push_back(nb);
      }
    }
  }
}

SearchGraph SearchGraph::for_route(const Topology& topology, const grading::KnowledgeBase& kb,
                                   grading::SelectionMode mode, NodeId source,
                                   NodeId destination) {
  const std::vector<NodeId> quadrant = quadrant_candidates(topology, source, destination);
  if (kb.records().size() != topology.size()) {
    throw StateError("search graph: knowledge base does not match topology");
  }
  std::vector<NodeId> members{source, destination};
  for (NodeId id : quadrant) {
    if (grading::is_selected(kb.record(id).priority, mode)) {
      members.push_back(id);
    }
  }
  return SearchGraph(topology, members);
}

std::span<const NodeId> SearchGraph::neighbors(NodeId id) const {
  if (id >= adjacency_.size()) {
    throw std::invalid_argument("search graph: unknown node " + std::to_string(id));
  }
  return adjacency_[id];
}

std::optional<std::string> check_path(const Path& path, const SearchGraph& graph, NodeId source,
                                      NodeId destination) {
  const auto& v = path.nodes;
  if (v.size() < 2) {
    return "path has fewer than two nodes";
  }
  if (v.front() != source || v.back() != destination) {
    return "path endpoints do not match the route";
  }
  std::vector<bool> seen(graph.topology().size(), false);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!graph.contains(v[i])) {
      return "node " + std::to_string(v[i]) + " is outside the search graph";
    }
    if (seen[v[i]]) {
      return "node " + std::to_string(v[i]) + " repeats";
    }
    seen[v[i]] = true;
    if (i > 0 && !graph.topology().link_between(v[i - 1], v[i])) {
      return "nodes " + std::to_string(v[i - 1]) + " and " + std::to_string(v[i]) +
             " are not adjacent";
    }
  }
  return std::nullopt;
}

std::optional<Path> random_path(const SearchGraph& graph, NodeId source, NodeId destination,
                                Rng& rng) {
  if (!graph.contains(source) || !graph.contains(destination)) {
    return std::nullopt;
  }
  std::vector<bool> visited(graph.topology().size(), false);
  auto nodes = dfs_walk(graph, source, destination, visited, rng, std::nullopt);
  if (!nodes || nodes->size() < 2) {
    return std::nullopt;
  }
  return Path{std::move(*nodes)};
}

std::optional<Path> regrow_suffix(const Path& path, std::size_t cut, const SearchGraph& graph,
                                  Rng& rng, std::optional<NodeId> avoid) {
  if (path.nodes.size() < 2 || cut + 1 >= path.nodes.size()) {
    return std::nullopt;
  }
  std::vector<bool> visited(graph.topology().size(), false);
  for (std::size_t i = 0; i < cut; ++i) {
    visited[path.nodes[i]] = true;
  }
  auto tail = dfs_walk(graph, path.nodes[cut], path.nodes.back(), visited, rng, avoid);
  if (!tail) {
    return std::nullopt;
  }
  Path out;
  out.nodes.assign(path.nodes.begin(), path.nodes.begin() + static_cast<std::ptrdiff_t>(cut));
  out.nodes.insert(out.nodes.end(), tail->begin(), tail->end());
  return out;
}

Path neighbor_path(const Path& path, const SearchGraph& graph, Rng& rng) {
  if (path.nodes.size() < 2) {
    return path;
  }
  std::uniform_int_distribution<std::size_t> cut_at(0, path.nodes.size() - 2);
  for (int attempt = 0; attempt < kRegrowAttempts; ++attempt) {
    if (auto grown = regrow_suffix(path, cut_at(rng), graph, rng)) {
      return std::move(*grown);
    }
  }
  return path;
}

Fitness path_fitness(const Path& path, const RouteProblem& problem) {
  if (auto err = check_path(path, problem.graph, problem.source, problem.destination)) {
    throw std::invalid_argument("path_fitness: " + *err);
  }
  const Topology& topo = problem.graph.topology();
  double bottleneck = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    const LinkId l = *topo.link_between(path.nodes[i - 1], path.nodes[i]);
    bottleneck = std::min(bottleneck, problem.kb.link_available_mbps(l));
  }
  if (bottleneck < problem.min_link_mbps) {
    return Fitness{0.0, false};
  }
  return Fitness{bottleneck, true};
}

std::size_t roulette_select(std::span<const double> weights, Rng& rng) {
  if (weights.empty()) {
    throw std::invalid_argument("roulette_select: no candidates");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("roulette_select: weights must be non-negative");
    }
    total += w;
  }
  if (total == 0.0) {
    std::uniform_int_distribution<std::size_t> pick(0, weights.size() - 1);
    return pick(rng);
  }
  std::discrete_distribution<std::size_t> wheel(weights.begin(), weights.end());
  return wheel(rng);
}

Path excise_loops(const Path& path) {
  Path out;
  std::unordered_map<NodeId, std::size_t> position;
  for (NodeId v : path.nodes) {
    if (const auto it = position.find(v); it != position.end()) {
      // Cut back to the first occurrence, forgetting the removed nodes.
      for (std::size_t i = it->second + 1; i < out.nodes.size(); ++i) {
        position.erase(out.nodes[i]);
      }
      out.nodes.resize(it->second + 1);
      continue;
    }
    position.emplace(v, out.nodes.size());
    out.nodes.push_back(v);
  }
  return out;
}

std::pair<Path, Path> modified_crossover(const Path& a, const Path& b, Rng& rng) {
  if (a.nodes.size() < 2 || b.nodes.size() < 2 || a.nodes.front() != b.nodes.front() ||
      a.nodes.back() != b.nodes.back()) {
    throw std::invalid_argument("modified_crossover: parents must share both endpoints");
  }
  // Shared intermediate nodes, in the order they appear on parent a.
  std::unordered_map<NodeId, std::size_t> in_b;
  for (std::size_t j = 1; j + 1 < b.nodes.size(); ++j) {
    in_b.emplace(b.nodes[j], j);
  }
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 1; i + 1 < a.nodes.size(); ++i) {
    if (const auto it = in_b.find(a.nodes[i]); it != in_b.end()) {
      shared.emplace_back(i, it->second);
    }
  }
  if (shared.empty()) {
    return {a, b};
  }
  std::uniform_int_distribution<std::size_t> pick(0, shared.size() - 1);
  const auto [i, j] = shared[pick(rng)];

  Path c1;
  c1.nodes.assign(a.nodes.begin(), a.nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  c1.nodes.insert(c1.nodes.end(), b.nodes.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                  b.nodes.end());
  Path c2;
  c2.nodes.assign(b.nodes.begin(), b.nodes.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  c2.nodes.insert(c2.nodes.end(), a.nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                  a.nodes.end());
  return {excise_loops(c1), excise_loops(c2)};
}

}  // namespace gradedroute

namespace gradedroute::detail {

void BestTracker::offer(const Path& path, const Fitness& fitness) {
  if (!fitness.feasible) {
    return;
  }
  if (!best_path || fitness.bottleneck_mbps > best_fitness.bottleneck_mbps) {
    best_path = path;
    best_fitness = fitness;
  }
}

void finish(RouteResult& result, const BestTracker& best) {
  result.best_path = best.best_path;
  result.best_fitness = best.best_fitness;
  result.hop_count = best.best_path ? best.best_path->hops() : 0;
  const auto& trace = result.fitness_trace;
  if (trace.empty()) {
    return;
  }
  const double final_value = trace.back();
  const auto first = std::find(trace.begin(), trace.end(), final_value);
  result.convergence_cycle = static_cast<std::size_t>(first - trace.begin());
  const std::size_t last = trace.size() - 1;
  for (std::size_t c = 0; c <= last; ++c) {
    if (trace[std::min(c + kStagnationWindow, last)] == trace[c]) {
      result.stagnation_cycle = c;
      break;
    }
  }
}

}  // namespace gradedroute::detail
