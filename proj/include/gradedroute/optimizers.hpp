#pragma once

// Path search over the graded quadrant subgraph: the shared path machinery
// (random walks, suffix regrowth, bottleneck fitness) and the two searches,
// artificial bee colony and genetic algorithm.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gradedroute/grading.hpp"
#include "gradedroute/random.hpp"
#include "gradedroute/topology.hpp"

namespace gradedroute {

/// Simple path, source first and destination last.
struct Path {
  std::vector<NodeId> nodes;

  std::size_t hops() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
  friend bool operator==(const Path&, const Path&) = default;
};

/// Bottleneck fitness. A rejected path (some hop below the bandwidth floor)
/// has value 0 and `feasible == false`.
struct Fitness {
  double bottleneck_mbps = 0.0;
  bool feasible = false;

  /// Value used for comparison and roulette weights.
  double value() const noexcept { return feasible ? bottleneck_mbps : 0.0; }
};

/// Topology restricted to a member set. Members always include both route
/// endpoints.
class SearchGraph {
 public:
  SearchGraph(const Topology& topology, std::span<const NodeId> members);

  /// Quadrant candidates of `destination` that `kb` admits under `mode`,
  /// plus both endpoints.
  static SearchGraph for_route(const Topology& topology, const grading::KnowledgeBase& kb,
                               grading::SelectionMode mode, NodeId source, NodeId destination);

  const Topology& topology() const noexcept { return *topology_; }
  bool contains(NodeId id) const noexcept { return id < member_.size() && member_[id]; }
  std::span<const NodeId> members() const noexcept { return members_; }
  /// Neighbours of `id` that are members. Empty for non-members.
  std::span<const NodeId> neighbors(NodeId id) const;

 private:
  const Topology* topology_;
  std::vector<NodeId> members_;
  std::vector<bool> member_;
  std::vector<std::vector<NodeId>> adjacency_;
};

/// Everything a search needs besides its own configuration and RNG.
struct RouteProblem {
  const SearchGraph& graph;
  NodeId source;
  NodeId destination;
  const grading::KnowledgeBase& kb;
  double min_link_mbps = 0.0;  // hops with less free bandwidth are rejected
};

/// Called on every candidate path a search evaluates.
using CandidateObserver = std::function<void(const Path&)>;

/// Returns a description of the first broken path invariant, if any.
std::optional<std::string> check_path(const Path& path, const SearchGraph& graph, NodeId source,
                                      NodeId destination);

/// Randomised depth-first walk from `source` to `destination` inside
/// `graph`. Neighbour order is shuffled at every step; when the destination
/// is adjacent it is tried first with probability 1/2. Returns std::nullopt
/// iff the destination is unreachable.
std::optional<Path> random_path(const SearchGraph& graph, NodeId source, NodeId destination,
                                Rng& rng);

/// Keeps a random prefix of `path` and regrows the rest towards the
/// destination, avoiding prefix nodes. Returns `path` unchanged if every
/// attempt fails.
Path neighbor_path(const Path& path, const SearchGraph& graph, Rng& rng);

/// Keeps path.nodes[0..=cut] and regrows the suffix from nodes[cut], never
/// stepping onto `avoid` as the first new hop. std::nullopt if impossible.
std::optional<Path> regrow_suffix(const Path& path, std::size_t cut, const SearchGraph& graph,
                                  Rng& rng, std::optional<NodeId> avoid = std::nullopt);

/// Minimum available bandwidth over the path's links. Throws
/// std::invalid_argument if the path breaks an invariant.
Fitness path_fitness(const Path& path, const RouteProblem& problem);

/// Index drawn with probability proportional to its weight; uniform when all
/// weights are zero. Throws std::invalid_argument on empty or negative input.
std::size_t roulette_select(std::span<const double> weights, Rng& rng);

/// Exchanges suffixes at a uniformly chosen shared intermediate node, then
/// removes any loops. Parents without a shared intermediate node come back
/// unchanged. Throws std::invalid_argument on mismatched endpoints.
std::pair<Path, Path> modified_crossover(const Path& a, const Path& b, Rng& rng);

/// Drops the cycle between repeated occurrences of a node, keeping the first.
Path excise_loops(const Path& path);

struct AbcConfig {
  // Food sources; equal to the onlooker count. 0 selects the number of
  // source neighbours inside the search graph, with a floor of 2.
  std::size_t colony_size = 0;
  std::size_t max_cycles = 30;
  // Trials without improvement before a source is abandoned. 0 selects
  // colony_size * 5.
  std::size_t limit = 0;
};

struct GaConfig {
  std::size_t population_size = 15;
  std::size_t generations = 30;
  double crossover_rate = 0.9;
  double mutation_rate = 0.001;  // per intermediate gene
};

void validate(const AbcConfig& config);
void validate(const GaConfig& config);

/// Width of the stagnation window reported next to the convergence cycle.
inline constexpr std::size_t kStagnationWindow = 5;

struct RouteResult {
  std::optional<Path> best_path;
  Fitness best_fitness;
  std::size_t hop_count = 0;
  // First cycle at which the best-so-far value reached its final value.
  std::size_t convergence_cycle = 0;
  // First cycle followed by kStagnationWindow cycles without improvement
  // (window clipped at the last cycle).
  std::size_t stagnation_cycle = 0;
  // Best-so-far value after initialisation (index 0) and after each cycle.
  std::vector<double> fitness_trace;
  std::size_t evaluations = 0;
  std::size_t scouts = 0;  // ABC only: abandoned sources replaced
};

/// Colony size actually used for `problem` under `config`.
std::size_t resolved_colony_size(const AbcConfig& config, const RouteProblem& problem);

RouteResult abc_search(const RouteProblem& problem, const AbcConfig& config, Rng& rng,
                       const CandidateObserver& observer = {});

RouteResult ga_search(const RouteProblem& problem, const GaConfig& config, Rng& rng,
                      const CandidateObserver& observer = {});

}  // namespace gradedroute
