#include <algorithm>
#include <stdexcept>

#include "gradedroute/optimizers.hpp"
#include "search_detail.hpp"

namespace gradedroute {

namespace {

constexpr int kMaxRepairs = 3;

// Index of the first hop whose free bandwidth is below the floor.
std::optional<std::size_t> first_weak_hop(const Path& path, const RouteProblem& problem) {
  const Topology& topo = problem.graph.topology();
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    const LinkId l = *topo.link_between(path.nodes[i], path.nodes[i + 1]);
    if (problem.kb.link_available_mbps(l) < problem.min_link_mbps) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace

void validate(const GaConfig& config) {
  if (config.population_size < 2) {
    throw std::invalid_argument("ga: population size must be at least 2");
  }
  if (!(config.mutation_rate >= 0.0 && config.mutation_rate <= 1.0)) {
    throw std::invalid_argument("ga: mutation rate must lie in [0, 1]");
  }
  if (!(config.crossover_rate >= 0.0 && config.crossover_rate <= 1.0)) {
    throw std::invalid_argument("ga: crossover rate must lie in [0, 1]");
  }
}

RouteResult ga_search(const RouteProblem& problem, const GaConfig& config, Rng& rng,
                      const CandidateObserver& observer) {
  validate(config);
  const std::size_t size = config.population_size;

  RouteResult result;
  detail::BestTracker best;
  auto evaluate = [&](const Path& p) {
    ++result.evaluations;
    if (observer) {
      observer(p);
    }
    Fitness f = path_fitness(p, problem);
    best.offer(p, f);
    return f;
  };

  std::vector<Path> population;
  std::vector<double> fitness;
  population.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    auto p = random_path(problem.graph, problem.source, problem.destination, rng);
    if (!p) {
      result.fitness_trace.assign(config.generations + 1, 0.0);
      detail::finish(result, best);
      return result;
    }
    fitness.push_back(evaluate(*p).value());
    population.push_back(std::move(*p));
  }
  result.fitness_trace.push_back(best.value());

  std::bernoulli_distribution do_crossover(config.crossover_rate);
  std::bernoulli_distribution do_mutate(config.mutation_rate);

  // Per intermediate gene; a hit regrows the path from the gene before it.
  auto mutate = [&](Path& child) {
    for (std::size_t k = 1; k + 1 < child.nodes.size(); ++k) {
      if (!do_mutate(rng)) {
        continue;
      }
      if (auto grown = regrow_suffix(child, k - 1, problem.graph, rng)) {
        child = std::move(*grown);
      }
      return;
    }
  };

  // Offspring that use a hop below the bandwidth floor are regrown around
  // it; after kMaxRepairs failures they are replaced by a fresh random path.
  auto settle = [&](Path child) -> std::pair<Path, double> {
    Fitness f = evaluate(child);
    for (int attempt = 0; !f.feasible && attempt < kMaxRepairs; ++attempt) {
      const auto weak = first_weak_hop(child, problem);
      if (!weak) {
        break;
      }
      auto repaired = regrow_suffix(child, *weak, problem.graph, rng, child.nodes[*weak + 1]);
      if (!repaired) {
        continue;
      }
      child = std::move(*repaired);
      f = evaluate(child);
    }
    if (!f.feasible) {
      child = *random_path(problem.graph, problem.source, problem.destination, rng);
      f = evaluate(child);
    }
    return {std::move(child), f.value()};
  };

  for (std::size_t gen = 1; gen <= config.generations; ++gen) {
    std::vector<Path> next;
    std::vector<double> next_fitness;
    next.reserve(size);
    while (next.size() < size) {
      const Path& a = population[roulette_select(fitness, rng)];
      const Path& b = population[roulette_select(fitness, rng)];
      auto [c1, c2] = do_crossover(rng) ? modified_crossover(a, b, rng) : std::pair{a, b};
      for (Path* child : {&c1, &c2}) {
        if (next.size() == size) {
          break;
        }
        mutate(*child);
        auto [settled, value] = settle(std::move(*child));
        next.push_back(std::move(settled));
        next_fitness.push_back(value);
      }
    }
    population = std::move(next);
    fitness = std::move(next_fitness);
    result.fitness_trace.push_back(best.value());
  }
  detail::finish(result, best);
  return result;
}

}  // namespace gradedroute
