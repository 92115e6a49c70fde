#include <algorithm>
#include <limits>
#include <stdexcept>

#include "gradedroute/optimizers.hpp"
#include "search_detail.hpp"

namespace gradedroute {

namespace {

struct FoodSource {
  Path path;
  Fitness fitness;
  std::size_t trials = 0;
};

}  // namespace

void validate(const AbcConfig& config) {
  if (config.max_cycles < 1) {
    throw std::invalid_argument("abc: max_cycles must be at least 1");
  }
  if (config.colony_size == 1) {
    throw std::invalid_argument("abc: colony size must be 0 (automatic) or at least 2");
  }
}

std::size_t resolved_colony_size(const AbcConfig& config, const RouteProblem& problem) {
  if (config.colony_size != 0) {
    return config.colony_size;
  }
  return std::max<std::size_t>(2, problem.graph.neighbors(problem.source).size());
}

RouteResult abc_search(const RouteProblem& problem, const AbcConfig& config, Rng& rng,
                       const CandidateObserver& observer) {
  validate(config);
  const std::size_t colony = resolved_colony_size(config, problem);
  const std::size_t limit = config.limit != 0 ? config.limit : colony * 5;

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

  // Initial scouts.
  std::vector<FoodSource> sources;
  sources.reserve(colony);
  for (std::size_t i = 0; i < colony; ++i) {
    auto p = random_path(problem.graph, problem.source, problem.destination, rng);
    if (!p) {
      // random_path only fails when the destination is unreachable.
      result.fitness_trace.assign(config.max_cycles + 1, 0.0);
      detail::finish(result, best);
      return result;
    }
    const Fitness f = evaluate(*p);
    sources.push_back({std::move(*p), f, 0});
  }
  result.fitness_trace.push_back(best.value());

  auto exploit = [&](FoodSource& src) {
    Path candidate = neighbor_path(src.path, problem.graph, rng);
    const Fitness f = evaluate(candidate);
    if (f.value() > src.fitness.value()) {
      src.path = std::move(candidate);
      src.fitness = f;
      src.trials = 0;
    } else {
      ++src.trials;
    }
  };

  std::vector<double> nectar(colony);
  for (std::size_t cycle = 1; cycle <= config.max_cycles; ++cycle) {
    // Employed bees: one local move per food source.
    for (FoodSource& src : sources) {
      exploit(src);
    }
    // Onlookers pick sources in proportion to their nectar.
    for (std::size_t i = 0; i < colony; ++i) {
      nectar[i] = sources[i].fitness.value();
    }
    for (std::size_t k = 0; k < colony; ++k) {
      const std::size_t i = roulette_select(nectar, rng);
      exploit(sources[i]);
      nectar[i] = sources[i].fitness.value();
    }
    // Exhausted sources are abandoned and re-seeded by scouts.
    for (FoodSource& src : sources) {
      if (src.trials < limit) {
        continue;
      }
      auto p = random_path(problem.graph, problem.source, problem.destination, rng);
      src.path = std::move(*p);
      src.fitness = evaluate(src.path);
      src.trials = 0;
      ++result.scouts;
    }
    result.fitness_trace.push_back(best.value());
  }
  detail::finish(result, best);
  return result;
}

}  // namespace gradedroute
