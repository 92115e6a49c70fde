#pragma once

#include <optional>

#include "gradedroute/optimizers.hpp"

namespace gradedroute::detail {

// Best feasible path seen so far across a whole search.
struct BestTracker {
  std::optional<Path> best_path;
  Fitness best_fitness;

  void offer(const Path& path, const Fitness& fitness);
  double value() const noexcept { return best_path ? best_fitness.bottleneck_mbps : 0.0; }
};

// Copies the best path into `result` and derives the convergence and
// stagnation cycles from its fitness trace.
void finish(RouteResult& result, const BestTracker& best);

}  // namespace gradedroute::detail
