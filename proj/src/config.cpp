#include "gradedroute/config.hpp"

#include <fstream>
#include <stdexcept>

#include "gradedroute/errors.hpp"

namespace gradedroute {

EnvironmentParams RunConfig::environment() const {
  EnvironmentParams env;
  env.capacity_mbps = max_bandwidth_mbps;
  env.lifetime_max = lifetime_max;
  env.resource_probability = resource_probability;
  env.arrival_rate = alpha;
  env.arrival_horizon_s = arrival_horizon_s;
  env.max_initial_load = max_initial_load;
  env.max_flow_arrival_rate = max_flow_arrival_rate;
  env.service_rate = mu;
  return env;
}

traffic::TrafficParams RunConfig::traffic() const {
  traffic::TrafficParams t;
  t.packet_size_bytes = packet_size_bytes;
  t.link_capacity_mbps = max_bandwidth_mbps;
  t.unit_flow_mbps = unit_flow_mbps;
  t.refresh_period_s = refresh_period_s;
  return t;
}

grading::GradingConfig RunConfig::grading() const {
  grading::GradingConfig g;
  g.density_threshold = density_threshold;
  g.lifetime_threshold = lifetime_threshold;
  g.bandwidth_fraction = bandwidth_fraction;
  g.delay_multiplier = delay_multiplier;
  return g;
}

void RunConfig::validate() const {
  if (node_counts.empty()) {
    throw std::invalid_argument("config: node_counts must not be empty");
  }
  for (std::size_t n : node_counts) {
    if (n < 2) {
      throw std::invalid_argument("config: every node count must be at least 2");
    }
  }
  if (!(link_density > 0.0 && link_density <= 1.0)) {
    throw std::invalid_argument("config: link_density must lie in (0, 1]");
  }
  if (seeds_per_n < 1) {
    throw std::invalid_argument("config: seeds_per_n must be at least 1");
  }
  if (!(mu > 0.0) || !(alpha > 0.0) || !(arrival_horizon_s > 0.0)) {
    throw std::invalid_argument("config: mu, alpha and arrival_horizon_s must be positive");
  }
  if (!(resource_probability >= 0.0 && resource_probability <= 1.0)) {
    throw std::invalid_argument("config: resource_probability must lie in [0, 1]");
  }
  if (!(lifetime_max >= 0.0) || !(max_initial_load >= 0.0) || !(max_flow_arrival_rate >= 0.0)) {
    throw std::invalid_argument("config: environment ranges must be non-negative");
  }
  if (threads < 1) {
    throw std::invalid_argument("config: threads must be at least 1");
  }
  traffic::validate(traffic());
  grading::validate(grading());
  gradedroute::validate(abc);
  gradedroute::validate(ga);
}

nlohmann::json to_json(const RunConfig& c) {
  return nlohmann::json{
      {"node_counts", c.node_counts},
      {"link_density", c.link_density},
      {"seed", c.seed},
      {"seeds_per_n", c.seeds_per_n},
      {"packet_size_bytes", c.packet_size_bytes},
      {"max_bandwidth_mbps", c.max_bandwidth_mbps},
      {"unit_flow_mbps", c.unit_flow_mbps},
      {"refresh_period_s", c.refresh_period_s},
      {"mu", c.mu},
      {"alpha", c.alpha},
      {"arrival_horizon_s", c.arrival_horizon_s},
      {"lifetime_max", c.lifetime_max},
      {"resource_probability", c.resource_probability},
      {"max_initial_load", c.max_initial_load},
      {"max_flow_arrival_rate", c.max_flow_arrival_rate},
      {"density_threshold", c.density_threshold},
      {"lifetime_threshold", c.lifetime_threshold},
      {"bandwidth_fraction", c.bandwidth_fraction},
      {"delay_multiplier", c.delay_multiplier},
      {"selection_mode", std::string(grading::to_string(c.selection_mode))},
      {"abc_colony_size", c.abc.colony_size},
      {"abc_max_cycles", c.abc.max_cycles},
      {"abc_limit", c.abc.limit},
      {"ga_population_size", c.ga.population_size},
      {"ga_generations", c.ga.generations},
      {"ga_crossover_rate", c.ga.crossover_rate},
      {"ga_mutation_rate", c.ga.mutation_rate},
      {"out_dir", c.out_dir},
      {"threads", c.threads},
  };
}

RunConfig apply_json(RunConfig c, const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw std::invalid_argument("config: document must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "node_counts") c.node_counts = value.get<std::vector<std::size_t>>();
      else if (key == "link_density") c.link_density = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "seeds_per_n") c.seeds_per_n = value.get<std::size_t>();
      else if (key == "packet_size_bytes") c.packet_size_bytes = value.get<std::uint32_t>();
      else if (key == "max_bandwidth_mbps") c.max_bandwidth_mbps = value.get<double>();
      else if (key == "unit_flow_mbps") c.unit_flow_mbps = value.get<double>();
      else if (key == "refresh_period_s") c.refresh_period_s = value.get<double>();
      else if (key == "mu") c.mu = value.get<double>();
      else if (key == "alpha") c.alpha = value.get<double>();
      else if (key == "arrival_horizon_s") c.arrival_horizon_s = value.get<double>();
      else if (key == "lifetime_max") c.lifetime_max = value.get<double>();
      else if (key == "resource_probability") c.resource_probability = value.get<double>();
      else if (key == "max_initial_load") c.max_initial_load = value.get<double>();
      else if (key == "max_flow_arrival_rate") c.max_flow_arrival_rate = value.get<double>();
      else if (key == "density_threshold") c.density_threshold = value.get<std::uint32_t>();
      else if (key == "lifetime_threshold") c.lifetime_threshold = value.get<double>();
      else if (key == "bandwidth_fraction") c.bandwidth_fraction = value.get<double>();
      else if (key == "delay_multiplier") c.delay_multiplier = value.get<double>();
      else if (key == "selection_mode")
        c.selection_mode = grading::parse_selection_mode(value.get<std::string>());
      else if (key == "abc_colony_size") c.abc.colony_size = value.get<std::size_t>();
      else if (key == "abc_max_cycles") c.abc.max_cycles = value.get<std::size_t>();
      else if (key == "abc_limit") c.abc.limit = value.get<std::size_t>();
      else if (key == "ga_population_size") c.ga.population_size = value.get<std::size_t>();
      else if (key == "ga_generations") c.ga.generations = value.get<std::size_t>();
      else if (key == "ga_crossover_rate") c.ga.crossover_rate = value.get<double>();
      else if (key == "ga_mutation_rate") c.ga.mutation_rate = value.get<double>();
      else if (key == "out_dir") c.out_dir = value.get<std::string>();
      else if (key == "threads") c.threads = value.get<std::size_t>();
      else throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config: bad value for '" + key + "': " + e.what());
    }
  }
  return c;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file " + path);
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config: " + path + " is not valid JSON: " + e.what());
  }
  return apply_json(std::move(base), doc);
}

}  // namespace gradedroute
