#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradedroute/grading.hpp"
#include "gradedroute/optimizers.hpp"
#include "gradedroute/topology.hpp"
#include "gradedroute/traffic.hpp"

namespace gradedroute {

/// Fully resolved run configuration. Serialised as one flat JSON object
/// whose keys match the field names.
struct RunConfig {
  std::vector<std::size_t> node_counts{15, 16, 32, 64, 128, 256, 512, 1024};
  double link_density = 0.3;
  std::uint64_t seed = 1;
  std::size_t seeds_per_n = 1;

  std::uint32_t packet_size_bytes = 200;
  double max_bandwidth_mbps = 30.0;
  double unit_flow_mbps = 1.0;
  double refresh_period_s = 30.0;
  double mu = 1.0;     // per-flow service rate
  double alpha = 0.3;  // external Poisson arrival rate per node
  double arrival_horizon_s = 10.0;
  double lifetime_max = 100.0;
  double resource_probability = 0.8;
  double max_initial_load = 30.0;
  double max_flow_arrival_rate = 30.0;

  std::uint32_t density_threshold = 5;
  double lifetime_threshold = 30.0;
  double bandwidth_fraction = 0.2;
  double delay_multiplier = 5.0;
  grading::SelectionMode selection_mode = grading::SelectionMode::kBestClasses;

  AbcConfig abc;
  GaConfig ga;

  std::string out_dir = "out";
  std::size_t threads = 1;

  EnvironmentParams environment() const;
  traffic::TrafficParams traffic() const;
  grading::GradingConfig grading() const;
  /// Free bandwidth below which a hop is rejected.
  double min_link_mbps() const { return bandwidth_fraction * max_bandwidth_mbps; }

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);

/// Applies the keys present in `doc` on top of `base`. Unknown keys and
/// ill-typed values throw std::invalid_argument.
RunConfig apply_json(RunConfig base, const nlohmann::json& doc);

RunConfig load_run_config(const std::string& path, RunConfig base = {});

}  // namespace gradedroute
