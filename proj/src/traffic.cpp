#include "gradedroute/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gradedroute/errors.hpp"

namespace gradedroute::traffic {

void validate(const LinkState& state) {
  if (!(state.service_rate > 0.0)) {
    throw std::invalid_argument("link state: service rate must be positive");
  }
  if (!(state.initial_load >= 0.0) || !(state.arrival_rate >= 0.0)) {
    throw std::invalid_argument("link state: load and arrival rate must be non-negative");
  }
}

void validate(const TrafficParams& params) {
  if (params.packet_size_bytes == 0) {
    throw std::invalid_argument("traffic params: packet size must be positive");
  }
  if (!(params.link_capacity_mbps > 0.0) || !(params.unit_flow_mbps > 0.0)) {
    throw std::invalid_argument("traffic params: capacities must be positive");
  }
  if (!(params.refresh_period_s > 0.0) || !(params.base_tick_s > 0.0)) {
    throw std::invalid_argument("traffic params: refresh period must be positive");
  }
}

double link_load_at(const LinkState& state, double t) {
  validate(state);
  if (!(t >= 0.0)) {
    throw std::invalid_argument("link_load_at: time must be non-negative");
  }
  const double steady = state.steady_load();
  if (std::isinf(t)) {
    return steady;
  }
  // Written around the steady state so the result never leaves
  // [min(T0, steady), max(T0, steady)].
  const double decay = std::exp(-state.service_rate * t);
  return steady + (state.initial_load - steady) * decay;
}

double load_derivative(const LinkState& state, double load) {
  return state.arrival_rate - state.service_rate * load;
}

double available_bandwidth(double capacity_mbps, double load_fraction) {
  if (!(load_fraction >= 0.0 && load_fraction <= 1.0)) {
    throw std::invalid_argument("available_bandwidth: load fraction must lie in [0, 1]");
  }
  if (!(capacity_mbps > 0.0)) {
    throw std::invalid_argument("available_bandwidth: capacity must be positive");
  }
  return capacity_mbps - capacity_mbps * load_fraction;
}

double load_fraction(double load, const TrafficParams& params) {
  const double f = load * params.unit_flow_mbps / params.link_capacity_mbps;
  return std::clamp(f, 0.0, 1.0);
}

double traffic_intensity(double packet_size_bits, double load, double available_bps) {
  if (!(available_bps > 0.0)) {
    throw CongestedLinkError("traffic_intensity: no available bandwidth on link");
  }
  return packet_size_bits * load / available_bps;
}

std::vector<std::uint32_t> sample_poisson_arrivals(const ArrivalModel& model, double horizon_s,
                                                   Rng& rng) {
  if (model.routing_probs.empty()) {
    throw std::invalid_argument("sample_poisson_arrivals: empty routing vector");
  }
  if (!(model.rate > 0.0) || !(horizon_s > 0.0)) {
    throw std::invalid_argument("sample_poisson_arrivals: rate and horizon must be positive");
  }
  double total = 0.0;
  for (double p : model.routing_probs) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("sample_poisson_arrivals: negative routing probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("sample_poisson_arrivals: routing probabilities must sum to 1");
  }

  std::vector<std::uint32_t> counts(model.routing_probs.size(), 0);
  std::poisson_distribution<std::uint32_t> arrivals(model.rate * horizon_s);
  const std::uint32_t n = arrivals(rng);
  if (n == 0) {
    return counts;
  }
  std::discrete_distribution<std::size_t> route(model.routing_probs.begin(),
                                                model.routing_probs.end());
  for (std::uint32_t i = 0; i < n; ++i) {
    ++counts[route(rng)];
  }
  return counts;
}

bool refresh_due(const TrafficParams& params, double sim_time) {
  if (!(sim_time > 0.0)) {
    return false;
  }
  const double ticks = sim_time / params.refresh_period_s;
  return std::abs(ticks - std::round(ticks)) <= 1e-9 * std::max(1.0, ticks);
}

RefreshSchedule::RefreshSchedule(const TrafficParams& params) : period_(params.refresh_period_s) {
  validate(params);
}

bool RefreshSchedule::advance(double sim_time) {
  if (sim_time < now_) {
    throw std::invalid_argument("RefreshSchedule: time must not go backwards");
  }
  now_ = sim_time;
  // Nudge by a relative epsilon so t = k * period counts as crossing k.
  const double ticks = sim_time / period_;
  const auto epoch = static_cast<std::uint64_t>(std::floor(ticks + 1e-9 * std::max(1.0, ticks)));
  if (epoch > epoch_) {
    epoch_ = epoch;
    return true;
  }
  return false;
}

}  // namespace gradedroute::traffic
