#pragma once

// Fluid link-load model: per-link flow dynamics, available bandwidth,
// traffic intensity, Poisson arrivals and the grading refresh clock.

#include <cstdint>
#include <vector>

#include "gradedroute/random.hpp"

namespace gradedroute::traffic {

/// State of one link: flows routed at time 0, flow arrival rate and
/// per-flow service rate.
struct LinkState {
  double initial_load = 0.0;  // flows at t = 0
  double arrival_rate = 0.0;  // flows / s
  double service_rate = 1.0;  // 1 / mean flow duration

  /// Load the link settles to as t grows without bound.
  double steady_load() const noexcept { return arrival_rate / service_rate; }
};

void validate(const LinkState& state);

struct TrafficParams {
  std::uint32_t packet_size_bytes = 200;
  double link_capacity_mbps = 30.0;
  // Bandwidth consumed by one routed flow; converts flow counts to a
  // fraction of link capacity.
  double unit_flow_mbps = 1.0;
  double base_tick_s = 1.0;
  double refresh_period_s = 30.0;  // 30 base ticks

  double packet_size_bits() const noexcept { return 8.0 * packet_size_bytes; }
  double link_capacity_bps() const noexcept { return link_capacity_mbps * 1e6; }
};

void validate(const TrafficParams& params);

struct ArrivalModel {
  double rate = 1.0;                  // external Poisson rate (jobs / s)
  std::vector<double> routing_probs;  // one entry per downstream node, sums to 1
};

/// Closed-form load T(t) = T0 e^{-mu t} + (gamma / mu)(1 - e^{-mu t}).
/// Throws std::invalid_argument for t < 0. t = +inf yields the steady load.
double link_load_at(const LinkState& state, double t);

/// dT/dt = gamma - mu * load.
double load_derivative(const LinkState& state, double load);

/// Bandwidth left on a link of the given capacity when `load_fraction` of it
/// is in use. Throws std::invalid_argument outside [0, 1].
double available_bandwidth(double capacity_mbps, double load_fraction);

/// Fraction of capacity consumed by `load` flows, clipped to [0, 1].
double load_fraction(double load, const TrafficParams& params);

/// Ps * load / Ab, all in consistent units (bits, flows, bits/s). Throws
/// CongestedLinkError when no bandwidth is available.
double traffic_intensity(double packet_size_bits, double load, double available_bps);

/// Draws Poisson(rate * horizon) arrivals and routes each independently by
/// `routing_probs`. Returns one count per routing entry.
std::vector<std::uint32_t> sample_poisson_arrivals(const ArrivalModel& model, double horizon_s,
                                                   Rng& rng);

/// True when `sim_time` sits on a positive multiple of the refresh period.
bool refresh_due(const TrafficParams& params, double sim_time);

/// Tracks the last refresh epoch and reports each boundary crossing once.
class RefreshSchedule {
 public:
  explicit RefreshSchedule(const TrafficParams& params);

  /// Advances the clock to `sim_time` (monotone). Returns true if at least
  /// one refresh boundary was crossed since the previous call.
  bool advance(double sim_time);

  std::uint64_t epoch() const noexcept { return epoch_; }
  double period() const noexcept { return period_; }

 private:
  double period_;
  double now_ = 0.0;
  std::uint64_t epoch_ = 0;
};

}  // namespace gradedroute::traffic
