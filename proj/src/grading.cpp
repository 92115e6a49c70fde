#include "gradedroute/grading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gradedroute/errors.hpp"

namespace gradedroute::grading {

Priority priority_from_level(int value) {
  if (value < 1 || value > 6) {
    throw std::invalid_argument("priority level must be in 1..6, got " + std::to_string(value));
  }
  return static_cast<Priority>(value);
}

std::string_view to_string(SelectionMode mode) noexcept {
  return mode == SelectionMode::kBestClasses ? "best-classes" : "literal";
}

SelectionMode parse_selection_mode(std::string_view text) {
  if (text == "best-classes") {
    return SelectionMode::kBestClasses;
  }
  if (text == "literal") {
    return SelectionMode::kLiteral;
  }
  throw std::invalid_argument("unknown selection mode '" + std::string(text) +
                              "' (expected best-classes or literal)");
}

void validate(const GradingConfig& config) {
  if (!(config.bandwidth_fraction > 0.0 && config.bandwidth_fraction < 1.0)) {
    throw std::invalid_argument("grading: bandwidth fraction must lie in (0, 1)");
  }
  if (!(config.delay_multiplier > 0.0)) {
    throw std::invalid_argument("grading: delay multiplier must be positive");
  }
  if (!(config.lifetime_threshold >= 0.0)) {
    throw std::invalid_argument("grading: lifetime threshold must be non-negative");
  }
}

Priority level1_priority(const QosInputs& qos, bool congested, bool delayed,
                         std::uint32_t density_threshold, double lifetime_threshold) {
  if (!(qos.network_lifetime > lifetime_threshold)) {
    return Priority::kLifetimeLow;
  }
  if (!(qos.node_density < density_threshold)) {
    return Priority::kDense;
  }
  if (congested) {
    return Priority::kCongested;
  }
  if (!qos.resource_available) {
    return Priority::kNoResource;
  }
  return delayed ? Priority::kDelayed : Priority::kAllClear;
}

double average_delay(const DelayInputs& in) {
  const std::size_t m = in.flow_rates.size();
  if (m == 0 || in.capacities.size() != m) {
    throw std::invalid_argument("average_delay: need one capacity per channel and M >= 1");
  }
  if (!(in.service_rate > 0.0)) {
    throw std::invalid_argument("average_delay: service rate must be positive");
  }
  bool any_flow = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(in.flow_rates[i] >= 0.0)) {
      throw std::invalid_argument("average_delay: negative flow rate");
    }
    if (in.service_rate * in.capacities[i] <= in.flow_rates[i]) {
      throw SaturatedChannelError("average_delay: channel " + std::to_string(i) +
                                  " is saturated");
    }
    any_flow = any_flow || in.flow_rates[i] > 0.0;
  }
  if (!any_flow) {
    return 0.0;
  }
  if (!(in.total_traffic > 0.0)) {
    throw std::invalid_argument("average_delay: total traffic must be positive");
  }
  double t = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    t += in.flow_rates[i] / in.total_traffic / (in.service_rate * in.capacities[i] - in.flow_rates[i]);
  }
  return t;
}

bool congestion_check(double available_mbps, double capacity_mbps, double threshold_fraction) {
  return available_mbps / capacity_mbps < threshold_fraction;
}

KnowledgeBase::KnowledgeBase(std::vector<GradeRecord> records, std::vector<double> link_load,
                             std::vector<double> link_available_mbps,
                             traffic::TrafficParams traffic, GradingConfig config,
                             double stamped_at)
    : records_(std::move(records)),
      link_load_(std::move(link_load)),
      link_available_mbps_(std::move(link_available_mbps)),
      traffic_(traffic),
      config_(config),
      stamped_at_(stamped_at) {
  if (link_load_.size() != link_available_mbps_.size()) {
    throw std::invalid_argument("knowledge base: per-link vectors differ in length");
  }
}

const GradeRecord& KnowledgeBase::record(NodeId id) const {
  if (id >= records_.size()) {
    throw std::invalid_argument("knowledge base: no record for node " + std::to_string(id));
  }
  return records_[id];
}

double level2_grade(NodeId node, const Topology& topology, const KnowledgeBase& kb) {
  const auto links = topology.incident_links(node);
  if (links.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (LinkId l : links) {
    sum += kb.link_available_mbps(l) / topology.link(l).capacity_mbps;
  }
  return std::clamp(sum / static_cast<double>(links.size()), 0.0, 1.0);
}

KnowledgeBase build_knowledge_base(const Topology& topology, const traffic::TrafficParams& traffic,
                                   const GradingConfig& config, double sim_time) {
  traffic::validate(traffic);
  validate(config);

  const auto links = topology.links();
  std::vector<double> load(links.size());
  std::vector<double> available(links.size());
  std::vector<double> fraction(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    load[i] = traffic::link_load_at(links[i].state, sim_time);
    traffic::TrafficParams per_link = traffic;
    per_link.link_capacity_mbps = links[i].capacity_mbps;
    fraction[i] = traffic::load_fraction(load[i], per_link);
    available[i] = traffic::available_bandwidth(links[i].capacity_mbps, fraction[i]);
  }
  // Grades need the per-link vectors in place; level2_grade reads them back.
  KnowledgeBase partial({}, load, available, traffic, config, sim_time);

  const double bits = traffic.packet_size_bits();
  std::vector<GradeRecord> records(topology.size());
  for (const Node& node : topology.nodes()) {
    GradeRecord& rec = records[node.id];
    rec.node = node.id;
    rec.stamped_at = sim_time;
    const auto incident = topology.incident_links(node.id);

    std::size_t congested_links = 0;
    double min_available = incident.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    DelayInputs delay;
    delay.service_rate = 1.0 / bits;
    for (LinkId l : incident) {
      const double cap = links[l].capacity_mbps;
      min_available = std::min(min_available, available[l]);
      if (congestion_check(available[l], cap, config.bandwidth_fraction)) {
        ++congested_links;
      }
      const double capacity_bps = cap * 1e6;
      delay.capacities.push_back(capacity_bps);
      delay.flow_rates.push_back(fraction[l] * capacity_bps / bits);
    }
    rec.available_bw_mbps = min_available;
    rec.congested = 2 * congested_links > incident.size();

    if (incident.empty()) {
      rec.delay_s = 0.0;
    } else {
      delay.total_traffic = std::accumulate(delay.flow_rates.begin(), delay.flow_rates.end(), 0.0);
      try {
        rec.delay_s = average_delay(delay);
      } catch (const SaturatedChannelError&) {
        rec.delay_s = std::numeric_limits<double>::infinity();
      }
    }
    const double idle_delay = bits / traffic.link_capacity_bps();
    rec.delayed = rec.delay_s > config.delay_multiplier * idle_delay;
    rec.priority = level1_priority(node.qos, rec.congested, rec.delayed, config.density_threshold,
                                   config.lifetime_threshold);
    rec.grade = level2_grade(node.id, topology, partial);
  }
  return KnowledgeBase(std::move(records), std::move(load), std::move(available), traffic, config,
                       sim_time);
}

std::optional<KnowledgeBase> refresh_knowledge_base(const Topology& topology,
                                                    traffic::RefreshSchedule& schedule,
                                                    const KnowledgeBase& kb, double sim_time) {
  if (!schedule.advance(sim_time)) {
    return std::nullopt;
  }
  return build_knowledge_base(topology, kb.traffic(), kb.config(), sim_time);
}

bool is_selected(Priority p, SelectionMode mode) noexcept {
  return mode == SelectionMode::kBestClasses ? level(p) <= 3 : level(p) >= 3;
}

std::vector<NodeId> select_feasible(const Topology& topology, const KnowledgeBase& kb,
                                    SelectionMode mode) {
  if (kb.empty()) {
    throw StateError("select_feasible: knowledge base is empty");
  }
  if (kb.records().size() != topology.size()) {
    throw StateError("select_feasible: knowledge base does not match topology");
  }
  std::vector<NodeId> out;
  for (const GradeRecord& r : kb.records()) {
    if (is_selected(r.priority, mode)) {
      out.push_back(r.node);
    }
  }
  return out;
}

BalanceResult balance_traffic(std::span<const double> current, double envisaged) {
  for (double c : current) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw std::invalid_argument("balance_traffic: current loads must lie in [0, 1]");
    }
  }
  if (!(envisaged >= 0.0)) {
    throw std::invalid_argument("balance_traffic: envisaged bandwidth must be non-negative");
  }
  if (envisaged > static_cast<double>(current.size())) {
    throw InfeasibleError("balance_traffic: envisaged bandwidth exceeds neighbourhood capacity");
  }
  BalanceResult out;
  out.actual.assign(current.begin(), current.end());
  const double total = std::accumulate(current.begin(), current.end(), 0.0);
  if (total >= envisaged) {
    return out;
  }
  // Every unit raised costs one unit of L1 distance, so any fill of the
  // deficit within the box bounds is optimal.
  double deficit = envisaged - total;
  out.objective = deficit;
  for (double& a : out.actual) {
    if (deficit <= 0.0) {
      break;
    }
    const double raise = std::min(1.0 - a, deficit);
    a += raise;
    deficit -= raise;
  }
  return out;
}

}  // namespace gradedroute::grading
