#pragma once

// Node grading: the level-1 priority ladder, per-node queueing delay, the
// level-2 bandwidth grade, feasibility selection and the neighbourhood
// bandwidth-balancing step.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gradedroute/topology.hpp"
#include "gradedroute/traffic.hpp"

namespace gradedroute::grading {

/// Level-1 class. Lower is better: kAllClear means every check passed.
enum class Priority : std::uint8_t {
  kAllClear = 1,       // all checks pass
  kDelayed = 2,        // delay present
  kNoResource = 3,     // resources unavailable
  kCongested = 4,      // traffic congestion present
  kDense = 5,          // node density at or above threshold
  kLifetimeLow = 6,    // remaining lifetime at or below threshold
};

inline int level(Priority p) noexcept { return static_cast<int>(p); }
Priority priority_from_level(int value);

enum class SelectionMode : std::uint8_t {
  kBestClasses,  // priority <= 3
  kLiteral,      // priority >= 3
};

std::string_view to_string(SelectionMode mode) noexcept;
SelectionMode parse_selection_mode(std::string_view text);

struct GradingConfig {
  std::uint32_t density_threshold = 5;
  double lifetime_threshold = 30.0;
  // Links with less than this fraction of capacity free are congested, and
  // are rejected as path hops.
  double bandwidth_fraction = 0.2;
  // A node is delayed when its queueing delay exceeds this multiple of the
  // zero-load delay 1 / (mu C).
  double delay_multiplier = 5.0;
};

void validate(const GradingConfig& config);

Priority level1_priority(const QosInputs& qos, bool congested, bool delayed,
                         std::uint32_t density_threshold, double lifetime_threshold);

/// Inputs to the per-node mean delay
///   T = sum_i (lambda_i / gamma) / (mu C_i - lambda_i).
struct DelayInputs {
  std::vector<double> flow_rates;  // lambda_i, messages / s
  double total_traffic = 0.0;      // gamma, messages / s
  double service_rate = 0.0;       // mu, 1 / (bits per message)
  std::vector<double> capacities;  // C_i, bits / s
};

/// Throws SaturatedChannelError when mu C_i <= lambda_i for some channel and
/// std::invalid_argument for malformed input. Zero flow on every channel
/// gives zero delay.
double average_delay(const DelayInputs& inputs);

/// True iff the link's free fraction is below `threshold_fraction`.
bool congestion_check(double available_mbps, double capacity_mbps, double threshold_fraction);

struct GradeRecord {
  NodeId node = 0;
  Priority priority = Priority::kLifetimeLow;
  double delay_s = 0.0;             // +inf when a channel is saturated
  double available_bw_mbps = 0.0;   // min over incident links
  double grade = 0.0;               // mean free fraction of incident links
  double stamped_at = 0.0;
  bool congested = false;
  bool delayed = false;
};

/// Frozen per-node grades plus the per-link quantities they were derived
/// from, valid for one refresh window.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  KnowledgeBase(std::vector<GradeRecord> records, std::vector<double> link_load,
                std::vector<double> link_available_mbps, traffic::TrafficParams traffic,
                GradingConfig config, double stamped_at);

  bool empty() const noexcept { return records_.empty(); }
  std::span<const GradeRecord> records() const noexcept { return records_; }
  const GradeRecord& record(NodeId id) const;
  /// Flows on the link at the stamp time.
  double link_load(LinkId id) const { return link_load_.at(id); }
  double link_available_mbps(LinkId id) const { return link_available_mbps_.at(id); }
  const traffic::TrafficParams& traffic() const noexcept { return traffic_; }
  const GradingConfig& config() const noexcept { return config_; }
  double stamped_at() const noexcept { return stamped_at_; }

 private:
  std::vector<GradeRecord> records_;
  std::vector<double> link_load_;
  std::vector<double> link_available_mbps_;
  traffic::TrafficParams traffic_;
  GradingConfig config_;
  double stamped_at_ = 0.0;
};

/// Mean free fraction of the node's incident links, read from `kb`; zero for
/// a node without links.
double level2_grade(NodeId node, const Topology& topology, const KnowledgeBase& kb);

/// Grades every node of `topology` from its stored metrics and the link
/// loads at `sim_time`. Deterministic.
KnowledgeBase build_knowledge_base(const Topology& topology, const traffic::TrafficParams& traffic,
                                   const GradingConfig& config, double sim_time = 0.0);

/// Rebuilds `kb` when the refresh schedule crosses a boundary at `sim_time`;
/// otherwise returns std::nullopt and the current grades stay valid.
std::optional<KnowledgeBase> refresh_knowledge_base(const Topology& topology,
                                                    traffic::RefreshSchedule& schedule,
                                                    const KnowledgeBase& kb, double sim_time);

/// Nodes admitted for routing under `mode`, sorted. Throws StateError if the
/// knowledge base is empty.
std::vector<NodeId> select_feasible(const Topology& topology, const KnowledgeBase& kb,
                                    SelectionMode mode);

bool is_selected(Priority p, SelectionMode mode) noexcept;

struct BalanceResult {
  std::vector<double> actual;
  double objective = 0.0;  // sum |actual - current|
};

/// Minimises sum_j |act_j - cur_j| subject to sum_j act_j >= envisaged and
/// 0 <= act_j <= 1. A deficit is filled in index order. Throws
/// InfeasibleError when envisaged exceeds the number of components.
BalanceResult balance_traffic(std::span<const double> current, double envisaged);

}  // namespace gradedroute::grading
