#pragma once

// Experiment harness: one trial generates a network, grades it, prunes it to
// the destination quadrant and runs both searches on the same subgraph.
// Suites sweep node counts and seeds and aggregate the outcome.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gradedroute/config.hpp"
#include "gradedroute/grading.hpp"
#include "gradedroute/optimizers.hpp"
#include "gradedroute/topology.hpp"

namespace gradedroute::bench {

/// Stream ids derived from a trial seed. The topology consumes the trial
/// seed itself.
inline constexpr std::uint64_t kEndpointStream = 101;
inline constexpr std::uint64_t kAbcStream = 102;
inline constexpr std::uint64_t kGaStream = 103;

/// Random source, then a destination drawn from a uniformly chosen
/// non-empty quadrant around it.
std::pair<NodeId, NodeId> pick_endpoints(const Topology& topology, Rng& rng);

/// Everything a trial searches over. Address-stable: `graph` points into
/// the shared topology.
struct TrialSetup {
  std::shared_ptr<const Topology> topology;
  grading::KnowledgeBase kb;
  std::size_t n_selected = 0;
  NodeId source = 0;
  NodeId destination = 0;
  SearchGraph graph;
  double min_link_mbps = 0.0;

  RouteProblem problem() const {
    return RouteProblem{graph, source, destination, kb, min_link_mbps};
  }
};

TrialSetup prepare_trial(std::size_t n, std::uint64_t seed, const RunConfig& config);

struct TrialRecord {
  std::size_t n_total = 0;
  std::size_t n_selected = 0;    // graded-feasible nodes network wide
  std::size_t n_candidates = 0;  // search-graph size, endpoints included
  std::uint64_t seed = 0;
  grading::SelectionMode mode = grading::SelectionMode::kBestClasses;
  NodeId source = 0;
  NodeId destination = 0;
  RouteResult abc;
  RouteResult ga;
  // Traffic intensity on the bottleneck link of each best path.
  std::optional<double> abc_intensity;
  std::optional<double> ga_intensity;
};

TrialRecord run_trial(std::size_t n, std::uint64_t seed, const RunConfig& config,
                      const CandidateObserver& observer = {});

/// Traffic intensity of `path`'s bottleneck link under `kb`.
double bottleneck_intensity(const Path& path, const Topology& topology,
                            const grading::KnowledgeBase& kb);

/// One row of the results CSV.
struct TrialRow {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string mode;
  std::size_t n_selected = 0;
  std::size_t abc_hops = 0;
  std::size_t ga_hops = 0;
  std::size_t abc_conv = 0;
  std::size_t ga_conv = 0;
  double abc_fit = 0.0;
  double ga_fit = 0.0;
  bool path_found_abc = false;
  bool path_found_ga = false;

  friend bool operator==(const TrialRow&, const TrialRow&) = default;
};

TrialRow to_row(const TrialRecord& record);

inline constexpr std::string_view kResultsHeader =
    "n,seed,mode,n_selected,abc_hops,ga_hops,abc_conv,ga_conv,abc_fit,ga_fit,path_found_abc,"
    "path_found_ga";

/// Rows sorted by (n, seed), doubles in shortest round-trip form.
std::string results_csv(std::span<const TrialRow> rows);
/// Throws std::invalid_argument on malformed input.
std::vector<TrialRow> parse_results_csv(std::string_view text);

/// Fitness difference below which two paths count as equal quality.
inline constexpr double kQualityTie = 1e-9;

struct QualityFractions {
  std::size_t compared = 0;  // trials where both searches found a path
  double ga_better = 0.0;
  double equal = 0.0;
  double abc_better = 0.0;

  friend bool operator==(const QualityFractions&, const QualityFractions&) = default;
};

struct GroupSummary {
  std::size_t n = 0;
  std::size_t trials = 0;
  double path_available_abc = 0.0;
  double path_available_ga = 0.0;
  std::optional<double> median_hops_abc;
  std::optional<double> median_hops_ga;
  std::optional<double> median_conv_abc;
  std::optional<double> median_conv_ga;
  std::optional<double> convergence_ratio;
  QualityFractions quality;

  friend bool operator==(const GroupSummary&, const GroupSummary&) = default;
};

struct SuiteSummary {
  std::vector<GroupSummary> groups;  // ascending n
  QualityFractions quality;          // over all trials

  friend bool operator==(const SuiteSummary&, const SuiteSummary&) = default;
};

/// (GA - ABC) / GA; std::nullopt when the GA median is zero.
std::optional<double> convergence_ratio(double abc_median, double ga_median);
std::optional<double> convergence_ratio(const GroupSummary& group);

/// Order-independent fold over the rows.
SuiteSummary summarize(std::span<const TrialRow> rows);

nlohmann::json summary_to_json(const SuiteSummary& summary, grading::SelectionMode mode);

struct SuiteResult {
  std::vector<TrialRecord> records;  // sorted by (n, seed)
  SuiteSummary summary;
};

/// Runs seeds config.seed .. config.seed + seeds_per_n - 1 for every node
/// count, on config.threads workers. The result does not depend on the
/// thread count.
SuiteResult run_suite(const RunConfig& config);

enum class PlotKind { kTrafficIntensity, kThroughput };

std::string_view to_string(PlotKind kind) noexcept;

/// CSV with columns n,seed,algo,cycle,value: one row per record and
/// algorithm, cycle = convergence cycle, value = bottleneck traffic
/// intensity or bottleneck bandwidth of the best path ("nan" without one).
/// Throws std::invalid_argument for an empty record set.
std::string emit_plot_data(std::span<const TrialRecord> records, PlotKind kind);

/// Human-readable per-n table.
std::string format_summary_table(const SuiteSummary& summary);

}  // namespace gradedroute::bench
