#include "gradedroute/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gradedroute/errors.hpp"
#include "gradedroute/traffic.hpp"

namespace gradedroute::bench {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) {
    return std::nullopt;
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) {
    return values[mid];
  }
  return 0.5 * (values[mid - 1] + values[mid]);
}

template <typename T>
T parse_number(std::string_view field, std::string_view name) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("results csv: bad " + std::string(name) + " value '" +
                                std::string(field) + "'");
  }
  return value;
}

bool parse_flag(std::string_view field) {
  if (field == "1") {
    return true;
  }
  if (field == "0") {
    return false;
  }
  throw std::invalid_argument("results csv: bad flag '" + std::string(field) + "'");
}

QualityFractions quality_of(std::span<const TrialRow* const> rows) {
  QualityFractions q;
  std::size_t ga = 0;
  std::size_t eq = 0;
  std::size_t abc = 0;
  for (const TrialRow* r : rows) {
    if (!r->path_found_abc || !r->path_found_ga) {
      continue;
    }
    const double diff = r->abc_fit - r->ga_fit;
    if (std::abs(diff) < kQualityTie) {
      ++eq;
    } else if (diff > 0.0) {
      ++abc;
    } else {
      ++ga;
    }
  }
  q.compared = ga + eq + abc;
  if (q.compared > 0) {
    const double total = static_cast<double>(q.compared);
    q.ga_better = static_cast<double>(ga) / total;
    q.equal = static_cast<double>(eq) / total;
    q.abc_better = static_cast<double>(abc) / total;
  }
  return q;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json quality_json(const QualityFractions& q) {
  return {{"compared", q.compared},
          {"ga_better", q.ga_better},
          {"equal", q.equal},
          {"abc_better", q.abc_better}};
}

}  // namespace

std::pair<NodeId, NodeId> pick_endpoints(const Topology& topology, Rng& rng) {
  if (topology.size() < 2) {
    throw std::invalid_argument("pick_endpoints: need at least two nodes");
  }
  std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(topology.size() - 1));
  const NodeId source = any(rng);
  const Point origin = topology.node(source).position;
  std::array<std::vector<NodeId>, 4> by_quadrant;
  for (const Node& n : topology.nodes()) {
    if (n.id == source || n.position == origin) {
      continue;
    }
    by_quadrant[static_cast<std::size_t>(quadrant_of(origin, n.position)) - 1].push_back(n.id);
  }
  std::vector<std::size_t> occupied;
  for (std::size_t q = 0; q < by_quadrant.size(); ++q) {
    if (!by_quadrant[q].empty()) {
      occupied.push_back(q);
    }
  }
  if (occupied.empty()) {
    throw std::invalid_argument("pick_endpoints: every node coincides with the source");
  }
  std::uniform_int_distribution<std::size_t> pick_q(0, occupied.size() - 1);
  const auto& members = by_quadrant[occupied[pick_q(rng)]];
  std::uniform_int_distribution<std::size_t> pick_d(0, members.size() - 1);
  return {source, members[pick_d(rng)]};
}

TrialSetup prepare_trial(std::size_t n, std::uint64_t seed, const RunConfig& config) {
  auto topology = std::make_shared<const Topology>(
      generate_topology(n, config.link_density, seed, config.environment()));
  grading::KnowledgeBase kb =
      grading::build_knowledge_base(*topology, config.traffic(), config.grading());
  const std::size_t selected = grading::select_feasible(*topology, kb, config.selection_mode).size();
  Rng endpoint_rng = make_rng(seed, kEndpointStream);
  const auto [source, destination] = pick_endpoints(*topology, endpoint_rng);
  SearchGraph graph =
      SearchGraph::for_route(*topology, kb, config.selection_mode, source, destination);
  return TrialSetup{std::move(topology), std::move(kb), selected,         source,
                    destination,         std::move(graph), config.min_link_mbps()};
}

double bottleneck_intensity(const Path& path, const Topology& topology,
                            const grading::KnowledgeBase& kb) {
  std::optional<LinkId> weakest;
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    const LinkId l = *topology.link_between(path.nodes[i - 1], path.nodes[i]);
    if (!weakest || kb.link_available_mbps(l) < kb.link_available_mbps(*weakest)) {
      weakest = l;
    }
  }
  if (!weakest) {
    throw std::invalid_argument("bottleneck_intensity: path has no links");
  }
  return traffic::traffic_intensity(kb.traffic().packet_size_bits(), kb.link_load(*weakest),
                                    kb.link_available_mbps(*weakest) * 1e6);
}

TrialRecord run_trial(std::size_t n, std::uint64_t seed, const RunConfig& config,
                      const CandidateObserver& observer) {
  const TrialSetup setup = prepare_trial(n, seed, config);
  const RouteProblem problem = setup.problem();

  TrialRecord rec;
  rec.n_total = n;
  rec.n_selected = setup.n_selected;
  rec.n_candidates = setup.graph.members().size();
  rec.seed = seed;
  rec.mode = config.selection_mode;
  rec.source = setup.source;
  rec.destination = setup.destination;

  Rng abc_rng = make_rng(seed, kAbcStream);
  rec.abc = abc_search(problem, config.abc, abc_rng, observer);
  Rng ga_rng = make_rng(seed, kGaStream);
  rec.ga = ga_search(problem, config.ga, ga_rng, observer);

  if (rec.abc.best_path) {
    rec.abc_intensity = bottleneck_intensity(*rec.abc.best_path, *setup.topology, setup.kb);
  }
  if (rec.ga.best_path) {
    rec.ga_intensity = bottleneck_intensity(*rec.ga.best_path, *setup.topology, setup.kb);
  }
  return rec;
}

TrialRow to_row(const TrialRecord& r) {
  TrialRow row;
  row.n = r.n_total;
  row.seed = r.seed;
  row.mode = std::string(grading::to_string(r.mode));
  row.n_selected = r.n_selected;
  row.abc_hops = r.abc.hop_count;
  row.ga_hops = r.ga.hop_count;
  row.abc_conv = r.abc.convergence_cycle;
  row.ga_conv = r.ga.convergence_cycle;
  row.abc_fit = r.abc.best_fitness.value();
  row.ga_fit = r.ga.best_fitness.value();
  row.path_found_abc = r.abc.best_path.has_value();
  row.path_found_ga = r.ga.best_path.has_value();
  return row;
}

std::string results_csv(std::span<const TrialRow> rows) {
  std::vector<const TrialRow*> sorted;
  for (const TrialRow& r : rows) {
    sorted.push_back(&r);
  }
  std::sort(sorted.begin(), sorted.end(), [](const TrialRow* a, const TrialRow* b) {
    return std::tie(a->n, a->seed) < std::tie(b->n, b->seed);
  });
  std::string out(kResultsHeader);
  out += '\n';
  for (const TrialRow* r : sorted) {
    out += std::to_string(r->n) + ',' + std::to_string(r->seed) + ',' + r->mode + ',' +
           std::to_string(r->n_selected) + ',' + std::to_string(r->abc_hops) + ',' +
           std::to_string(r->ga_hops) + ',' + std::to_string(r->abc_conv) + ',' +
           std::to_string(r->ga_conv) + ',' + format_double(r->abc_fit) + ',' +
           format_double(r->ga_fit) + ',' + (r->path_found_abc ? "1" : "0") + ',' +
           (r->path_found_ga ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<TrialRow> parse_results_csv(std::string_view text) {
  std::vector<TrialRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    if (header) {
      if (line != kResultsHeader) {
        throw std::invalid_argument("results csv: unexpected header");
      }
      header = false;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) {
        break;
      }
      start = comma + 1;
    }
    if (f.size() != 12) {
      throw std::invalid_argument("results csv: expected 12 fields, got " +
                                  std::to_string(f.size()));
    }
    TrialRow r;
    r.n = parse_number<std::size_t>(f[0], "n");
    r.seed = parse_number<std::uint64_t>(f[1], "seed");
    r.mode = std::string(f[2]);
    r.n_selected = parse_number<std::size_t>(f[3], "n_selected");
    r.abc_hops = parse_number<std::size_t>(f[4], "abc_hops");
    r.ga_hops = parse_number<std::size_t>(f[5], "ga_hops");
    r.abc_conv = parse_number<std::size_t>(f[6], "abc_conv");
    r.ga_conv = parse_number<std::size_t>(f[7], "ga_conv");
    r.abc_fit = parse_number<double>(f[8], "abc_fit");
    r.ga_fit = parse_number<double>(f[9], "ga_fit");
    r.path_found_abc = parse_flag(f[10]);
    r.path_found_ga = parse_flag(f[11]);
    rows.push_back(std::move(r));
  }
  if (header) {
    throw std::invalid_argument("results csv: missing header");
  }
  return rows;
}

std::optional<double> convergence_ratio(double abc_median, double ga_median) {
  if (ga_median == 0.0) {
    return std::nullopt;
  }
  return (ga_median - abc_median) / ga_median;
}

std::optional<double> convergence_ratio(const GroupSummary& group) {
  if (!group.median_conv_abc || !group.median_conv_ga) {
    return std::nullopt;
  }
  return convergence_ratio(*group.median_conv_abc, *group.median_conv_ga);
}

SuiteSummary summarize(std::span<const TrialRow> rows) {
  std::map<std::size_t, std::vector<const TrialRow*>> by_n;
  std::vector<const TrialRow*> all;
  for (const TrialRow& r : rows) {
    by_n[r.n].push_back(&r);
    all.push_back(&r);
  }
  SuiteSummary s;
  for (const auto& [n, group] : by_n) {
    GroupSummary g;
    g.n = n;
    g.trials = group.size();
    std::vector<double> hops_abc, hops_ga, conv_abc, conv_ga;
    std::size_t found_abc = 0;
    std::size_t found_ga = 0;
    for (const TrialRow* r : group) {
      if (r->path_found_abc) {
        ++found_abc;
        hops_abc.push_back(static_cast<double>(r->abc_hops));
        conv_abc.push_back(static_cast<double>(r->abc_conv));
      }
      if (r->path_found_ga) {
        ++found_ga;
        hops_ga.push_back(static_cast<double>(r->ga_hops));
        conv_ga.push_back(static_cast<double>(r->ga_conv));
      }
    }
    g.path_available_abc = static_cast<double>(found_abc) / static_cast<double>(g.trials);
    g.path_available_ga = static_cast<double>(found_ga) / static_cast<double>(g.trials);
    g.median_hops_abc = median(std::move(hops_abc));
    g.median_hops_ga = median(std::move(hops_ga));
    g.median_conv_abc = median(std::move(conv_abc));
    g.median_conv_ga = median(std::move(conv_ga));
    g.convergence_ratio = convergence_ratio(g);
    g.quality = quality_of(group);
    s.groups.push_back(std::move(g));
  }
  s.quality = quality_of(all);
  return s;
}

nlohmann::json summary_to_json(const SuiteSummary& summary, grading::SelectionMode mode) {
  nlohmann::json groups = nlohmann::json::array();
  for (const GroupSummary& g : summary.groups) {
    groups.push_back({{"n", g.n},
                      {"trials", g.trials},
                      {"path_available_abc", g.path_available_abc},
                      {"path_available_ga", g.path_available_ga},
                      {"median_hops_abc", optional_json(g.median_hops_abc)},
                      {"median_hops_ga", optional_json(g.median_hops_ga)},
                      {"median_conv_abc", optional_json(g.median_conv_abc)},
                      {"median_conv_ga", optional_json(g.median_conv_ga)},
                      {"convergence_ratio", optional_json(g.convergence_ratio)},
                      {"quality", quality_json(g.quality)}});
  }
  return {{"selection_mode", std::string(grading::to_string(mode))},
          {"groups", std::move(groups)},
          {"quality", quality_json(summary.quality)}};
}

SuiteResult run_suite(const RunConfig& config) {
  config.validate();
  std::vector<std::size_t> counts = config.node_counts;
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());

  std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
  for (std::size_t n : counts) {
    for (std::size_t k = 0; k < config.seeds_per_n; ++k) {
      jobs.emplace_back(n, config.seed + k);
    }
  }

  SuiteResult result;
  result.records.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        result.records[i] = run_trial(jobs[i].first, jobs[i].second, config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  const std::size_t threads = std::min(config.threads, std::max<std::size_t>(1, jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  std::vector<TrialRow> rows;
  rows.reserve(result.records.size());
  for (const TrialRecord& r : result.records) {
    rows.push_back(to_row(r));
  }
  result.summary = summarize(rows);
  return result;
}

std::string_view to_string(PlotKind kind) noexcept {
  return kind == PlotKind::kTrafficIntensity ? "traffic-intensity" : "throughput";
}

std::string emit_plot_data(std::span<const TrialRecord> records, PlotKind kind) {
  if (records.empty()) {
    throw std::invalid_argument("emit_plot_data: no records");
  }
  std::vector<const TrialRecord*> sorted;
  for (const TrialRecord& r : records) {
    sorted.push_back(&r);
  }
  std::sort(sorted.begin(), sorted.end(), [](const TrialRecord* a, const TrialRecord* b) {
    return std::tie(a->n_total, a->seed) < std::tie(b->n_total, b->seed);
  });
  std::string out = "n,seed,algo,cycle,value\n";
  auto row = [&](const TrialRecord& r, std::string_view algo, const RouteResult& res,
                 const std::optional<double>& intensity) {
    double value = std::nan("");
    if (res.best_path) {
      value = kind == PlotKind::kTrafficIntensity ? intensity.value_or(std::nan(""))
                                                  : res.best_fitness.value();
    }
    out += std::to_string(r.n_total) + ',' + std::to_string(r.seed) + ',' + std::string(algo) +
           ',' + std::to_string(res.convergence_cycle) + ',' + format_double(value) + '\n';
  };
  for (const TrialRecord* r : sorted) {
    row(*r, "abc", r->abc, r->abc_intensity);
    row(*r, "ga", r->ga, r->ga_intensity);
  }
  return out;
}

std::string format_summary_table(const SuiteSummary& summary) {
  auto opt = [](const std::optional<double>& v) {
    char buf[32];
    if (!v) {
      return std::string("-");
    }
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%6s %6s %9s %9s %8s %8s %8s %8s %7s\n", "n", "trials",
                "avail_abc", "avail_ga", "hops_abc", "hops_ga", "conv_abc", "conv_ga", "ratio");
  os << line;
  for (const GroupSummary& g : summary.groups) {
    std::snprintf(line, sizeof line, "%6zu %6zu %9.2f %9.2f %8s %8s %8s %8s %7s\n", g.n, g.trials,
                  g.path_available_abc, g.path_available_ga, opt(g.median_hops_abc).c_str(),
                  opt(g.median_hops_ga).c_str(), opt(g.median_conv_abc).c_str(),
                  opt(g.median_conv_ga).c_str(), opt(g.convergence_ratio).c_str());
    os << line;
  }
  const QualityFractions& q = summary.quality;
  std::snprintf(line, sizeof line,
                "quality over %zu trials: ga_better %.3f  equal %.3f  abc_better %.3f\n",
                q.compared, q.ga_better, q.equal, q.abc_better);
  os << line;
  return os.str();
}

}  // namespace gradedroute::bench
