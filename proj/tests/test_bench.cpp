#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gradedroute/bench.hpp"
#include "oracles.hpp"

using namespace gradedroute;
using namespace gradedroute::bench;

namespace {

TrialRow row(std::size_t n, std::uint64_t seed, double abc_fit, double ga_fit, bool found = true,
             std::size_t abc_conv = 2, std::size_t ga_conv = 5) {
  TrialRow r;
  r.n = n;
  r.seed = seed;
  r.mode = "best-classes";
  r.n_selected = n / 2;
  r.abc_hops = r.ga_hops = found ? 3 : 0;
  r.abc_conv = abc_conv;
  r.ga_conv = ga_conv;
  r.abc_fit = abc_fit;
  r.ga_fit = ga_fit;
  r.path_found_abc = r.path_found_ga = found;
  return r;
}

}  // namespace

TEST(Endpoints, DestinationDiffersFromSource) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Topology t = generate_topology(16, 0.3, seed);
    Rng rng = make_rng(seed, kEndpointStream);
    const auto [s, d] = pick_endpoints(t, rng);
    EXPECT_NE(s, d);
    EXPECT_LT(d, t.size());
  }
}

TEST(Endpoints, QuadrantChosenUniformly) {
  std::vector<int> hits(5, 0);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const Topology t = generate_topology(8, 0.3, seed % 50);
    Rng rng = make_rng(seed, kEndpointStream);
    const auto [s, d] = pick_endpoints(t, rng);
    std::set<int> occupied;
    for (const Node& n : t.nodes()) {
      if (n.id != s) occupied.insert(oracle::quadrant_by_angle(t.node(s).position, n.position));
    }
    if (occupied.size() == 4) {
      ++hits[oracle::quadrant_by_angle(t.node(s).position, t.node(d).position)];
    }
  }
  const int total = hits[1] + hits[2] + hits[3] + hits[4];
  ASSERT_GT(total, 200);
  for (int q = 1; q <= 4; ++q) EXPECT_NEAR(hits[q] / static_cast<double>(total), 0.25, 0.06);
}

TEST(Trial, RecordIsConsistent) {
  const RunConfig cfg;
  const auto rec = run_trial(64, 3, cfg);
  EXPECT_EQ(rec.n_total, 64u);
  EXPECT_EQ(rec.seed, 3u);
  EXPECT_LE(rec.n_candidates, 64u);
  EXPECT_EQ(rec.abc.best_path.has_value(), rec.abc_intensity.has_value());
  const auto again = run_trial(64, 3, cfg);
  EXPECT_EQ(to_row(rec), to_row(again));
}

TEST(Trial, IntensityUsesBottleneck) {
  const RunConfig cfg;
  for (std::uint64_t seed = 1; seed < 20; ++seed) {
    const auto setup = prepare_trial(32, seed, cfg);
    Rng rng(seed);
    const auto p = random_path(setup.graph, setup.source, setup.destination, rng);
    if (!p) continue;
    const double v = bottleneck_intensity(*p, *setup.topology, setup.kb);
    EXPECT_GE(v, 0.0);
  }
}

TEST(Csv, RoundTrip) {
  std::vector<TrialRow> rows{row(64, 2, 0.1 + 0.2, 1.0 / 3.0), row(15, 9, 0, 0, false),
                             row(64, 1, 29.999999999999996, 7)};
  const std::string text = results_csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), kResultsHeader);
  const auto parsed = parse_results_csv(text);
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_EQ(parsed[0], rows[1]);
  EXPECT_EQ(parsed[1], rows[2]);
  EXPECT_EQ(parsed[2], rows[0]);
  EXPECT_EQ(results_csv(parsed), text);
}

TEST(Csv, Malformed) {
  EXPECT_THROW(parse_results_csv(""), std::invalid_argument);
  EXPECT_THROW(parse_results_csv("a,b\n"), std::invalid_argument);
  std::string bad(kResultsHeader);
  bad += "\n64,1,best-classes,3\n";
  EXPECT_THROW(parse_results_csv(bad), std::invalid_argument);
}

TEST(Summary, QualityFractions) {
  std::vector<TrialRow> rows{row(64, 1, 20, 10), row(64, 2, 10, 10), row(64, 3, 10, 20),
                             row(64, 4, 15, 10), row(64, 5, 0, 0, false)};
  const auto s = summarize(rows);
  ASSERT_EQ(s.groups.size(), 1u);
  EXPECT_EQ(s.quality.compared, 4u);
  EXPECT_DOUBLE_EQ(s.quality.abc_better, 0.5);
  EXPECT_DOUBLE_EQ(s.quality.equal, 0.25);
  EXPECT_DOUBLE_EQ(s.quality.ga_better, 0.25);
  EXPECT_DOUBLE_EQ(s.groups[0].path_available_abc, 0.8);
  EXPECT_DOUBLE_EQ(*s.groups[0].median_conv_abc, 2.0);
  EXPECT_DOUBLE_EQ(*s.groups[0].median_conv_ga, 5.0);
  EXPECT_DOUBLE_EQ(*s.groups[0].convergence_ratio, 0.6);
}

TEST(Summary, TieTolerance) {
  std::vector<TrialRow> rows{row(64, 1, 10.0 + 1e-12, 10.0)};
  EXPECT_DOUBLE_EQ(summarize(rows).quality.equal, 1.0);
}

TEST(Summary, OrderIndependentAndGrouped) {
  std::vector<TrialRow> rows{row(15, 1, 1, 2), row(64, 1, 3, 2), row(15, 2, 5, 5, true, 1, 1)};
  std::vector<TrialRow> reversed(rows.rbegin(), rows.rend());
  EXPECT_EQ(summarize(rows), summarize(reversed));
  EXPECT_EQ(summarize(rows).groups.size(), 2u);
  EXPECT_EQ(summarize(rows).groups[0].n, 15u);
}

TEST(Summary, RatioUndefinedForZeroGaMedian) {
  EXPECT_FALSE(convergence_ratio(3.0, 0.0).has_value());
  EXPECT_DOUBLE_EQ(*convergence_ratio(4.0, 10.0), 0.6);
  std::vector<TrialRow> rows{row(64, 1, 0, 0, false)};
  EXPECT_FALSE(summarize(rows).groups[0].median_conv_abc.has_value());
}

TEST(Suite, ThreadCountDoesNotChangeResults) {
  RunConfig cfg;
  cfg.node_counts = {15, 32};
  cfg.seeds_per_n = 6;
  cfg.threads = 1;
  const auto one = run_suite(cfg);
  cfg.threads = 3;
  const auto three = run_suite(cfg);
  ASSERT_EQ(one.records.size(), 12u);
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    EXPECT_EQ(to_row(one.records[i]), to_row(three.records[i]));
  }
  EXPECT_EQ(one.summary, three.summary);
  EXPECT_EQ(one.records.front().n_total, 15u);
  EXPECT_EQ(one.records.back().seed, 6u);
}

TEST(Suite, SummaryRecomputableFromCsv) {
  RunConfig cfg;
  cfg.node_counts = {16, 64};
  cfg.seeds_per_n = 5;
  const auto suite = run_suite(cfg);
  std::vector<TrialRow> rows;
  for (const auto& r : suite.records) rows.push_back(to_row(r));
  EXPECT_EQ(summarize(parse_results_csv(results_csv(rows))), suite.summary);
}

TEST(Plot, RowsPerAlgorithm) {
  const RunConfig cfg;
  std::vector<TrialRecord> recs{run_trial(32, 1, cfg)};
  const std::string text = emit_plot_data(recs, PlotKind::kThroughput);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_EQ(text.substr(0, text.find('\n')), "n,seed,algo,cycle,value");
  EXPECT_NE(text.find(",abc,"), std::string::npos);
  EXPECT_NE(text.find(",ga,"), std::string::npos);
  EXPECT_THROW(emit_plot_data({}, PlotKind::kThroughput), std::invalid_argument);
}

TEST(Plot, MissingPathIsNan) {
  TrialRecord r;
  r.n_total = 15;
  r.seed = 4;
  const std::string text = emit_plot_data(std::vector<TrialRecord>{r}, PlotKind::kTrafficIntensity);
  EXPECT_NE(text.find("15,4,abc,0,nan"), std::string::npos);
}

TEST(Table, MentionsEveryGroup) {
  std::vector<TrialRow> rows{row(15, 1, 1, 2), row(1024, 1, 3, 2)};
  const std::string t = format_summary_table(summarize(rows));
  EXPECT_NE(t.find("1024"), std::string::npos);
  EXPECT_NE(t.find("abc_better"), std::string::npos);
}
