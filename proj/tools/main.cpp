#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradedroute/bench.hpp"
#include "gradedroute/config.hpp"
#include "gradedroute/errors.hpp"
#include "gradedroute/grading.hpp"
#include "gradedroute/io.hpp"
#include "gradedroute/optimizers.hpp"
#include "gradedroute/random.hpp"
#include "gradedroute/topology.hpp"

namespace fs = std::filesystem;
namespace gr = gradedroute;

namespace {

struct Shared {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<std::size_t> threads;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--config", config_path, "flat JSON run configuration");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--mode", mode, "selection mode: best-classes or literal");
  }

  gr::RunConfig resolve() const {
    gr::RunConfig cfg = config_path.empty() ? gr::RunConfig{} : gr::load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out) cfg.out_dir = *out;
    if (mode) cfg.selection_mode = gr::grading::parse_selection_mode(*mode);
    if (threads) cfg.threads = *threads;
    return cfg;
  }
};

void write_config(const gr::RunConfig& cfg) {
  gr::io::write_text(fs::path(cfg.out_dir) / "run_config.json", gr::io::dump(gr::to_json(cfg)));
}

void print_result(std::string_view algo, const gr::RouteResult& r) {
  std::cout << "[" << algo << "]\n";
  if (!r.best_path) {
    std::cout << "  path not available\n";
    return;
  }
  std::cout << "  path:";
  for (gr::NodeId n : r.best_path->nodes) {
    std::cout << ' ' << n;
  }
  std::cout << "\n  hops: " << r.hop_count << "\n  bottleneck_mbps: " << r.best_fitness.value()
            << "\n  convergence_cycle: " << r.convergence_cycle << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded-network routing with bee colony and genetic searches"};
  app.require_subcommand(1);

  Shared shared;

  auto* gen = app.add_subcommand("generate", "generate a random geometric topology");
  std::size_t gen_n = 0;
  std::optional<double> gen_density;
  gen->add_option("--n", gen_n, "node count")->required();
  gen->add_option("--density", gen_density, "link density in (0, 1]");
  shared.attach(gen);

  auto* grade = app.add_subcommand("grade", "grade every node of a topology");
  std::string grade_topo;
  grade->add_option("--topology", grade_topo, "topology JSON")->required();
  shared.attach(grade);

  auto* route = app.add_subcommand("route", "route between two nodes");
  std::string route_topo;
  gr::NodeId src = 0;
  gr::NodeId dst = 0;
  std::string algo = "both";
  route->add_option("--topology", route_topo, "topology JSON")->required();
  route->add_option("--source", src, "source node id")->required();
  route->add_option("--destination", dst, "destination node id")->required();
  route->add_option("--algo", algo, "abc, ga or both")
      ->check(CLI::IsMember({"abc", "ga", "both"}));
  shared.attach(route);

  auto* bench = app.add_subcommand("bench", "run the benchmark sweep");
  std::vector<std::size_t> bench_n;
  std::optional<std::size_t> bench_seeds;
  bench->add_option("--n", bench_n, "node count, repeatable");
  bench->add_option("--seeds", bench_seeds, "seeds per node count");
  bench->add_option("--threads", shared.threads, "worker threads");
  shared.attach(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    gr::RunConfig cfg = shared.resolve();

    if (gen->parsed()) {
      if (gen_density) cfg.link_density = *gen_density;
      cfg.node_counts = {gen_n};
      cfg.validate();
      const gr::Topology topo =
          gr::generate_topology(gen_n, cfg.link_density, cfg.seed, cfg.environment());
      gr::io::save_topology(fs::path(cfg.out_dir) / "topology.json", topo);
      write_config(cfg);
      std::cout << "nodes: " << topo.size() << "\nlinks: " << topo.links().size() << "\n";
    } else if (grade->parsed()) {
      cfg.validate();
      const gr::Topology topo = gr::io::load_topology(grade_topo);
      const auto kb = gr::grading::build_knowledge_base(topo, cfg.traffic(), cfg.grading());
      gr::io::write_text(fs::path(cfg.out_dir) / "grades.json",
                         gr::io::dump(gr::io::grades_to_json(kb, cfg.selection_mode)));
      write_config(cfg);
      const auto selected = gr::grading::select_feasible(topo, kb, cfg.selection_mode);
      std::cout << "graded: " << topo.size() << "\nselected: " << selected.size() << "\n";
    } else if (route->parsed()) {
      cfg.validate();
      const gr::Topology topo = gr::io::load_topology(route_topo);
      const auto kb = gr::grading::build_knowledge_base(topo, cfg.traffic(), cfg.grading());
      const auto graph = gr::SearchGraph::for_route(topo, kb, cfg.selection_mode, src, dst);
      const gr::RouteProblem problem{graph, src, dst, kb, cfg.min_link_mbps()};

      nlohmann::json report = nlohmann::json::object();
      report["source"] = src;
      report["destination"] = dst;
      if (algo == "abc" || algo == "both") {
        gr::Rng rng = gr::make_rng(cfg.seed, gr::bench::kAbcStream);
        const auto r = gr::abc_search(problem, cfg.abc, rng);
        print_result("abc", r);
        report["abc"] = gr::io::route_result_to_json(r);
      }
      if (algo == "ga" || algo == "both") {
        gr::Rng rng = gr::make_rng(cfg.seed, gr::bench::kGaStream);
        const auto r = gr::ga_search(problem, cfg.ga, rng);
        print_result("ga", r);
        report["ga"] = gr::io::route_result_to_json(r);
      }
      const fs::path out(cfg.out_dir);
      gr::io::write_text(out / "grades.json",
                         gr::io::dump(gr::io::grades_to_json(kb, cfg.selection_mode)));
      gr::io::write_text(out / "route.json", gr::io::dump(report));
      write_config(cfg);
    } else if (bench->parsed()) {
      if (!bench_n.empty()) cfg.node_counts = bench_n;
      if (bench_seeds) cfg.seeds_per_n = *bench_seeds;
      cfg.validate();
      const auto suite = gr::bench::run_suite(cfg);
      std::vector<gr::bench::TrialRow> rows;
      for (const auto& rec : suite.records) {
        rows.push_back(gr::bench::to_row(rec));
      }
      const fs::path out(cfg.out_dir);
      gr::io::write_text(out / "results.csv", gr::bench::results_csv(rows));
      gr::io::write_text(out / "summary.json",
                         gr::io::dump(gr::bench::summary_to_json(suite.summary, cfg.selection_mode)));
      gr::io::write_text(out / "plot_traffic_intensity.csv",
                         gr::bench::emit_plot_data(suite.records,
                                                   gr::bench::PlotKind::kTrafficIntensity));
      gr::io::write_text(out / "plot_throughput.csv",
                         gr::bench::emit_plot_data(suite.records, gr::bench::PlotKind::kThroughput));
      write_config(cfg);
      std::cout << gr::bench::format_summary_table(suite.summary);
    }
  } catch (const gr::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
