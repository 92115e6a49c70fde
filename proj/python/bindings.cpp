#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "gradedroute/bench.hpp"
#include "gradedroute/config.hpp"
#include "gradedroute/errors.hpp"
#include "gradedroute/grading.hpp"
#include "gradedroute/io.hpp"
#include "gradedroute/optimizers.hpp"
#include "gradedroute/topology.hpp"
#include "gradedroute/traffic.hpp"

namespace py = pybind11;
namespace gr = gradedroute;

namespace {

gr::RunConfig config_from(const std::string& overrides) {
  if (overrides.empty()) {
    return {};
  }
  gr::RunConfig cfg = gr::apply_json({}, nlohmann::json::parse(overrides));
  cfg.validate();
  return cfg;
}

std::string grade(const gr::Topology& topo, const std::string& overrides) {
  const gr::RunConfig cfg = config_from(overrides);
  const auto kb = gr::grading::build_knowledge_base(topo, cfg.traffic(), cfg.grading());
  return gr::io::grades_to_json(kb, cfg.selection_mode).dump();
}

std::string route(const gr::Topology& topo, gr::NodeId source, gr::NodeId destination,
                  const std::string& algo, std::uint64_t seed, const std::string& overrides) {
  if (algo != "abc" && algo != "ga" && algo != "both") {
    throw std::invalid_argument("algo must be abc, ga or both");
  }
  const gr::RunConfig cfg = config_from(overrides);
  const auto kb = gr::grading::build_knowledge_base(topo, cfg.traffic(), cfg.grading());
  const auto graph = gr::SearchGraph::for_route(topo, kb, cfg.selection_mode, source, destination);
  const gr::RouteProblem problem{graph, source, destination, kb, cfg.min_link_mbps()};
  nlohmann::json out = nlohmann::json::object();
  if (algo != "ga") {
    gr::Rng rng = gr::make_rng(seed, gr::bench::kAbcStream);
    out["abc"] = gr::io::route_result_to_json(gr::abc_search(problem, cfg.abc, rng));
  }
  if (algo != "abc") {
    gr::Rng rng = gr::make_rng(seed, gr::bench::kGaStream);
    out["ga"] = gr::io::route_result_to_json(gr::ga_search(problem, cfg.ga, rng));
  }
  return out.dump();
}

py::tuple run_suite(const std::vector<std::size_t>& node_counts, std::size_t seeds_per_n,
                    std::uint64_t seed, const std::string& overrides) {
  gr::RunConfig cfg = config_from(overrides);
  cfg.node_counts = node_counts;
  cfg.seeds_per_n = seeds_per_n;
  cfg.seed = seed;
  gr::bench::SuiteResult suite;
  {
    py::gil_scoped_release release;
    suite = gr::bench::run_suite(cfg);
  }
  std::vector<gr::bench::TrialRow> rows;
  for (const auto& r : suite.records) {
    rows.push_back(gr::bench::to_row(r));
  }
  return py::make_tuple(gr::bench::results_csv(rows),
                        gr::bench::summary_to_json(suite.summary, cfg.selection_mode).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graded-network topology, traffic and route search core";

  py::register_exception<gr::SaturatedChannelError>(m, "SaturatedChannelError", PyExc_ValueError);
  py::register_exception<gr::InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);
  py::register_exception<gr::IoError>(m, "IoError", PyExc_OSError);

  py::class_<gr::Topology>(m, "Topology")
      .def_property_readonly("seed", &gr::Topology::seed)
      .def_property_readonly("size", &gr::Topology::size)
      .def_property_readonly("link_count", [](const gr::Topology& t) { return t.links().size(); })
      .def("neighbors", [](const gr::Topology& t, gr::NodeId id) {
        const auto span = t.neighbors(id);
        return std::vector<gr::NodeId>(span.begin(), span.end());
      })
      .def("to_json", [](const gr::Topology& t) { return gr::io::topology_to_json(t).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return gr::io::topology_from_json(nlohmann::json::parse(text));
      })
      .def("__len__", &gr::Topology::size);

  m.def("generate_topology",
        [](std::size_t n, double density, std::uint64_t seed) {
          return gr::generate_topology(n, density, seed);
        },
        py::arg("n"), py::arg("density"), py::arg("seed"));

  m.def("link_load_at",
        [](double t0, double gamma, double mu, double t) {
          return gr::traffic::link_load_at(gr::traffic::LinkState{t0, gamma, mu}, t);
        },
        py::arg("t0"), py::arg("gamma"), py::arg("mu"), py::arg("t"));

  m.def("average_delay",
        [](std::vector<double> flows, double total, double mu, std::vector<double> caps) {
          return gr::grading::average_delay({std::move(flows), total, mu, std::move(caps)});
        },
        py::arg("flow_rates"), py::arg("total_traffic"), py::arg("service_rate"),
        py::arg("capacities"));

  m.def("balance_traffic",
        [](const std::vector<double>& current, double envisaged) {
          const auto r = gr::grading::balance_traffic(current, envisaged);
          return py::make_tuple(r.actual, r.objective);
        },
        py::arg("current"), py::arg("envisaged"));

  m.def("grade", &grade, py::arg("topology"), py::arg("config") = "");
  m.def("route", &route, py::arg("topology"), py::arg("source"), py::arg("destination"),
        py::arg("algo") = "both", py::arg("seed") = 1, py::arg("config") = "");
  m.def("run_suite", &run_suite, py::arg("node_counts"), py::arg("seeds_per_n"),
        py::arg("seed") = 1, py::arg("config") = "");
}
