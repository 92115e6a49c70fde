#include "gradedroute/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gradedroute/errors.hpp"

namespace gradedroute::io {

using nlohmann::json;

json topology_to_json(const Topology& topology) {
  json nodes = json::array();
  for (const Node& n : topology.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"x", n.position.x},
                     {"y", n.position.y},
                     {"lifetime", n.qos.network_lifetime},
                     {"density", n.qos.node_density},
                     {"resource", n.qos.resource_available}});
  }
  json links = json::array();
  for (const Link& l : topology.links()) {
    links.push_back({{"a", l.a},
                     {"b", l.b},
                     {"capacity_mbps", l.capacity_mbps},
                     {"t0", l.state.initial_load},
                     {"gamma", l.state.arrival_rate},
                     {"mu", l.state.service_rate}});
  }
  return json{{"seed", topology.seed()}, {"nodes", std::move(nodes)}, {"links", std::move(links)}};
}

Topology topology_from_json(const json& doc) {
  try {
    std::vector<Node> nodes;
    for (const json& jn : doc.at("nodes")) {
      Node n;
      n.id = jn.at("id").get<NodeId>();
      n.position.x = jn.at("x").get<double>();
      n.position.y = jn.at("y").get<double>();
      n.qos.network_lifetime = jn.at("lifetime").get<double>();
      n.qos.node_density = jn.at("density").get<std::uint32_t>();
      n.qos.resource_available = jn.at("resource").get<bool>();
      nodes.push_back(n);
    }
    std::vector<Link> links;
    for (const json& jl : doc.at("links")) {
      Link l;
      l.a = jl.at("a").get<NodeId>();
      l.b = jl.at("b").get<NodeId>();
      l.capacity_mbps = jl.at("capacity_mbps").get<double>();
      l.state.initial_load = jl.value("t0", 0.0);
      l.state.arrival_rate = jl.value("gamma", 0.0);
      l.state.service_rate = jl.value("mu", 1.0);
      links.push_back(l);
    }
    return Topology(doc.at("seed").get<std::uint64_t>(), std::move(nodes), std::move(links));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("topology document: ") + e.what());
  }
}

json grades_to_json(const grading::KnowledgeBase& kb, grading::SelectionMode mode) {
  json out = json::array();
  const std::string mode_name(grading::to_string(mode));
  for (const grading::GradeRecord& r : kb.records()) {
    json delay = std::isfinite(r.delay_s) ? json(r.delay_s) : json(nullptr);
    out.push_back({{"id", r.node},
                   {"priority", grading::level(r.priority)},
                   {"delay_s", std::move(delay)},
                   {"avail_bw_mbps", r.available_bw_mbps},
                   {"grade", r.grade},
                   {"mode", mode_name},
                   {"selected", grading::is_selected(r.priority, mode)}});
  }
  return out;
}

json route_result_to_json(const RouteResult& r) {
  json path = r.best_path ? json(r.best_path->nodes) : json(nullptr);
  return json{{"path_found", r.best_path.has_value()},
              {"path", std::move(path)},
              {"hop_count", r.hop_count},
              {"bottleneck_mbps", r.best_fitness.value()},
              {"convergence_cycle", r.convergence_cycle},
              {"stagnation_cycle", r.stagnation_cycle},
              {"evaluations", r.evaluations},
              {"scouts", r.scouts},
              {"fitness_trace", r.fitness_trace}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                    ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_topology(const std::filesystem::path& path, const Topology& topology) {
  write_text(path, dump(topology_to_json(topology)));
}

Topology load_topology(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + " is not valid JSON: " + e.what());
  }
  return topology_from_json(doc);
}

}  // namespace gradedroute::io
