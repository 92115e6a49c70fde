#pragma once

// JSON documents exchanged with the command line and other tools.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gradedroute/grading.hpp"
#include "gradedroute/optimizers.hpp"
#include "gradedroute/topology.hpp"

namespace gradedroute::io {

/// { "seed", "nodes": [{id, x, y, lifetime, density, resource}],
///   "links": [{a, b, capacity_mbps, t0, gamma, mu}] }
/// The link-state keys are optional on input and default to an idle link.
nlohmann::json topology_to_json(const Topology& topology);
Topology topology_from_json(const nlohmann::json& doc);

/// One object per node: {id, priority, delay_s, avail_bw_mbps, grade, mode,
/// selected}. An unbounded delay is written as null.
nlohmann::json grades_to_json(const grading::KnowledgeBase& kb, grading::SelectionMode mode);

nlohmann::json route_result_to_json(const RouteResult& result);

/// Pretty-printed document followed by a newline.
std::string dump(const nlohmann::json& doc);

/// Throw IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void save_topology(const std::filesystem::path& path, const Topology& topology);
/// Throws IoError for unreadable files, std::invalid_argument for malformed
/// documents.
Topology load_topology(const std::filesystem::path& path);

}  // namespace gradedroute::io
