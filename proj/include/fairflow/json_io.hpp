#pragma once

#include <string>

#include "json.hpp"

#include "fairflow/flow.hpp"

namespace fairflow {

// On-disk format "fairflow_v1". Rational values are emitted as plain JSON
// numbers when the double round-trips exactly and as "p/q" strings otherwise;
// both forms are accepted on input.

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json edge_flow_to_json(const Instance& inst, const EdgeFlow& f);
EdgeFlow edge_flow_from_json(const Instance& inst, const nlohmann::json& j);

nlohmann::json path_flow_to_json(const Instance& inst, const PathFlow& f);
PathFlow path_flow_from_json(const Instance& inst, const nlohmann::json& j);

Instance load_instance(const std::string& file);
void save_instance(const Instance& inst, const std::string& file);

EdgeFlow load_edge_flow(const Instance& inst, const std::string& file);
void save_edge_flow(const Instance& inst, const EdgeFlow& f, const std::string& file);

PathFlow load_path_flow(const Instance& inst, const std::string& file);
void save_path_flow(const Instance& inst, const PathFlow& f, const std::string& file);

// Stable content digest of the canonical serialization (FNV-1a 64, hex).
std::string instance_digest(const Instance& inst);

}  // namespace fairflow
