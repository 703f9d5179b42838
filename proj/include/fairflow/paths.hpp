#pragma once

#include <optional>
#include <vector>

#include "fairflow/flow.hpp"

namespace fairflow {

struct PathResult {
    Path path;
    double cost = 0;
};

// Minimum-cost simple source->sink path for commodity k under fixed
// nonnegative edge costs. Among equal-cost paths the lexicographically
// smallest edge-id sequence is returned. Throws DomainError on negative
// costs, StructuralError when the sink is unreachable.
PathResult shortest_path(const Instance& inst, const std::vector<double>& costs, int k);

// Same, restricted to edges e with usable[e] != 0. Returns nullopt when the
// sink cannot be reached through usable edges.
std::optional<PathResult> shortest_path_masked(const Instance& inst,
                                               const std::vector<double>& costs, int k,
                                               const std::vector<char>& usable);

// All simple source->sink paths of commodity k in lexicographic order.
// Throws CapacityError when more than `limit` paths exist.
std::vector<Path> enumerate_paths(const Instance& inst, int k, size_t limit = 4096);

// Kahn order over the subgraph of usable edges; nullopt when it has a cycle.
std::optional<std::vector<int>> topo_order(const Instance& inst, const std::vector<char>& usable);

// Some directed cycle within the usable subgraph, as an edge sequence.
std::optional<Path> find_cycle(const Instance& inst, const std::vector<char>& usable);

// Maximum-cost source->sink path in the acyclic usable subgraph. Requires
// the subgraph to be a DAG (call topo_order first). Nullopt when no usable
// path exists.
std::optional<PathResult> longest_path_dag(const Instance& inst, const std::vector<double>& costs,
                                           int k, const std::vector<char>& usable);

// Max-flow value from source to sink where MM1 edges are capped at their
// capacity and all other edges are uncapacitated.
double mm1_max_flow(const Instance& inst, int source, int sink);

// Fails fast when some commodity's demand cannot be pushed below the MM1
// capacities (necessary condition; checked per commodity and, for commodities
// sharing endpoints, in aggregate).
void check_mm1_capacity(const Instance& inst);

}  // namespace fairflow
