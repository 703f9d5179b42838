#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairflow/latency.hpp"

namespace fairflow {

struct Edge {
    int from = 0;
    int to = 0;
    LatencyFn latency;
};

struct Commodity {
    int source = 0;
    int sink = 0;
    Rat demand{1};

    double demand_d() const { return to_double(demand); }
};

// Routing instance: directed multigraph, one latency per edge, a finite set of
// commodities with positive demands. Nodes are 0..num_nodes-1; parallel edges
// and self-parallel structures are allowed, self-loops are not.
class Instance {
  public:
    Instance(int num_nodes, std::vector<Edge> edges, std::vector<Commodity> commodities);

    int num_nodes() const { return num_nodes_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_commodities() const { return static_cast<int>(commodities_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Commodity>& commodities() const { return commodities_; }
    const Commodity& commodity(int k) const { return commodities_[k]; }

    // Outgoing edge ids per node, ascending; fixed traversal order everywhere.
    const std::vector<std::vector<int>>& out_edges() const { return out_; }
    const std::vector<std::vector<int>>& in_edges() const { return in_; }

    double min_demand() const;
    double total_demand() const;
    Rat total_demand_exact() const;

    bool has_mm1() const;

  private:
    int num_nodes_;
    std::vector<Edge> edges_;
    std::vector<Commodity> commodities_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
};

// Cutoff separating "positive" loads from numerical residue. Default scales
// with the smallest demand and never exceeds 1e-6 times it.
struct PositiveThreshold {
    double value = 1e-9;

    static PositiveThreshold for_instance(const Instance& inst);
};

}  // namespace fairflow
