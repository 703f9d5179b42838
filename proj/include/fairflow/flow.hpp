#pragma once

#include <map>
#include <string>
#include <vector>

#include "fairflow/instance.hpp"

namespace fairflow {

// A path is a sequence of edge ids; the sequence itself is the canonical form,
// ties between equal-cost paths are always broken lexicographically on it.
using Path = std::vector<int>;

bool path_connects(const Instance& inst, const Path& p, int source, int sink);
bool path_is_simple(const Instance& inst, const Path& p);

// Per-commodity edge loads, dense: load[k][e].
struct EdgeFlow {
    std::vector<std::vector<double>> load;

    static EdgeFlow zero(const Instance& inst);
    double aggregate(int e) const;
    std::vector<double> aggregate_loads() const;
};

// Per-commodity path loads; map keys give a deterministic lexicographic order.
struct PathFlow {
    std::vector<std::map<Path, double>> flow;

    static PathFlow zero(const Instance& inst);
    int used_paths(int k) const { return static_cast<int>(flow[k].size()); }
    int total_used_paths() const;
};

// Exact counterpart used by gadget fixtures and the brute-force oracle.
struct ExactEdgeFlow {
    std::vector<std::vector<Rat>> load;

    static ExactEdgeFlow zero(const Instance& inst);
    Rat aggregate(int e) const;
    EdgeFlow to_double() const;
};

struct ExactPathFlow {
    std::vector<std::map<Path, Rat>> flow;

    static ExactPathFlow zero(const Instance& inst);
    PathFlow to_double() const;
    ExactEdgeFlow induced(const Instance& inst) const;
};

struct FeasibilityViolation {
    int commodity = -1;
    int node = -1;  // -1 when the violation is a negative edge load
    int edge = -1;  // -1 when the violation is a conservation mismatch
    double amount = 0;
    std::string describe() const;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<FeasibilityViolation> violations;
};

// Conservation and nonnegativity of an edge flow, within tol.
FeasibilityReport check_feasible(const Instance& inst, const EdgeFlow& flow, double tol = 1e-9);

// Path flow sanity: connectivity, simplicity, positive flows, demands met.
void validate_path_flow(const Instance& inst, const PathFlow& pf, double tol = 1e-9);

EdgeFlow induced_edge_flow(const Instance& inst, const PathFlow& pf);

// Latency of every edge at the aggregate loads of `flow`.
std::vector<double> edge_costs(const Instance& inst, const EdgeFlow& flow);
std::vector<double> edge_costs(const Instance& inst, const std::vector<double>& aggregate);

double path_latency(const Instance& inst, const Path& p, const std::vector<double>& costs);
Rat path_latency_exact(const Instance& inst, const Path& p, const std::vector<Rat>& costs);

std::vector<Rat> edge_costs_exact(const Instance& inst, const ExactEdgeFlow& flow);

// SC(x) = sum_e x_e * l_e(x_e). Throws ValidationError when `flow` is not
// feasible at the given tolerance.
double social_cost(const Instance& inst, const EdgeFlow& flow, double tol = 1e-9);
double social_cost(const Instance& inst, const PathFlow& pf, double tol = 1e-9);
Rat social_cost_exact(const Instance& inst, const ExactEdgeFlow& flow);

}  // namespace fairflow
