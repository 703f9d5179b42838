#pragma once

#include <optional>
#include <vector>

#include "fairflow/flow.hpp"
#include "fairflow/instance.hpp"

namespace fairflow {

struct GreedyStep {
    int commodity = -1;
    Path path;
    double amount = 0;
    double cost = 0;  // at the fixed input costs
};

using GreedyTrace = std::vector<GreedyStep>;

// Decomposes a feasible edge flow into at most |E| paths per commodity by
// repeatedly extracting the cheapest positive path (costs are fixed at the
// input loads) at its bottleneck amount. Throws ValidationError when the flow
// is infeasible or keeps circulation that no s-t path can carry.
PathFlow greedy_decomposition(const Instance& inst, const EdgeFlow& flow,
                              GreedyTrace* trace = nullptr);

// Shrinks a path flow's support to at most |E| paths per commodity without
// changing any edge load: linear dependences between path incidence vectors
// are cancelled, preferring to zero out the costlier path of each dependence.
PathFlow sparsify(const Instance& inst, const PathFlow& pf);

struct CommodityFairness {
    double shortest = 0;         // cheapest s-t path, any edges
    double shortest_used = 0;    // cheapest path carrying flow
    double longest_used = 0;     // costliest path carrying flow
    double longest_positive = 0; // costliest s-t path through positive edges
    Path shortest_path;
    Path longest_used_path;
    Path longest_positive_path;
    bool positive_acyclic = true;
    double theta_pne = 1;  // longest_positive / shortest
    double theta_une = 1;  // longest_used / shortest
    double theta_ef = 1;   // longest_used / shortest_used
};

struct FairnessReport {
    std::vector<CommodityFairness> per_commodity;
    double theta_pne = 1;
    double theta_une = 1;
    double theta_ef = 1;
};

// Fairness levels of a path flow at the costs its own loads induce. The
// positive-path ratio is +inf when the positive subgraph has a cycle.
FairnessReport measure_fairness(const Instance& inst, const PathFlow& pf);

// Cycle of positive-load edges, if any; nullopt means every positive path is
// finite and positive-Nash ratios are well defined.
std::optional<Path> check_PNE_acyclic(const Instance& inst, const EdgeFlow& flow);

// Cancels per-commodity circulation (subtracting each cycle's bottleneck)
// until every commodity's own load pattern is acyclic. Loads only decrease,
// so the social cost cannot increase.
EdgeFlow remove_positive_cycles(const Instance& inst, const EdgeFlow& flow);

}  // namespace fairflow
