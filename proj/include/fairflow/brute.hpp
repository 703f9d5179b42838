#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairflow/flow.hpp"
#include "fairflow/instance.hpp"

namespace fairflow {

enum class FairnessObjective { UNE, EF };

struct BestDecomposition {
    ExactPathFlow flow;
    Rat theta{1};
    std::vector<Rat> per_commodity_theta;
};

// Exact optimum over every path decomposition of `flow` (costs fixed at the
// input loads): the decomposition minimizing the unilateral ratio
// longest-used / shortest-overall (UNE) or the envy ratio
// longest-used / shortest-used (EF). Commodities separate, so each is solved
// on its own candidate ratio list via rational Phase-1 simplex feasibility.
// Throws CapacityError beyond `path_limit` simple paths per commodity and
// ValidationError when the flow keeps circulation and is not decomposable.
BestDecomposition brute_force_best_decomposition(const Instance& inst,
                                                 const ExactEdgeFlow& flow,
                                                 FairnessObjective objective,
                                                 std::size_t path_limit = 4096);

// Best rational approximation of each load with denominator <= max_den and
// relative error <= tol (continued fractions; near-zero snaps to zero).
// Returns nothing when the snapped flow fails exact conservation, which means
// the numeric flow was not close to a low-denominator rational flow.
std::optional<ExactEdgeFlow> snap_flow(const Instance& inst, const EdgeFlow& flow,
                                       std::int64_t max_den = 1 << 20,
                                       double tol = 1e-6);

// Exact feasibility: is there a nonnegative combination of the given paths
// reproducing commodity k's loads edge for edge? When feasible, returns the
// basic solution found (support at most the number of positive-load edges).
bool exact_decomposition_feasible(const Instance& inst,
                                  const ExactEdgeFlow& flow, int k,
                                  const std::vector<Path>& paths,
                                  std::map<Path, Rat>* solution = nullptr);

}  // namespace fairflow
