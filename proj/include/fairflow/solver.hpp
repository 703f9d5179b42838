#pragma once

#include <vector>

#include "fairflow/flow.hpp"
#include "fairflow/instance.hpp"
#include "fairflow/potential.hpp"

namespace fairflow {

struct SolverConfig {
    double tol = 1e-8;       // relative duality-gap target
    int max_iters = 100000;  // outer iterations before ConvergenceError
    enum class StepRule { ExactLineSearch, Harmonic } step_rule =
        StepRule::ExactLineSearch;
    bool refine_active_paths = true;  // cost equalization between steps
    bool record_trace = false;
};

struct SolveResult {
    EdgeFlow flow;
    PathFlow support;  // path representation maintained by the solver
    double potential_value = 0;
    double duality_gap = 0;  // absolute, at termination
    int iterations = 0;
    std::vector<double> trace;  // potential per iteration when recorded
};

// Minimizes sum_e int_0^{x_e} phi_e over the feasible multicommodity flows
// via conditional gradient with per-commodity shortest-path directions. The
// duality gap sum_e phi_e(x_e)(x_e - y_e) certifies optimality; termination
// requires gap <= tol * max(1, |value|). Throws ConvergenceError when the
// iteration budget runs out and ValidationError when an M/M/1 edge cut makes
// the instance infeasible.
SolveResult minimize_potential(const Instance& inst, const PotentialSpec& spec,
                               const SolverConfig& config = {});

// Wardrop equilibrium: minimize the Beckmann potential (phi = l).
SolveResult solve_nash(const Instance& inst, const SolverConfig& config = {});

// Social optimum: minimize with phi = l* = l + x l'.
SolveResult solve_social_optimum(const Instance& inst,
                                 const SolverConfig& config = {});

// Potential whose minimizers are theta-positive-Nash flows: phi_e is kept
// inside [l_e/theta, l_e]. M/M/1 edges use 1/(u - a x); polynomial families
// use the band min{l, max{l/theta, l*/gamma}} with gamma = max degree + 1.
PotentialSpec design_modified_potential(const Instance& inst, double theta);

// Marginal latency with tolls capped at eps * l: phi = l + min{x l', eps l}.
// Minimizers are (1 + eps)-positive-Nash flows.
PotentialSpec bounded_toll_potential(const Instance& inst, double eps);

}  // namespace fairflow
