#pragma once

#include <utility>
#include <vector>

#include "fairflow/brute.hpp"
#include "fairflow/flow.hpp"
#include "fairflow/instance.hpp"

namespace fairflow {

// Two parallel links between two nodes.
Instance pigou(const LatencyFn& top, const LatencyFn& bottom, const Rat& demand);

// Single two-link stage: top constant q, bottom q*x, unit demand. The social
// optimum splits half/half, so both links cost q resp. q/2 there.
struct TwoLink {
    Rat q;
    Instance inst;
    ExactEdgeFlow so;
};
TwoLink two_link(const Rat& q);

// Series chain of two-link stages; stage i contributes edge 2i (constant q_i)
// and edge 2i+1 (affine q_i*x) between nodes i and i+1, unit demand 0 -> n.
// At the social optimum every edge carries 1/2 and the path picking the top
// link exactly on the stage set I costs (2B + sum_{i in I} q_i)/2, B = sum q/2.
struct PartitionChain {
    std::vector<Rat> q;
    Rat B;
    Instance inst;
    ExactEdgeFlow so;
};
PartitionChain partition_chain(const std::vector<Rat>& q);

// Chain data plus the appended polynomial stage (top a*x^p + b, bottom c*x^p)
// used by the decomposition-hardness reduction. q holds the positive integer
// item weights; alpha and beta control the target ratios c1 (longest-used
// based) and c2 (equity based).
struct HardnessParams {
    std::vector<int> q;
    int p = 1;
    Rat alpha;
    Rat beta;

    Rat B() const;   // sum q / 2
    Rat z() const;   // 3/(8B): optimal bottom share of the appended stage
    Rat a() const;   // alpha*B / (1-z)^p
    Rat b() const;   // beta*B*(p+1)
    Rat c() const;   // (alpha+beta)*B / z^p
    Rat c1() const;  // (alpha+beta+beta*p+3/2) / (alpha+beta+1)
    Rat c2() const;  // (alpha+beta+beta*p+3/2) / (alpha+beta+2)
};

struct Hardness {
    HardnessParams params;
    Instance inst;
    ExactEdgeFlow so;  // 1/2 per chain edge, 1-z / z on the appended stage
};
Hardness hardness_instance(const HardnessParams& params);

// Closed-form (alpha, beta) realizing c1 = theta (UNE) or c2 = theta (EF),
// with beta*p > 1. Equity at theta = 1 needs no appended stage and is refused.
std::pair<Rat, Rat> solve_alpha_beta(int p, const Rat& theta, FairnessObjective objective);

// Decomposition of the hardness SO flow realizing the target ratio, given a
// balanced 0-based stage set I (sum_{i in I} q_i = B).
ExactPathFlow hardness_witness(const Hardness& h, const std::vector<int>& I,
                               FairnessObjective objective);

// n two-link stages in series: top constant 2-eps, bottom x, unit demand.
// Social optimum: bottom 1-eps/2 per stage. "balanced" covers it with the
// all-bottom path plus, for each stage, the path going top exactly there.
struct Cascade {
    int n = 0;
    Rat eps;
    Instance inst;
    ExactEdgeFlow so;
    ExactPathFlow balanced;
};
Cascade cascade(int n, const Rat& eps);

// First k stages at the optimal split, the remaining ones fully on the bottom.
ExactEdgeFlow cascade_mixed_flow(const Cascade& c, int k);

// Parallel-path gadget whose stated decomposition is theta-fair on used paths
// while the induced edge flow admits a much longer all-positive path.
struct UneVsPne {
    int k = 0;
    Instance inst;
    ExactEdgeFlow flow;
    ExactPathFlow decomposition;
    Rat theta_une;
    Rat theta_pne;  // 1 + (k-1)(theta_une - 1)
};
UneVsPne une_vs_pne_gadget(int k, const Rat& theta, const Rat& eps);

// Two flows on a 4-node network (a is 3/2-fair on every concept, b is
// 3/2-envy-free) whose even mixture has used paths of cost 11/6 and 7/6,
// an envy ratio of 11/7 > 3/2: the 3/2-envy-free set is not convex.
struct NonconvexityPair {
    Instance inst;
    ExactPathFlow a;  // all demand on s-u-v-t, cost 2
    ExactPathFlow b;  // 2/3 on s-u-t at cost 1, 1/3 on s-v-t at cost 3/2
};
NonconvexityPair nonconvexity_pair();

// Two-stage fixture whose half/half decomposition uses two paths of length
// 3/2 while the shortest path costs 1 and the longest positive path 2.
struct Crossing {
    Instance inst;
    ExactPathFlow flow;
};
Crossing crossing_gadget();

}  // namespace fairflow
