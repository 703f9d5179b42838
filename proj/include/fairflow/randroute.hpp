#pragma once

#include <cstdint>
#include <vector>

#include "fairflow/flow.hpp"
#include "fairflow/instance.hpp"

namespace fairflow {

// Ordered used paths per commodity with cumulative interval endpoints: path i
// owns ids in [upper[i-1], upper[i]) after the rotation is undone.
struct PathOrdering {
    struct CommodityIntervals {
        std::vector<Path> paths;    // lexicographic order
        std::vector<double> upper;  // strictly increasing, last entry 1
    };
    std::vector<CommodityIntervals> per_commodity;
};

PathOrdering build_ordering(const Instance& inst, const PathFlow& pf);

// Interval index receiving `id` under rotation X; an id landing exactly on an
// endpoint belongs to the interval starting there.
int hash_assign_index(const PathOrdering& ord, double X, int k, double id);
const Path& hash_assign(const PathOrdering& ord, double X, int k, double id);

// Flow-weighted average used-path latency at pf's own loads.
double expected_latency(const Instance& inst, const PathFlow& pf, int k);

struct StdBound {
    double formula = 0;       // (theta-1)/(4*sqrt(theta)) * mean
    double bhatia_davis = 0;  // sqrt((max-mean)*(mean-min)) over used paths
};
StdBound stddev_bound(const Instance& inst, const PathFlow& pf, int k, double theta);

struct CommodityStats {
    double mean = 0;
    double stddev = 0;
    std::vector<double> path_mass;  // empirical share per ordering entry
};

struct MonteCarloResult {
    PathOrdering ordering;
    std::vector<CommodityStats> per_commodity;
    int trials = 0;
    int ids_per_commodity = 0;
};

// Draws `trials` rotations; each rotation routes a stratified batch of ids
// per commodity and records the latency of the assigned path.
MonteCarloResult monte_carlo(const Instance& inst, const PathFlow& pf, int trials,
                             int ids_per_commodity, std::uint64_t seed);

}  // namespace fairflow
