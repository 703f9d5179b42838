#include "fairflow/randroute.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairflow/errors.hpp"
#include "fairflow/util.hpp"

namespace fairflow {

namespace {

constexpr double kUsedCut = 1e-15;

std::vector<double> used_costs(const Instance& inst, const PathFlow& pf, int k,
                               const std::vector<double>& costs, std::vector<double>* weights) {
    double d = inst.commodity(k).demand_d();
    std::vector<double> out;
    for (const auto& [path, f] : pf.flow[k]) {
        if (f <= kUsedCut) continue;
        out.push_back(path_latency(inst, path, costs));
        if (weights) weights->push_back(f / d);
    }
    return out;
}

}  // namespace

PathOrdering build_ordering(const Instance& inst, const PathFlow& pf) {
    validate_path_flow(inst, pf);
    PathOrdering ord;
    ord.per_commodity.resize(inst.num_commodities());
    for (int k = 0; k < inst.num_commodities(); ++k) {
        auto& ck = ord.per_commodity[k];
        double d = inst.commodity(k).demand_d();
        double acc = 0;
        for (const auto& [path, f] : pf.flow[k]) {
            if (f <= kUsedCut) continue;
            acc += f / d;
            ck.paths.push_back(path);
            ck.upper.push_back(acc);
        }
        if (ck.paths.empty()) throw ValidationError("build_ordering: commodity has no used path");
        if (std::abs(ck.upper.back() - 1.0) > 1e-12)
            throw ValidationError("build_ordering: used flow does not cover the demand");
        ck.upper.back() = 1.0;
    }
    return ord;
}

int hash_assign_index(const PathOrdering& ord, double X, int k, double id) {
    if (!(X >= 0 && X < 1)) throw DomainError("hash_assign: rotation must lie in [0,1)");
    if (!(id >= 0 && id < 1)) throw DomainError("hash_assign: id must lie in [0,1)");
    if (k < 0 || k >= static_cast<int>(ord.per_commodity.size()))
        throw DomainError("hash_assign: commodity out of range");
    const auto& ck = ord.per_commodity[k];
    double u = id + X;
    if (u >= 1.0) u -= 1.0;
    auto it = std::upper_bound(ck.upper.begin(), ck.upper.end(), u);
    if (it == ck.upper.end()) --it;  // u within rounding of 1
    return static_cast<int>(it - ck.upper.begin());
}

const Path& hash_assign(const PathOrdering& ord, double X, int k, double id) {
    return ord.per_commodity[k].paths[hash_assign_index(ord, X, k, id)];
}

double expected_latency(const Instance& inst, const PathFlow& pf, int k) {
    validate_path_flow(inst, pf);
    if (k < 0 || k >= inst.num_commodities())
        throw DomainError("expected_latency: commodity out of range");
    std::vector<double> costs = edge_costs(inst, induced_edge_flow(inst, pf));
    std::vector<double> w;
    std::vector<double> lat = used_costs(inst, pf, k, costs, &w);
    double mean = 0;
    for (size_t i = 0; i < lat.size(); ++i) mean += w[i] * lat[i];
    return mean;
}

StdBound stddev_bound(const Instance& inst, const PathFlow& pf, int k, double theta) {
    if (theta < 1) throw DomainError("stddev_bound: theta must be >= 1");
    validate_path_flow(inst, pf);
    if (k < 0 || k >= inst.num_commodities())
        throw DomainError("stddev_bound: commodity out of range");
    std::vector<double> costs = edge_costs(inst, induced_edge_flow(inst, pf));
    std::vector<double> w;
    std::vector<double> lat = used_costs(inst, pf, k, costs, &w);
    double mean = 0;
    for (size_t i = 0; i < lat.size(); ++i) mean += w[i] * lat[i];
    double lo = *std::min_element(lat.begin(), lat.end());
    double hi = *std::max_element(lat.begin(), lat.end());
    StdBound b;
    b.formula = (theta - 1) / (4 * std::sqrt(theta)) * mean;
    b.bhatia_davis = std::sqrt(std::max(0.0, (hi - mean) * (mean - lo)));
    return b;
}

MonteCarloResult monte_carlo(const Instance& inst, const PathFlow& pf, int trials,
                             int ids_per_commodity, std::uint64_t seed) {
    if (trials < 1) throw DomainError("monte_carlo: trials must be >= 1");
    if (ids_per_commodity < 1) throw DomainError("monte_carlo: need at least one id");

    MonteCarloResult res;
    res.ordering = build_ordering(inst, pf);
    res.trials = trials;
    res.ids_per_commodity = ids_per_commodity;

    int K = inst.num_commodities();
    std::vector<double> costs = edge_costs(inst, induced_edge_flow(inst, pf));
    std::vector<std::vector<double>> lat(K);
    std::vector<int> offset(K + 1, 0);
    for (int k = 0; k < K; ++k) {
        for (const auto& p : res.ordering.per_commodity[k].paths)
            lat[k].push_back(path_latency(inst, p, costs));
        offset[k + 1] = offset[k] + static_cast<int>(lat[k].size());
    }
    int total_paths = offset[K];

    // Per-trial partials, reduced in trial order afterwards so the result does
    // not depend on scheduling.
    std::vector<double> sum(static_cast<size_t>(trials) * K, 0.0);
    std::vector<double> sumsq(static_cast<size_t>(trials) * K, 0.0);
    std::vector<std::uint32_t> hits(static_cast<size_t>(trials) * total_paths, 0);

    int m = ids_per_commodity;
    parallel_for(static_cast<size_t>(trials), [&](size_t t) {
        SplitMix64 rng = SplitMix64::stream(seed, t);
        double X = rng.next_double();
        for (int k = 0; k < K; ++k) {
            double s = 0, sq = 0;
            for (int j = 0; j < m; ++j) {
                double id = (j + rng.next_double()) / m;
                if (id >= 1.0) id = std::nextafter(1.0, 0.0);
                int i = hash_assign_index(res.ordering, X, k, id);
                double v = lat[k][i];
                s += v;
                sq += v * v;
                ++hits[t * total_paths + offset[k] + i];
            }
            sum[t * K + k] = s;
            sumsq[t * K + k] = sq;
        }
    });

    res.per_commodity.resize(K);
    double n = static_cast<double>(trials) * m;
    for (int k = 0; k < K; ++k) {
        auto& st = res.per_commodity[k];
        double s = 0, sq = 0;
        for (int t = 0; t < trials; ++t) {
            s += sum[static_cast<size_t>(t) * K + k];
            sq += sumsq[static_cast<size_t>(t) * K + k];
        }
        st.mean = s / n;
        st.stddev = std::sqrt(std::max(0.0, sq / n - st.mean * st.mean));
        st.path_mass.assign(lat[k].size(), 0.0);
        for (int t = 0; t < trials; ++t)
            for (size_t i = 0; i < lat[k].size(); ++i)
                st.path_mass[i] += hits[static_cast<size_t>(t) * total_paths + offset[k] + i];
        for (double& v : st.path_mass) v /= n;
    }
    return res;
}

}  // namespace fairflow
