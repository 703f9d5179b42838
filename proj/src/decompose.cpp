#include "fairflow/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairflow/errors.hpp"
#include "fairflow/paths.hpp"

namespace fairflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_or_inf(double num, double den) {
    if (den > 0) return num / den;
    return num <= 0 ? 1.0 : kInf;
}

// Nontrivial rational combination sum_j c_j * chi(paths[j]) = 0. Exists
// whenever there are more paths than edges; both signs always occur in c.
std::vector<Rat> incidence_dependence(int num_edges,
                                      const std::vector<Path>& paths) {
    struct BasisRow {
        std::vector<Rat> vec;
        std::vector<Rat> coef;
        int pivot;
    };
    std::vector<BasisRow> basis;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        std::vector<Rat> vec(num_edges, Rat(0));
        for (int e : paths[i]) vec[e] += 1;
        std::vector<Rat> coef(paths.size(), Rat(0));
        coef[i] = 1;
        for (const auto& b : basis) {
            if (vec[b.pivot] == 0) continue;
            Rat factor = vec[b.pivot] / b.vec[b.pivot];
            for (int e = 0; e < num_edges; ++e) vec[e] -= factor * b.vec[e];
            for (std::size_t j = 0; j < paths.size(); ++j)
                coef[j] -= factor * b.coef[j];
        }
        int pivot = -1;
        for (int e = 0; e < num_edges; ++e)
            if (vec[e] != 0) {
                pivot = e;
                break;
            }
        if (pivot < 0) return coef;
        basis.push_back({std::move(vec), std::move(coef), pivot});
    }
    return {};
}

}  // namespace

PathFlow greedy_decomposition(const Instance& inst, const EdgeFlow& flow,
                              GreedyTrace* trace) {
    auto report = check_feasible(inst, flow);
    if (!report.feasible)
        throw ValidationError("cannot decompose an infeasible flow: " +
                              report.violations.front().describe());

    int E = inst.num_edges();
    std::vector<double> costs = edge_costs(inst, flow);
    PathFlow pf = PathFlow::zero(inst);

    for (int k = 0; k < inst.num_commodities(); ++k) {
        double d = inst.commodities()[k].demand_d();
        double cut = 1e-12 * std::max(1.0, d);
        std::vector<double> resid = flow.load[k];
        double assigned = 0;
        for (int step = 0; step <= E; ++step) {
            std::vector<char> usable(E, 0);
            for (int e = 0; e < E; ++e) usable[e] = resid[e] > cut;
            auto sp = shortest_path_masked(inst, costs, k, usable);
            if (!sp) break;
            double b = kInf;
            for (int e : sp->path) b = std::min(b, resid[e]);
            pf.flow[k][sp->path] += b;
            for (int e : sp->path) resid[e] -= b;
            assigned += b;
            if (trace) trace->push_back({k, sp->path, b, sp->cost});
        }
        double leftover = d - assigned;
        if (leftover > std::max(1e-7 * std::max(1.0, d), 8.0 * E * cut))
            throw ValidationError(
                "edge flow keeps circulation no source-sink path can carry; "
                "remove positive cycles first");
        if (!pf.flow[k].empty() && leftover != 0) {
            auto big = pf.flow[k].begin();
            for (auto it = pf.flow[k].begin(); it != pf.flow[k].end(); ++it)
                if (it->second > big->second) big = it;
            big->second += leftover;
        }
    }
    validate_path_flow(inst, pf);
    return pf;
}

PathFlow sparsify(const Instance& inst, const PathFlow& pf) {
    validate_path_flow(inst, pf);
    int E = inst.num_edges();
    std::vector<double> costs = edge_costs(inst, induced_edge_flow(inst, pf));
    PathFlow out = pf;

    for (int k = 0; k < inst.num_commodities(); ++k) {
        auto& m = out.flow[k];
        while (static_cast<int>(m.size()) > E) {
            std::vector<Path> paths;
            std::vector<double> f;
            paths.reserve(m.size());
            for (const auto& [p, v] : m) {
                paths.push_back(p);
                f.push_back(v);
            }
            std::vector<Rat> dep = incidence_dependence(E, paths);
            if (dep.empty()) break;
            std::vector<double> c(dep.size());
            for (std::size_t j = 0; j < dep.size(); ++j) c[j] = to_double(dep[j]);

            // Moving along +c kills the first path with c_j < 0; along -c the
            // first with c_j > 0. Prefer whichever direction retires the
            // costlier path.
            auto first_out = [&](int sign) {
                double t = kInf;
                int who = -1;
                for (std::size_t j = 0; j < c.size(); ++j) {
                    double cj = sign * c[j];
                    if (cj >= 0) continue;
                    double step = f[j] / -cj;
                    if (step < t) {
                        t = step;
                        who = static_cast<int>(j);
                    }
                }
                return std::pair<double, int>(t, who);
            };
            auto [tp, jp] = first_out(+1);
            auto [tm, jm] = first_out(-1);
            if (jp < 0 || jm < 0) break;
            int sign =
                path_latency(inst, paths[jp], costs) >=
                        path_latency(inst, paths[jm], costs)
                    ? +1
                    : -1;
            double t = sign > 0 ? tp : tm;
            int dying = sign > 0 ? jp : jm;

            for (std::size_t j = 0; j < c.size(); ++j) {
                double nf = f[j] + sign * t * c[j];
                if (static_cast<int>(j) == dying || nf <= 0) {
                    m.erase(paths[j]);
                } else {
                    m[paths[j]] = nf;
                }
            }
        }
    }
    validate_path_flow(inst, out);
    return out;
}

FairnessReport measure_fairness(const Instance& inst, const PathFlow& pf) {
    validate_path_flow(inst, pf);
    int E = inst.num_edges();
    EdgeFlow ef = induced_edge_flow(inst, pf);
    std::vector<double> agg = ef.aggregate_loads();
    std::vector<double> costs = edge_costs(inst, agg);
    double thr = PositiveThreshold::for_instance(inst).value;

    std::vector<char> positive(E, 0);
    for (int e = 0; e < E; ++e) positive[e] = agg[e] > thr;
    bool acyclic = !find_cycle(inst, positive).has_value();

    FairnessReport rep;
    for (int k = 0; k < inst.num_commodities(); ++k) {
        CommodityFairness cf;
        PathResult sp = shortest_path(inst, costs, k);
        cf.shortest = sp.cost;
        cf.shortest_path = std::move(sp.path);

        cf.shortest_used = kInf;
        cf.longest_used = -kInf;
        bool any_used = false;
        for (const auto& [p, v] : pf.flow[k]) {
            if (v <= thr) continue;
            any_used = true;
            double c = path_latency(inst, p, costs);
            cf.shortest_used = std::min(cf.shortest_used, c);
            if (c > cf.longest_used) {
                cf.longest_used = c;
                cf.longest_used_path = p;
            }
        }
        if (!any_used) {
            // Demands are positive, so some path always clears the cutoff.
            throw ValidationError("no used path above the positive threshold");
        }

        cf.positive_acyclic = acyclic;
        if (acyclic) {
            auto lp = longest_path_dag(inst, costs, k, positive);
            if (lp) {
                cf.longest_positive = lp->cost;
                cf.longest_positive_path = std::move(lp->path);
            } else {
                cf.longest_positive = cf.longest_used;
                cf.longest_positive_path = cf.longest_used_path;
            }
            cf.theta_pne = ratio_or_inf(cf.longest_positive, cf.shortest);
        } else {
            cf.longest_positive = kInf;
            cf.theta_pne = kInf;
        }
        cf.theta_une = ratio_or_inf(cf.longest_used, cf.shortest);
        cf.theta_ef = ratio_or_inf(cf.longest_used, cf.shortest_used);

        rep.theta_pne = std::max(rep.theta_pne, cf.theta_pne);
        rep.theta_une = std::max(rep.theta_une, cf.theta_une);
        rep.theta_ef = std::max(rep.theta_ef, cf.theta_ef);
        rep.per_commodity.push_back(std::move(cf));
    }
    return rep;
}

std::optional<Path> check_PNE_acyclic(const Instance& inst,
                                      const EdgeFlow& flow) {
    double thr = PositiveThreshold::for_instance(inst).value;
    std::vector<char> positive(inst.num_edges(), 0);
    for (int e = 0; e < inst.num_edges(); ++e)
        positive[e] = flow.aggregate(e) > thr;
    return find_cycle(inst, positive);
}

EdgeFlow remove_positive_cycles(const Instance& inst, const EdgeFlow& flow) {
    EdgeFlow out = flow;
    int E = inst.num_edges();
    for (int k = 0; k < inst.num_commodities(); ++k) {
        double cut = 1e-12 * std::max(1.0, inst.commodities()[k].demand_d());
        for (int round = 0; round <= E; ++round) {
            std::vector<char> usable(E, 0);
            for (int e = 0; e < E; ++e) usable[e] = out.load[k][e] > cut;
            auto cyc = find_cycle(inst, usable);
            if (!cyc) break;
            double b = kInf;
            for (int e : *cyc) b = std::min(b, out.load[k][e]);
            for (int e : *cyc) out.load[k][e] -= b;
        }
    }
    return out;
}

}  // namespace fairflow
