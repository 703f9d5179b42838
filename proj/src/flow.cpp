#include "fairflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fairflow/errors.hpp"

namespace fairflow {

bool path_connects(const Instance& inst, const Path& p, int source, int sink) {
    if (p.empty()) return false;
    int at = source;
    for (int e : p) {
        if (e < 0 || e >= inst.num_edges()) return false;
        if (inst.edge(e).from != at) return false;
        at = inst.edge(e).to;
    }
    return at == sink;
}

bool path_is_simple(const Instance& inst, const Path& p) {
    if (p.empty()) return true;
    std::set<int> seen;
    seen.insert(inst.edge(p.front()).from);
    for (int e : p) {
        if (!seen.insert(inst.edge(e).to).second) return false;
    }
    return true;
}

EdgeFlow EdgeFlow::zero(const Instance& inst) {
    EdgeFlow f;
    f.load.assign(inst.num_commodities(), std::vector<double>(inst.num_edges(), 0.0));
    return f;
}

double EdgeFlow::aggregate(int e) const {
    double s = 0;
    for (const auto& l : load) s += l[e];
    return s;
}

std::vector<double> EdgeFlow::aggregate_loads() const {
    if (load.empty()) return {};
    std::vector<double> agg(load[0].size(), 0.0);
    for (const auto& l : load)
        for (size_t e = 0; e < l.size(); ++e) agg[e] += l[e];
    return agg;
}

PathFlow PathFlow::zero(const Instance& inst) {
    PathFlow pf;
    pf.flow.assign(inst.num_commodities(), {});
    return pf;
}

int PathFlow::total_used_paths() const {
    int n = 0;
    for (const auto& m : flow) n += static_cast<int>(m.size());
    return n;
}

ExactEdgeFlow ExactEdgeFlow::zero(const Instance& inst) {
    ExactEdgeFlow f;
    f.load.assign(inst.num_commodities(), std::vector<Rat>(inst.num_edges(), Rat(0)));
    return f;
}

Rat ExactEdgeFlow::aggregate(int e) const {
    Rat s(0);
    for (const auto& l : load) s += l[e];
    return s;
}

EdgeFlow ExactEdgeFlow::to_double() const {
    EdgeFlow f;
    f.load.resize(load.size());
    for (size_t k = 0; k < load.size(); ++k) {
        f.load[k].resize(load[k].size());
        for (size_t e = 0; e < load[k].size(); ++e)
            f.load[k][e] = fairflow::to_double(load[k][e]);
    }
    return f;
}

ExactPathFlow ExactPathFlow::zero(const Instance& inst) {
    ExactPathFlow pf;
    pf.flow.assign(inst.num_commodities(), {});
    return pf;
}

PathFlow ExactPathFlow::to_double() const {
    PathFlow pf;
    pf.flow.resize(flow.size());
    for (size_t k = 0; k < flow.size(); ++k)
        for (const auto& [p, f] : flow[k]) pf.flow[k][p] = fairflow::to_double(f);
    return pf;
}

ExactEdgeFlow ExactPathFlow::induced(const Instance& inst) const {
    ExactEdgeFlow x = ExactEdgeFlow::zero(inst);
    for (size_t k = 0; k < flow.size(); ++k)
        for (const auto& [p, f] : flow[k])
            for (int e : p) x.load[k][e] += f;
    return x;
}

std::string FeasibilityViolation::describe() const {
    std::ostringstream os;
    if (edge >= 0)
        os << "commodity " << commodity << ": negative load " << amount << " on edge " << edge;
    else
        os << "commodity " << commodity << ": conservation off by " << amount << " at node "
           << node;
    return os.str();
}

FeasibilityReport check_feasible(const Instance& inst, const EdgeFlow& flow, double tol) {
    FeasibilityReport rep;
    if (static_cast<int>(flow.load.size()) != inst.num_commodities())
        throw ValidationError("edge flow has wrong commodity count");
    for (int k = 0; k < inst.num_commodities(); ++k) {
        if (static_cast<int>(flow.load[k].size()) != inst.num_edges())
            throw ValidationError("edge flow has wrong edge count");
        for (int e = 0; e < inst.num_edges(); ++e) {
            const double v = flow.load[k][e];
            if (v < -tol) {
                rep.feasible = false;
                rep.violations.push_back({k, -1, e, v});
            }
        }
        const Commodity& c = inst.commodity(k);
        for (int v = 0; v < inst.num_nodes(); ++v) {
            double net = 0;
            for (int e : inst.out_edges()[v]) net += flow.load[k][e];
            for (int e : inst.in_edges()[v]) net -= flow.load[k][e];
            double want = 0;
            if (v == c.source) want = c.demand_d();
            if (v == c.sink) want = -c.demand_d();
            if (std::abs(net - want) > tol) {
                rep.feasible = false;
                rep.violations.push_back({k, v, -1, net - want});
            }
        }
    }
    return rep;
}

void validate_path_flow(const Instance& inst, const PathFlow& pf, double tol) {
    if (static_cast<int>(pf.flow.size()) != inst.num_commodities())
        throw ValidationError("path flow has wrong commodity count");
    for (int k = 0; k < inst.num_commodities(); ++k) {
        const Commodity& c = inst.commodity(k);
        double sum = 0;
        for (const auto& [p, f] : pf.flow[k]) {
            if (!path_connects(inst, p, c.source, c.sink))
                throw ValidationError("path flow commodity " + std::to_string(k) +
                                      " contains a non-connecting path");
            if (!path_is_simple(inst, p))
                throw ValidationError("path flow commodity " + std::to_string(k) +
                                      " contains a non-simple path");
            if (f < -tol)
                throw ValidationError("path flow commodity " + std::to_string(k) +
                                      " has a negative path flow");
            sum += f;
        }
        if (std::abs(sum - c.demand_d()) > std::max(tol, tol * c.demand_d()))
            throw ValidationError("path flow commodity " + std::to_string(k) +
                                  " does not sum to its demand");
    }
}

EdgeFlow induced_edge_flow(const Instance& inst, const PathFlow& pf) {
    EdgeFlow x = EdgeFlow::zero(inst);
    for (size_t k = 0; k < pf.flow.size(); ++k)
        for (const auto& [p, f] : pf.flow[k])
            for (int e : p) x.load[k][e] += f;
    return x;
}

std::vector<double> edge_costs(const Instance& inst, const EdgeFlow& flow) {
    return edge_costs(inst, flow.aggregate_loads());
}

std::vector<double> edge_costs(const Instance& inst, const std::vector<double>& aggregate) {
    std::vector<double> w(inst.num_edges());
    for (int e = 0; e < inst.num_edges(); ++e) w[e] = inst.edge(e).latency.eval(aggregate[e]);
    return w;
}

double path_latency(const Instance& inst, const Path& p, const std::vector<double>& costs) {
    (void)inst;
    double s = 0;
    for (int e : p) s += costs[e];
    return s;
}

Rat path_latency_exact(const Instance& inst, const Path& p, const std::vector<Rat>& costs) {
    (void)inst;
    Rat s(0);
    for (int e : p) s += costs[e];
    return s;
}

std::vector<Rat> edge_costs_exact(const Instance& inst, const ExactEdgeFlow& flow) {
    std::vector<Rat> w(inst.num_edges());
    for (int e = 0; e < inst.num_edges(); ++e)
        w[e] = inst.edge(e).latency.eval_exact(flow.aggregate(e));
    return w;
}

double social_cost(const Instance& inst, const EdgeFlow& flow, double tol) {
    const auto rep = check_feasible(inst, flow, tol);
    if (!rep.feasible)
        throw ValidationError("social_cost: infeasible flow (" +
                              rep.violations.front().describe() + ")");
    double sc = 0;
    const auto agg = flow.aggregate_loads();
    for (int e = 0; e < inst.num_edges(); ++e) sc += agg[e] * inst.edge(e).latency.eval(agg[e]);
    return sc;
}

double social_cost(const Instance& inst, const PathFlow& pf, double tol) {
    validate_path_flow(inst, pf, tol);
    return social_cost(inst, induced_edge_flow(inst, pf), std::max(tol, 1e-7));
}

Rat social_cost_exact(const Instance& inst, const ExactEdgeFlow& flow) {
    Rat sc(0);
    for (int e = 0; e < inst.num_edges(); ++e) {
        const Rat x = flow.aggregate(e);
        sc += x * inst.edge(e).latency.eval_exact(x);
    }
    return sc;
}

}  // namespace fairflow
