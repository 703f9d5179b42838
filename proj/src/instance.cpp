#include "fairflow/instance.hpp"

#include <algorithm>
#include <queue>

#include "fairflow/errors.hpp"

namespace fairflow {

Instance::Instance(int num_nodes, std::vector<Edge> edges, std::vector<Commodity> commodities)
    : num_nodes_(num_nodes), edges_(std::move(edges)), commodities_(std::move(commodities)) {
    if (num_nodes_ <= 0) throw ValidationError("instance needs at least one node");
    out_.assign(num_nodes_, {});
    in_.assign(num_nodes_, {});
    for (size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.from < 0 || ed.from >= num_nodes_ || ed.to < 0 || ed.to >= num_nodes_)
            throw ValidationError("edge " + std::to_string(e) + " references a missing node");
        if (ed.from == ed.to)
            throw ValidationError("edge " + std::to_string(e) + " is a self-loop");
        out_[ed.from].push_back(static_cast<int>(e));
        in_[ed.to].push_back(static_cast<int>(e));
    }
    if (commodities_.empty()) throw ValidationError("instance needs at least one commodity");
    for (size_t k = 0; k < commodities_.size(); ++k) {
        const Commodity& c = commodities_[k];
        if (c.source < 0 || c.source >= num_nodes_ || c.sink < 0 || c.sink >= num_nodes_)
            throw ValidationError("commodity " + std::to_string(k) + " references a missing node");
        if (c.source == c.sink)
            throw ValidationError("commodity " + std::to_string(k) + " has source == sink");
        if (c.demand <= 0)
            throw ValidationError("commodity " + std::to_string(k) + " needs demand > 0");
        // sink must be reachable
        std::vector<char> seen(num_nodes_, 0);
        std::queue<int> q;
        q.push(c.source);
        seen[c.source] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e : out_[v])
                if (!seen[edges_[e].to]) {
                    seen[edges_[e].to] = 1;
                    q.push(edges_[e].to);
                }
        }
        if (!seen[c.sink])
            throw StructuralError("commodity " + std::to_string(k) +
                                  ": sink unreachable from source");
    }
}

double Instance::min_demand() const {
    double m = commodities_[0].demand_d();
    for (const auto& c : commodities_) m = std::min(m, c.demand_d());
    return m;
}

double Instance::total_demand() const {
    double s = 0;
    for (const auto& c : commodities_) s += c.demand_d();
    return s;
}

Rat Instance::total_demand_exact() const {
    Rat s(0);
    for (const auto& c : commodities_) s += c.demand;
    return s;
}

bool Instance::has_mm1() const {
    return std::any_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.latency.kind() == LatencyKind::MM1; });
}

PositiveThreshold PositiveThreshold::for_instance(const Instance& inst) {
    const double dmin = inst.min_demand();
    const double v = std::min(1e-9 * std::max(1.0, dmin), 1e-6 * dmin);
    return PositiveThreshold{v};
}

}  // namespace fairflow
