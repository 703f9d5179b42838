#include "fairflow/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "fairflow/errors.hpp"

namespace fairflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> dijkstra(const Instance& inst, const std::vector<double>& costs, int source,
                             const std::vector<char>& usable) {
    std::vector<double> dist(inst.num_nodes(), kInf);
    dist[source] = 0;
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    pq.push({0.0, source});
    std::vector<char> done(inst.num_nodes(), 0);
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (done[v]) continue;
        done[v] = 1;
        for (int e : inst.out_edges()[v]) {
            if (!usable[e]) continue;
            const int w = inst.edge(e).to;
            const double nd = d + costs[e];
            if (nd < dist[w]) {
                dist[w] = nd;
                pq.push({nd, w});
            }
        }
    }
    return dist;
}

bool reaches_avoiding(const Instance& inst, const std::vector<char>& tight, int from, int sink,
                      const std::vector<char>& blocked) {
    if (from == sink) return true;
    std::vector<char> seen(inst.num_nodes(), 0);
    std::queue<int> q;
    q.push(from);
    seen[from] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int e : inst.out_edges()[v]) {
            if (!tight[e]) continue;
            const int w = inst.edge(e).to;
            if (w == sink) return true;
            if (!seen[w] && !blocked[w]) {
                seen[w] = 1;
                q.push(w);
            }
        }
    }
    return false;
}

// Every minimum-cost path is tight at each node, so the lexicographically
// smallest one can be grown greedily inside the tight subgraph with a
// reachability oracle guarding each extension.
std::optional<PathResult> lex_min_shortest(const Instance& inst, const std::vector<double>& costs,
                                           int k, const std::vector<char>& usable) {
    const Commodity& c = inst.commodity(k);
    for (int e = 0; e < inst.num_edges(); ++e)
        if (usable[e] && costs[e] < 0) throw DomainError("shortest_path: negative edge cost");
    const auto dist = dijkstra(inst, costs, c.source, usable);
    if (!(dist[c.sink] < kInf)) return std::nullopt;

    std::vector<char> tight(inst.num_edges(), 0);
    for (int e = 0; e < inst.num_edges(); ++e) {
        if (!usable[e]) continue;
        const Edge& ed = inst.edge(e);
        if (dist[ed.from] < kInf && dist[ed.from] + costs[e] == dist[ed.to]) tight[e] = 1;
    }

    Path path;
    std::vector<char> visited(inst.num_nodes(), 0);
    int at = c.source;
    visited[at] = 1;
    while (at != c.sink) {
        bool advanced = false;
        for (int e : inst.out_edges()[at]) {
            if (!tight[e]) continue;
            const int w = inst.edge(e).to;
            if (visited[w]) continue;
            if (w == c.sink || reaches_avoiding(inst, tight, w, c.sink, visited)) {
                path.push_back(e);
                visited[w] = 1;
                at = w;
                advanced = true;
                break;
            }
        }
        if (!advanced) return std::nullopt;  // defensive; cannot happen with dist[sink] finite
    }
    return PathResult{path, dist[c.sink]};
}

}  // namespace

PathResult shortest_path(const Instance& inst, const std::vector<double>& costs, int k) {
    std::vector<char> usable(inst.num_edges(), 1);
    auto r = lex_min_shortest(inst, costs, k, usable);
    if (!r) throw StructuralError("shortest_path: sink unreachable");
    return *r;
}

std::optional<PathResult> shortest_path_masked(const Instance& inst,
                                               const std::vector<double>& costs, int k,
                                               const std::vector<char>& usable) {
    return lex_min_shortest(inst, costs, k, usable);
}

std::vector<Path> enumerate_paths(const Instance& inst, int k, size_t limit) {
    const Commodity& c = inst.commodity(k);
    std::vector<Path> out;
    Path cur;
    std::vector<char> visited(inst.num_nodes(), 0);
    visited[c.source] = 1;

    // explicit stack of (node, next out-edge position)
    std::vector<std::pair<int, size_t>> stack{{c.source, 0}};
    while (!stack.empty()) {
        auto& [v, pos] = stack.back();
        if (v == c.sink) {
            if (out.size() >= limit)
                throw CapacityError("enumerate_paths: more than " + std::to_string(limit) +
                                    " paths");
            out.push_back(cur);
            visited[v] = 0;
            stack.pop_back();
            if (!cur.empty()) cur.pop_back();
            continue;
        }
        const auto& outs = inst.out_edges()[v];
        bool descended = false;
        while (pos < outs.size()) {
            const int e = outs[pos++];
            const int w = inst.edge(e).to;
            if (visited[w]) continue;
            cur.push_back(e);
            visited[w] = 1;
            stack.push_back({w, 0});
            descended = true;
            break;
        }
        if (!descended && !stack.empty() && stack.back().first == v && v != c.sink) {
            visited[v] = 0;
            stack.pop_back();
            if (!cur.empty()) cur.pop_back();
        }
    }
    return out;
}

std::optional<std::vector<int>> topo_order(const Instance& inst,
                                           const std::vector<char>& usable) {
    std::vector<int> indeg(inst.num_nodes(), 0);
    for (int e = 0; e < inst.num_edges(); ++e)
        if (usable[e]) indeg[inst.edge(e).to]++;
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < inst.num_nodes(); ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(inst.num_nodes());
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int e : inst.out_edges()[v]) {
            if (!usable[e]) continue;
            if (--indeg[inst.edge(e).to] == 0) ready.push(inst.edge(e).to);
        }
    }
    if (static_cast<int>(order.size()) != inst.num_nodes()) return std::nullopt;
    return order;
}

std::optional<Path> find_cycle(const Instance& inst, const std::vector<char>& usable) {
    // iterative DFS with colors; returns the edge sequence of the first cycle
    std::vector<int> color(inst.num_nodes(), 0);  // 0 white, 1 gray, 2 black
    std::vector<int> via_edge(inst.num_nodes(), -1);
    for (int root = 0; root < inst.num_nodes(); ++root) {
        if (color[root] != 0) continue;
        std::vector<std::pair<int, size_t>> stack{{root, 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto& [v, pos] = stack.back();
            const auto& outs = inst.out_edges()[v];
            bool descended = false;
            while (pos < outs.size()) {
                const int e = outs[pos++];
                if (!usable[e]) continue;
                const int w = inst.edge(e).to;
                if (color[w] == 1) {
                    // unwind the gray stack from w to v
                    Path cycle;
                    std::vector<int> nodes;
                    for (const auto& fr : stack) nodes.push_back(fr.first);
                    auto it = std::find(nodes.begin(), nodes.end(), w);
                    for (size_t i = std::distance(nodes.begin(), it); i + 1 < nodes.size(); ++i)
                        cycle.push_back(via_edge[nodes[i + 1]]);
                    cycle.push_back(e);
                    return cycle;
                }
                if (color[w] == 0) {
                    color[w] = 1;
                    via_edge[w] = e;
                    stack.push_back({w, 0});
                    descended = true;
                    break;
                }
            }
            if (!descended) {
                color[v] = 2;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

std::optional<PathResult> longest_path_dag(const Instance& inst, const std::vector<double>& costs,
                                           int k, const std::vector<char>& usable) {
    const Commodity& c = inst.commodity(k);
    const auto order = topo_order(inst, usable);
    if (!order) throw StructuralError("longest_path_dag: usable subgraph has a cycle");

    // restrict to nodes that can lie on a usable source->sink path
    std::vector<char> fwd(inst.num_nodes(), 0), bwd(inst.num_nodes(), 0);
    {
        std::queue<int> q;
        q.push(c.source);
        fwd[c.source] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e : inst.out_edges()[v])
                if (usable[e] && !fwd[inst.edge(e).to]) {
                    fwd[inst.edge(e).to] = 1;
                    q.push(inst.edge(e).to);
                }
        }
        q.push(c.sink);
        bwd[c.sink] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e : inst.in_edges()[v])
                if (usable[e] && !bwd[inst.edge(e).from]) {
                    bwd[inst.edge(e).from] = 1;
                    q.push(inst.edge(e).from);
                }
        }
    }
    if (!fwd[c.sink]) return std::nullopt;

    std::vector<double> best(inst.num_nodes(), -kInf);
    std::vector<int> pred(inst.num_nodes(), -1);
    best[c.source] = 0;
    for (int v : *order) {
        if (!(best[v] > -kInf) || !fwd[v] || !bwd[v]) continue;
        for (int e : inst.out_edges()[v]) {
            if (!usable[e]) continue;
            const int w = inst.edge(e).to;
            if (!fwd[w] || !bwd[w]) continue;
            const double nd = best[v] + costs[e];
            if (nd > best[w]) {
                best[w] = nd;
                pred[w] = e;
            }
        }
    }
    if (!(best[c.sink] > -kInf)) return std::nullopt;
    Path p;
    for (int v = c.sink; v != c.source;) {
        const int e = pred[v];
        p.push_back(e);
        v = inst.edge(e).from;
    }
    std::reverse(p.begin(), p.end());
    return PathResult{p, best[c.sink]};
}

double mm1_max_flow(const Instance& inst, int source, int sink) {
    const double big = 1e18;
    struct Arc {
        int to;
        double cap;
        int rev;
    };
    std::vector<std::vector<Arc>> g(inst.num_nodes());
    auto add_arc = [&](int u, int v, double cap) {
        g[u].push_back({v, cap, static_cast<int>(g[v].size())});
        g[v].push_back({u, 0.0, static_cast<int>(g[u].size()) - 1});
    };
    for (const Edge& e : inst.edges()) {
        const double cap =
            e.latency.kind() == LatencyKind::MM1 ? to_double(e.latency.params()[0]) : big;
        add_arc(e.from, e.to, cap);
    }
    double total = 0;
    while (true) {
        std::vector<int> pv(inst.num_nodes(), -1), pe(inst.num_nodes(), -1);
        std::queue<int> q;
        q.push(source);
        pv[source] = source;
        while (!q.empty() && pv[sink] < 0) {
            int v = q.front();
            q.pop();
            for (size_t i = 0; i < g[v].size(); ++i) {
                const Arc& a = g[v][i];
                if (a.cap > 1e-12 && pv[a.to] < 0) {
                    pv[a.to] = v;
                    pe[a.to] = static_cast<int>(i);
                    q.push(a.to);
                }
            }
        }
        if (pv[sink] < 0) break;
        double aug = big;
        for (int v = sink; v != source; v = pv[v]) aug = std::min(aug, g[pv[v]][pe[v]].cap);
        for (int v = sink; v != source; v = pv[v]) {
            Arc& a = g[pv[v]][pe[v]];
            a.cap -= aug;
            g[a.to][a.rev].cap += aug;
        }
        total += aug;
        if (total >= big / 2) break;  // effectively unbounded
    }
    return total;
}

void check_mm1_capacity(const Instance& inst) {
    if (!inst.has_mm1()) return;
    std::map<std::pair<int, int>, double> grouped;
    for (int k = 0; k < inst.num_commodities(); ++k) {
        const Commodity& c = inst.commodity(k);
        const double mf = mm1_max_flow(inst, c.source, c.sink);
        if (mf <= c.demand_d() * (1 + 1e-12))
            throw ValidationError("commodity " + std::to_string(k) +
                                  ": demand meets or exceeds MM1 cut capacity");
        grouped[{c.source, c.sink}] += c.demand_d();
    }
    for (const auto& [st, dem] : grouped) {
        const double mf = mm1_max_flow(inst, st.first, st.second);
        if (mf <= dem * (1 + 1e-12))
            throw ValidationError("combined demand between nodes " + std::to_string(st.first) +
                                  " and " + std::to_string(st.second) +
                                  " meets or exceeds MM1 cut capacity");
    }
}

}  // namespace fairflow
