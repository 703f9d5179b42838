#include "fairflow/gadgets.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "fairflow/errors.hpp"

namespace fairflow {

namespace {

std::vector<Rat> monomial(const Rat& coeff, int degree) {
    std::vector<Rat> c(degree + 1, Rat{0});
    c[degree] = coeff;
    return c;
}

// Chain path selecting the top link exactly on the stages in `top`.
Path chain_path(int n, const std::set<int>& top) {
    Path p;
    p.reserve(n);
    for (int i = 0; i < n; ++i) p.push_back(top.count(i) ? 2 * i : 2 * i + 1);
    return p;
}

}  // namespace

Instance pigou(const LatencyFn& top, const LatencyFn& bottom, const Rat& demand) {
    if (demand <= 0) throw DomainError("pigou: demand must be positive");
    return Instance(2, {{0, 1, top}, {0, 1, bottom}}, {{0, 1, demand}});
}

TwoLink two_link(const Rat& q) {
    if (q <= 0) throw DomainError("two_link: q must be positive");
    TwoLink g{q,
              Instance(2, {{0, 1, LatencyFn::constant(q)}, {0, 1, LatencyFn::affine(q, Rat{0})}},
                       {{0, 1, Rat{1}}}),
              ExactEdgeFlow{}};
    g.so.load = {{Rat(1, 2), Rat(1, 2)}};
    return g;
}

PartitionChain partition_chain(const std::vector<Rat>& q) {
    if (q.empty()) throw DomainError("partition_chain: need at least one stage");
    Rat total{0};
    std::vector<Edge> edges;
    for (int i = 0; i < static_cast<int>(q.size()); ++i) {
        if (q[i] <= 0) throw DomainError("partition_chain: stage weights must be positive");
        total += q[i];
        edges.push_back({i, i + 1, LatencyFn::constant(q[i])});
        edges.push_back({i, i + 1, LatencyFn::affine(q[i], Rat{0})});
    }
    int n = static_cast<int>(q.size());
    PartitionChain g{q, total / 2, Instance(n + 1, std::move(edges), {{0, n, Rat{1}}}),
                     ExactEdgeFlow{}};
    g.so.load = {std::vector<Rat>(2 * n, Rat(1, 2))};
    return g;
}

Rat HardnessParams::B() const {
    Rat total{0};
    for (int w : q) total += w;
    return total / 2;
}

Rat HardnessParams::z() const { return Rat(3) / (8 * B()); }

Rat HardnessParams::a() const { return alpha * B() / rat_pow(1 - z(), p); }

Rat HardnessParams::b() const { return beta * B() * (p + 1); }

Rat HardnessParams::c() const { return (alpha + beta) * B() / rat_pow(z(), p); }

Rat HardnessParams::c1() const {
    return (alpha + beta + beta * p + Rat(3, 2)) / (alpha + beta + 1);
}

Rat HardnessParams::c2() const {
    return (alpha + beta + beta * p + Rat(3, 2)) / (alpha + beta + 2);
}

Hardness hardness_instance(const HardnessParams& params) {
    if (params.q.empty()) throw ValidationError("hardness_instance: empty item list");
    for (int w : params.q)
        if (w < 1) throw ValidationError("hardness_instance: item weights must be >= 1");
    if (params.p < 1) throw ValidationError("hardness_instance: degree must be >= 1");
    if (params.alpha <= 0 || params.beta <= 0)
        throw ValidationError("hardness_instance: alpha and beta must be positive");
    if (params.beta * params.p <= 1)
        throw ValidationError("hardness_instance: need beta*p > 1");

    int n = static_cast<int>(params.q.size());
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        edges.push_back({i, i + 1, LatencyFn::constant(Rat(params.q[i]))});
        edges.push_back({i, i + 1, LatencyFn::affine(Rat(params.q[i]), Rat{0})});
    }
    std::vector<Rat> top = monomial(params.a(), params.p);
    top[0] = params.b();
    edges.push_back({n, n + 1, LatencyFn::polynomial(std::move(top))});
    edges.push_back({n, n + 1, LatencyFn::polynomial(monomial(params.c(), params.p))});

    Hardness h{params, Instance(n + 2, std::move(edges), {{0, n + 1, Rat{1}}}), ExactEdgeFlow{}};
    std::vector<Rat> load(2 * n + 2, Rat(1, 2));
    load[2 * n] = 1 - params.z();
    load[2 * n + 1] = params.z();
    h.so.load = {std::move(load)};
    return h;
}

std::pair<Rat, Rat> solve_alpha_beta(int p, const Rat& theta, FairnessObjective objective) {
    if (p < 1) throw DomainError("solve_alpha_beta: degree must be >= 1");
    if (objective == FairnessObjective::EF && theta == 1)
        throw DomainError(
            "solve_alpha_beta: ratio 1 under EF is realized by the chain alone, "
            "no appended stage exists for it");
    if (theta <= 1 || theta >= p + 1)
        throw DomainError("solve_alpha_beta: theta must lie strictly between 1 and p+1");

    // With t = beta*p, the target ratio is linear in alpha; pick t large enough
    // to keep alpha positive, then invert.
    Rat t;
    Rat alpha;
    if (objective == FairnessObjective::UNE) {
        t = std::max(Rat{2}, 2 * (theta - Rat(3, 2)) * p / (p + 1 - theta));
        alpha = (Rat(1, 2) + t) / (theta - 1) - 1 - t / p;
    } else {
        t = std::max(Rat{2}, 2 * (2 * theta - Rat(3, 2)) * p / (p + 1 - theta));
        alpha = (t - Rat(1, 2)) / (theta - 1) - 2 - t / p;
    }
    Rat beta = t / p;

    HardnessParams check{{1, 1}, p, alpha, beta};
    Rat achieved = objective == FairnessObjective::UNE ? check.c1() : check.c2();
    if (alpha <= 0 || beta * p <= 1 || achieved != theta)
        throw DomainError("solve_alpha_beta: no admissible parameters for this theta");
    return {alpha, beta};
}

ExactPathFlow hardness_witness(const Hardness& h, const std::vector<int>& I,
                               FairnessObjective objective) {
    int n = static_cast<int>(h.params.q.size());
    std::set<int> inside(I.begin(), I.end());
    if (static_cast<int>(inside.size()) != static_cast<int>(I.size()))
        throw ValidationError("hardness_witness: repeated stage index");
    Rat picked{0};
    for (int i : I) {
        if (i < 0 || i >= n) throw ValidationError("hardness_witness: stage index out of range");
        picked += h.params.q[i];
    }
    Rat B = h.params.B();
    if (picked != B) throw ValidationError("hardness_witness: stage set is not balanced");
    Rat z = h.params.z();
    if (z >= Rat(1, 2))
        throw ValidationError("hardness_witness: total item weight too small (need B >= 1)");

    std::set<int> outside;
    for (int i = 0; i < n; ++i)
        if (!inside.count(i)) outside.insert(i);
    std::set<int> all = inside;
    all.insert(outside.begin(), outside.end());

    int top = 2 * n;
    int bottom = 2 * n + 1;
    auto with = [&](const std::set<int>& stages, int last) {
        Path p = chain_path(n, stages);
        p.push_back(last);
        return p;
    };

    ExactPathFlow pf = ExactPathFlow::zero(h.inst);
    auto& f = pf.flow[0];
    if (objective == FairnessObjective::UNE) {
        f[with(inside, top)] = Rat(1, 2);
        f[with(outside, top)] = Rat(1, 2) - z;
        f[with(outside, bottom)] = z;
    } else {
        f[with(all, bottom)] = z;
        f[with(inside, top)] = Rat(1, 2) - z;
        f[with(outside, top)] = Rat(1, 2) - z;
        f[with({}, top)] = z;
    }
    return pf;
}

Cascade cascade(int n, const Rat& eps) {
    if (n < 1) throw DomainError("cascade: need n >= 1");
    if (eps <= 0) throw DomainError("cascade: eps must be positive");
    if (n * eps > 2) throw DomainError("cascade: need n*eps/2 <= 1");

    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        edges.push_back({i, i + 1, LatencyFn::constant(2 - eps)});
        edges.push_back({i, i + 1, LatencyFn::affine(Rat{1}, Rat{0})});
    }
    Cascade g{n, eps, Instance(n + 1, std::move(edges), {{0, n, Rat{1}}}), ExactEdgeFlow{},
              ExactPathFlow{}};

    std::vector<Rat> load(2 * n);
    for (int i = 0; i < n; ++i) {
        load[2 * i] = eps / 2;
        load[2 * i + 1] = 1 - eps / 2;
    }
    g.so.load = {std::move(load)};

    g.balanced = ExactPathFlow::zero(g.inst);
    auto& f = g.balanced.flow[0];
    Rat rest = 1 - n * eps / 2;
    if (rest > 0) f[chain_path(n, {})] = rest;
    for (int i = 0; i < n; ++i) f[chain_path(n, {i})] = eps / 2;
    return g;
}

ExactEdgeFlow cascade_mixed_flow(const Cascade& c, int k) {
    if (k < 0 || k > c.n) throw DomainError("cascade_mixed_flow: k out of range");
    ExactEdgeFlow flow = ExactEdgeFlow::zero(c.inst);
    for (int i = 0; i < c.n; ++i) {
        flow.load[0][2 * i] = i < k ? c.eps / 2 : Rat{0};
        flow.load[0][2 * i + 1] = i < k ? 1 - c.eps / 2 : Rat{1};
    }
    return flow;
}

UneVsPne une_vs_pne_gadget(int k, const Rat& theta, const Rat& eps) {
    if (k < 2) throw DomainError("une_vs_pne_gadget: need k >= 2");
    if (theta < Rat(3, 2)) throw DomainError("une_vs_pne_gadget: need theta >= 3/2");
    if (eps <= 0 || eps >= 1) throw DomainError("une_vs_pne_gadget: need 0 < eps < 1");

    // Nodes: source 0, hubs 1..k, sink k+1. Edge ids: (s,u_i) first, then the
    // hub chain (u_i,u_{i+1}), then (u_i,t).
    int t = k + 1;
    std::vector<Edge> edges;
    for (int i = 1; i <= k; ++i) edges.push_back({0, i, LatencyFn::constant(Rat{1})});
    for (int i = 1; i < k; ++i) edges.push_back({i, i + 1, LatencyFn::constant(2 * (theta - 1))});
    for (int i = 1; i <= k; ++i) edges.push_back({i, t, LatencyFn::constant(Rat{1})});
    auto from_s = [&](int i) { return i - 1; };
    auto hop = [&](int i) { return k + i - 1; };
    auto to_t = [&](int i) { return 2 * k - 1 + i - 1; };

    UneVsPne g{k,
               Instance(k + 2, std::move(edges), {{0, t, Rat(k - 1) + eps}}),
               ExactEdgeFlow{},
               ExactPathFlow{},
               theta,
               1 + (k - 1) * (theta - 1)};

    g.decomposition = ExactPathFlow::zero(g.inst);
    auto& f = g.decomposition.flow[0];
    f[{from_s(1), to_t(1)}] = Rat{1};
    for (int i = 2; i < k; ++i) f[{from_s(i), to_t(i)}] = 1 - eps;
    for (int i = 1; i < k; ++i) f[{from_s(i), hop(i), to_t(i + 1)}] = eps;
    g.flow = g.decomposition.induced(g.inst);
    return g;
}

NonconvexityPair nonconvexity_pair() {
    // s=0, u=1, v=2, t=3. Latencies tuned so the long path costs 2 under flow
    // a and the split under flow b prices s-u-t at 1 and s-v-t at 3/2.
    std::vector<Edge> edges = {
        {0, 1, LatencyFn::polynomial({Rat{0}, Rat{0}, Rat(10, 11)})},
        {1, 2, LatencyFn::constant(Rat(1, 11))},
        {1, 3, LatencyFn::constant(Rat(59, 99))},
        {0, 2, LatencyFn::constant(Rat(25, 18))},
        {2, 3, LatencyFn::polynomial({Rat{0}, Rat{0}, Rat{1}})},
    };
    NonconvexityPair g{Instance(4, std::move(edges), {{0, 3, Rat{1}}}), ExactPathFlow{},
                       ExactPathFlow{}};
    g.a = ExactPathFlow::zero(g.inst);
    g.a.flow[0][{0, 1, 4}] = Rat{1};
    g.b = ExactPathFlow::zero(g.inst);
    g.b.flow[0][{0, 2}] = Rat(2, 3);
    g.b.flow[0][{3, 4}] = Rat(1, 3);
    return g;
}

Crossing crossing_gadget() {
    std::vector<Edge> edges = {
        {0, 1, LatencyFn::affine(Rat(1, 2), Rat{1})},
        {0, 1, LatencyFn::affine(Rat(3, 2), Rat{0})},
        {1, 2, LatencyFn::polynomial(monomial(Rat{64}, 8))},
        {1, 2, LatencyFn::polynomial(monomial(Rat{3}, 2))},
    };
    Crossing g{Instance(3, std::move(edges), {{0, 2, Rat{1}}}), ExactPathFlow{}};
    g.flow = ExactPathFlow::zero(g.inst);
    g.flow.flow[0][{0, 2}] = Rat(1, 2);
    g.flow.flow[0][{1, 3}] = Rat(1, 2);
    return g;
}

}  // namespace fairflow
