#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fairflow/decompose.hpp"
#include "fairflow/gadgets.hpp"
#include "fairflow/paths.hpp"
#include "fairflow/solver.hpp"
#include "fairflow/util.hpp"

using namespace fairflow;

namespace {

double max_used_cost(const Instance& inst, const PathFlow& pf, int k) {
    auto costs = edge_costs(inst, induced_edge_flow(inst, pf));
    double best = 0;
    for (const auto& [p, w] : pf.flow[k])
        if (w > 1e-12) best = std::max(best, path_latency(inst, p, costs));
    return best;
}

double min_used_cost(const Instance& inst, const PathFlow& pf, int k) {
    auto costs = edge_costs(inst, induced_edge_flow(inst, pf));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [p, w] : pf.flow[k])
        if (w > 1e-12) best = std::min(best, path_latency(inst, p, costs));
    return best;
}

}  // namespace

TEST_CASE("greedy on a single route") {
    auto one = LatencyFn::constant(Rat(1));
    Instance line(3, {{0, 1, one}, {1, 2, one}}, {{0, 2, Rat(2)}});
    EdgeFlow f = EdgeFlow::zero(line);
    f.load[0][0] = f.load[0][1] = 2.0;
    GreedyTrace trace;
    PathFlow pf = greedy_decomposition(line, f, &trace);
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].path == Path{0, 1});
    CHECK(trace[0].amount == doctest::Approx(2.0));
    CHECK(pf.flow[0].at({0, 1}) == doctest::Approx(2.0));
}

TEST_CASE("greedy pulls the cheapest route first") {
    TwoLink tl = two_link(Rat(1));
    GreedyTrace trace;
    PathFlow pf = greedy_decomposition(tl.inst, tl.so.to_double(), &trace);
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].path == Path{1});  // q*x at load 1/2 is the cheap side
    CHECK(trace[0].cost == doctest::Approx(0.5));
    CHECK(trace[1].cost == doctest::Approx(1.0));
    CHECK(pf.flow[0].size() == 2);
}

TEST_CASE("greedy on the two-stage chain reproduces the loads") {
    PartitionChain pc = partition_chain({Rat(1), Rat(1)});
    PathFlow pf = greedy_decomposition(pc.inst, pc.so.to_double());
    CHECK(pf.total_used_paths() <= 4);
    EdgeFlow ind = induced_edge_flow(pc.inst, pf);
    for (int e = 0; e < pc.inst.num_edges(); ++e)
        CHECK(ind.load[0][e] == doctest::Approx(0.5).epsilon(1e-12));
    // the cheapest-first rule pairs both bottoms, then both tops
    auto fr = measure_fairness(pc.inst, pf);
    CHECK(fr.theta_une == doctest::Approx(2.0));
}

TEST_CASE("greedy rejects infeasible input") {
    TwoLink tl = two_link(Rat(1));
    EdgeFlow f = tl.so.to_double();
    f.load[0][0] += 0.25;
    CHECK_THROWS_AS((void)greedy_decomposition(tl.inst, f), ValidationError);
}

TEST_CASE("sparsify collapses a dense decomposition") {
    std::vector<Rat> q(8, Rat(1));
    PartitionChain pc = partition_chain(q);
    auto paths = enumerate_paths(pc.inst, 0);
    REQUIRE(paths.size() == 256);
    PathFlow dense = PathFlow::zero(pc.inst);
    for (const auto& p : paths) dense.flow[0][p] = 1.0 / 256.0;

    PathFlow sparse = sparsify(pc.inst, dense);
    CHECK(sparse.flow[0].size() <= 16);

    EdgeFlow before = induced_edge_flow(pc.inst, dense);
    EdgeFlow after = induced_edge_flow(pc.inst, sparse);
    for (int e = 0; e < pc.inst.num_edges(); ++e)
        CHECK(after.load[0][e] == doctest::Approx(before.load[0][e]).epsilon(1e-12));

    CHECK(max_used_cost(pc.inst, sparse, 0) <= max_used_cost(pc.inst, dense, 0) + 1e-12);
    CHECK(min_used_cost(pc.inst, sparse, 0) >= min_used_cost(pc.inst, dense, 0) - 1e-12);
}

TEST_CASE("sparsify leaves an independent support alone") {
    Crossing cr = crossing_gadget();
    PathFlow pf = cr.flow.to_double();
    PathFlow s = sparsify(cr.inst, pf);
    CHECK(s.flow[0].size() == 2);
    CHECK(s.flow[0].at({0, 2}) == doctest::Approx(0.5));
    CHECK(s.flow[0].at({1, 3}) == doctest::Approx(0.5));
}

TEST_CASE("fairness of the crossing fixture") {
    Crossing cr = crossing_gadget();
    auto fr = measure_fairness(cr.inst, cr.flow.to_double());
    CHECK(fr.theta_une == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(fr.theta_pne == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fr.theta_ef == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(fr.per_commodity.size() == 1);
    const auto& c = fr.per_commodity[0];
    CHECK(c.shortest == doctest::Approx(1.0));
    CHECK(c.longest_positive == doctest::Approx(2.0));
    CHECK(c.positive_acyclic);
}

TEST_CASE("fairness of the balanced cascade decomposition") {
    Cascade tight = cascade(4, Rat(1, 2));  // n*eps/2 == 1
    auto fr = measure_fairness(tight.inst, tight.balanced.to_double());
    CHECK(fr.theta_ef == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fr.theta_une == doctest::Approx(1.25).epsilon(1e-12));  // (n+1)/n
    CHECK(fr.theta_pne == doctest::Approx(2.0).epsilon(1e-12));

    Cascade loose = cascade(4, Rat(1, 4));  // the all-bottom path keeps weight
    auto fl = measure_fairness(loose.inst, loose.balanced.to_double());
    CHECK(fl.theta_ef == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(fl.theta_une == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("positive cycles are detected and removed") {
    auto affx = LatencyFn::affine(Rat(1), Rat(0));
    Instance ring(3, {{0, 1, affx}, {1, 2, affx}, {2, 1, affx}}, {{0, 2, Rat(1)}});
    EdgeFlow f = EdgeFlow::zero(ring);
    f.load[0][0] = 1.0;
    f.load[0][1] = 1.3;
    f.load[0][2] = 0.3;
    REQUIRE(check_feasible(ring, f).feasible);

    auto cyc = check_PNE_acyclic(ring, f);
    REQUIRE(cyc.has_value());
    CHECK(cyc->size() == 2);

    EdgeFlow clean = remove_positive_cycles(ring, f);
    CHECK_FALSE(check_PNE_acyclic(ring, clean).has_value());
    CHECK(clean.load[0][1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(clean.load[0][2] == doctest::Approx(0.0));
    CHECK(social_cost(ring, clean) < social_cost(ring, f));
    CHECK(check_feasible(ring, clean).feasible);
}

TEST_CASE("free cycles cost nothing to carry or to drop") {
    auto zero = LatencyFn::constant(Rat(0));
    auto one = LatencyFn::constant(Rat(1));
    Instance ring(3, {{0, 1, one}, {1, 2, zero}, {2, 1, zero}}, {{0, 2, Rat(1)}});
    EdgeFlow f = EdgeFlow::zero(ring);
    f.load[0][0] = 1.0;
    f.load[0][1] = 1.5;
    f.load[0][2] = 0.5;
    EdgeFlow clean = remove_positive_cycles(ring, f);
    CHECK(social_cost(ring, clean) == doctest::Approx(social_cost(ring, f)));
}

TEST_CASE("acyclic flows pass through cycle removal untouched") {
    Crossing cr = crossing_gadget();
    EdgeFlow f = cr.flow.induced(cr.inst).to_double();
    EdgeFlow same = remove_positive_cycles(cr.inst, f);
    for (int e = 0; e < cr.inst.num_edges(); ++e)
        CHECK(same.load[0][e] == doctest::Approx(f.load[0][e]));
}

TEST_CASE("ratio hierarchy on random decompositions") {
    SplitMix64 rng(20240817);
    for (int it = 0; it < 60; ++it) {
        int n = 2 + static_cast<int>(rng.next() % 4);
        std::vector<Rat> q;
        for (int i = 0; i < n; ++i) q.push_back(Rat(1 + static_cast<int>(rng.next() % 5)));
        PartitionChain pc = partition_chain(q);
        auto paths = enumerate_paths(pc.inst, 0);
        PathFlow pf = PathFlow::zero(pc.inst);
        double total = 0;
        for (const auto& p : paths) {
            if (rng.next() % 2) continue;
            double w = 0.05 + rng.next_double();
            pf.flow[0][p] = w;
            total += w;
        }
        if (total == 0) {
            pf.flow[0][paths[0]] = total = 1;
        }
        for (auto& [p, w] : pf.flow[0]) w /= total;

        auto fr = measure_fairness(pc.inst, pf);
        CHECK(fr.theta_pne >= fr.theta_une - 1e-12);
        CHECK(fr.theta_une >= fr.theta_ef - 1e-12);
        CHECK(fr.theta_pne <= (pc.inst.num_nodes() - 1) * fr.theta_une + 1e-8);
        if (fr.theta_une <= 1 + 1e-8) CHECK(fr.theta_pne <= 1 + 1e-8);
    }
}

TEST_CASE("equilibria are unit-fair on every ratio") {
    for (auto q : {std::vector<Rat>{Rat(1), Rat(2)}, std::vector<Rat>{Rat(3), Rat(1), Rat(2)}}) {
        PartitionChain pc = partition_chain(q);
        auto r = solve_nash(pc.inst);
        auto fr = measure_fairness(pc.inst, sparsify(pc.inst, greedy_decomposition(pc.inst, r.flow)));
        CHECK(fr.theta_une <= 1 + 1e-8);
        CHECK(fr.theta_pne <= 1 + 1e-8);
    }
}
