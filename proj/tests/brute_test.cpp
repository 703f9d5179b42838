#include "doctest.h"
#include "fairflow/brute.hpp"
#include "fairflow/decompose.hpp"
#include "fairflow/gadgets.hpp"

using namespace fairflow;

TEST_CASE("balanced chain reaches the three-halves ratio") {
    PartitionChain pc = partition_chain({Rat(1), Rat(1)});
    auto une = brute_force_best_decomposition(pc.inst, pc.so, FairnessObjective::UNE);
    CHECK(une.theta == Rat(3, 2));
    CHECK_NOTHROW(validate_path_flow(pc.inst, une.flow.to_double()));
    auto fr = measure_fairness(pc.inst, une.flow.to_double());
    CHECK(fr.theta_une == doctest::Approx(1.5).epsilon(1e-12));

    auto ef = brute_force_best_decomposition(pc.inst, pc.so, FairnessObjective::EF);
    CHECK(ef.theta == Rat(1));
}

TEST_CASE("unbalanced chain cannot do as well") {
    PartitionChain pc = partition_chain({Rat(1), Rat(2)});
    auto une = brute_force_best_decomposition(pc.inst, pc.so, FairnessObjective::UNE);
    CHECK(une.theta == Rat(5, 3));
    auto ef = brute_force_best_decomposition(pc.inst, pc.so, FairnessObjective::EF);
    CHECK(ef.theta == Rat(5, 4));
}

TEST_CASE("forced parallel split") {
    TwoLink tl = two_link(Rat(1));
    auto ef = brute_force_best_decomposition(tl.inst, tl.so, FairnessObjective::EF);
    CHECK(ef.theta == Rat(2));  // both routes must carry, costs q and q/2

    Instance flat = pigou(LatencyFn::constant(Rat(1)), LatencyFn::constant(Rat(1)), Rat(1));
    ExactEdgeFlow half = ExactEdgeFlow::zero(flat);
    half.load[0][0] = half.load[0][1] = Rat(1, 2);
    auto even = brute_force_best_decomposition(flat, half, FairnessObjective::EF);
    CHECK(even.theta == Rat(1));
}

TEST_CASE("commodities are optimized independently") {
    auto c1 = LatencyFn::constant(Rat(1));
    auto ax = LatencyFn::affine(Rat(1), Rat(0));
    Instance inst(4, {{0, 1, c1}, {0, 1, ax}, {2, 3, c1}, {2, 3, ax}},
                  {{0, 1, Rat(1)}, {2, 3, Rat(1)}});
    ExactEdgeFlow f = ExactEdgeFlow::zero(inst);
    for (int e = 0; e < 4; ++e) f.load[e / 2][e] = Rat(1, 2);
    auto r = brute_force_best_decomposition(inst, f, FairnessObjective::UNE);
    REQUIRE(r.per_commodity_theta.size() == 2);
    CHECK(r.per_commodity_theta[0] == Rat(2));
    CHECK(r.per_commodity_theta[1] == Rat(2));
    CHECK(r.theta == Rat(2));
}

TEST_CASE("mixture decomposition is forced and envious") {
    NonconvexityPair nc = nonconvexity_pair();
    ExactEdgeFlow mix = ExactEdgeFlow::zero(nc.inst);
    ExactEdgeFlow fa = nc.a.induced(nc.inst);
    ExactEdgeFlow fb = nc.b.induced(nc.inst);
    for (int e = 0; e < nc.inst.num_edges(); ++e)
        mix.load[0][e] = (fa.load[0][e] + fb.load[0][e]) / 2;
    auto ef = brute_force_best_decomposition(nc.inst, mix, FairnessObjective::EF);
    CHECK(ef.theta == Rat(11, 7));
}

TEST_CASE("path budget is enforced") {
    PartitionChain pc = partition_chain({Rat(1), Rat(1)});
    CHECK_THROWS_AS(
        (void)brute_force_best_decomposition(pc.inst, pc.so, FairnessObjective::UNE, 3),
        CapacityError);
}

TEST_CASE("exact feasibility of candidate path sets") {
    PartitionChain pc = partition_chain({Rat(1), Rat(1)});
    // stage tops are edges 0 and 2, bottoms 1 and 3
    std::vector<Path> crossing = {{0, 3}, {1, 2}};
    std::map<Path, Rat> sol;
    CHECK(exact_decomposition_feasible(pc.inst, pc.so, 0, crossing, &sol));
    CHECK(sol.at({0, 3}) == Rat(1, 2));

    std::vector<Path> lonely = {{1, 3}};
    CHECK_FALSE(exact_decomposition_feasible(pc.inst, pc.so, 0, lonely, nullptr));
}

TEST_CASE("snapping recovers rational loads from numeric noise") {
    PartitionChain pc = partition_chain({Rat(1), Rat(2), Rat(1)});
    EdgeFlow noisy = pc.so.to_double();
    for (auto& v : noisy.load[0]) v += 3e-10;
    auto snapped = snap_flow(pc.inst, noisy);
    REQUIRE(snapped.has_value());
    for (int e = 0; e < pc.inst.num_edges(); ++e)
        CHECK(snapped->load[0][e] == Rat(1, 2));

    EdgeFlow broken = pc.so.to_double();
    broken.load[0][0] += 1e-3;  // conservation now fails at the stage boundary
    CHECK_FALSE(snap_flow(pc.inst, broken).has_value());
}

TEST_CASE("snapping respects the denominator budget") {
    auto one = LatencyFn::constant(Rat(1));
    Instance line(2, {{0, 1, one}}, {{0, 1, Rat(1, 3)}});
    EdgeFlow f = EdgeFlow::zero(line);
    f.load[0][0] = 1.0 / 3.0;
    auto s = snap_flow(line, f);
    REQUIRE(s.has_value());
    CHECK(s->load[0][0] == Rat(1, 3));
}
