#include <cmath>

#include "doctest.h"
#include "fairflow/decompose.hpp"
#include "fairflow/gadgets.hpp"
#include "fairflow/solver.hpp"

using namespace fairflow;

namespace {

Instance unit_pigou() {
    return pigou(LatencyFn::constant(Rat(1)), LatencyFn::affine(Rat(1), Rat(0)), Rat(1));
}

}  // namespace

TEST_CASE("pigou equilibrium puts everyone on the variable edge") {
    Instance inst = unit_pigou();
    auto r = solve_nash(inst);
    CHECK(r.flow.load[0][1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(social_cost(inst, r.flow) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.duality_gap <= 1e-8 * std::max(1.0, std::abs(r.potential_value)));
}

TEST_CASE("pigou social optimum splits in half") {
    Instance inst = unit_pigou();
    auto r = solve_social_optimum(inst);
    CHECK(r.flow.load[0][1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(social_cost(inst, r.flow) == doctest::Approx(0.75).epsilon(1e-6));

    // same thing through the generic entry point
    auto m = minimize_potential(inst, PotentialSpec::marginal(inst));
    CHECK(m.flow.load[0][1] == doctest::Approx(r.flow.load[0][1]).epsilon(1e-6));
}

TEST_CASE("single edge converges immediately") {
    Instance inst(2, {{0, 1, LatencyFn::affine(Rat(2), Rat(1))}}, {{0, 1, Rat(3)}});
    auto r = solve_nash(inst);
    CHECK(r.iterations == 1);
    CHECK(r.duality_gap == doctest::Approx(0.0));
    CHECK(r.flow.load[0][0] == doctest::Approx(3.0));
}

TEST_CASE("cascade equilibrium rides the bottom edges") {
    Cascade c = cascade(4, Rat(1, 2));
    auto r = solve_nash(c.inst);
    for (int i = 0; i < 4; ++i)
        CHECK(r.flow.load[0][2 * i + 1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("two-link equilibrium and optimum") {
    TwoLink tl = two_link(Rat(1));
    auto ne = solve_nash(tl.inst);
    CHECK(ne.flow.load[0][1] == doctest::Approx(1.0).epsilon(1e-6));
    auto so = solve_social_optimum(tl.inst);
    CHECK(so.flow.load[0][0] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(so.flow.load[0][1] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("appended-stage optimum lands at the stated bottom share") {
    // two parallel routes: a*x + b versus c*x, with a = 8/5, b = 2, c = 16/3
    Instance inst = pigou(LatencyFn::polynomial({Rat(2), Rat(8, 5)}),
                          LatencyFn::polynomial({Rat(0), Rat(16, 3)}), Rat(1));
    auto r = solve_social_optimum(inst);
    CHECK(r.flow.load[0][1] == doctest::Approx(0.375).epsilon(1e-5));
}

TEST_CASE("iteration budget is enforced") {
    // two identical links: equilibrium splits evenly, so the all-or-nothing
    // start is wrong and five harmonic steps cannot reach the tolerance
    Instance inst = pigou(LatencyFn::affine(Rat(1), Rat(0)),
                          LatencyFn::affine(Rat(1), Rat(0)), Rat(1));
    SolverConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iters = 5;
    cfg.step_rule = SolverConfig::StepRule::Harmonic;
    cfg.refine_active_paths = false;
    CHECK_THROWS_AS((void)solve_nash(inst, cfg), ConvergenceError);
}

TEST_CASE("recorded potential trace is monotone under exact line search") {
    Cascade c = cascade(3, Rat(1, 3));
    SolverConfig cfg;
    cfg.record_trace = true;
    auto r = solve_nash(c.inst, cfg);
    REQUIRE(r.trace.size() >= 1);
    for (size_t i = 1; i < r.trace.size(); ++i)
        CHECK(r.trace[i] <= r.trace[i - 1] + 1e-12);
}

TEST_CASE("support stays a valid path decomposition of the flow") {
    PartitionChain pc = partition_chain({Rat(1), Rat(2)});
    auto r = solve_social_optimum(pc.inst);
    CHECK_NOTHROW(validate_path_flow(pc.inst, r.support));
    EdgeFlow ind = induced_edge_flow(pc.inst, r.support);
    for (int e = 0; e < pc.inst.num_edges(); ++e)
        CHECK(ind.load[0][e] == doctest::Approx(r.flow.load[0][e]).epsilon(1e-7));
}

TEST_CASE("design potential reduces to the latency at ratio one") {
    Crossing cr = crossing_gadget();
    auto spec = design_modified_potential(cr.inst, 1.0);
    for (int e = 0; e < cr.inst.num_edges(); ++e) {
        CHECK(spec.edge[e].form() == PotentialFn::Form::Latency);
        for (double x : {0.0, 0.3, 0.9})
            CHECK(spec.phi(e, x) == doctest::Approx(cr.inst.edge(e).latency.eval(x)));
    }
}

TEST_CASE("design potential stays inside the fairness band") {
    Crossing cr = crossing_gadget();
    for (double theta : {1.2, 2.0, 5.0}) {
        auto spec = design_modified_potential(cr.inst, theta);
        for (int e = 0; e < cr.inst.num_edges(); ++e) {
            const auto& l = cr.inst.edge(e).latency;
            for (int i = 0; i <= 200; ++i) {
                double x = i / 200.0;
                double phi = spec.phi(e, x);
                CHECK(phi <= l.eval(x) + 1e-12);
                CHECK(phi >= l.eval(x) / theta - 1e-12);
            }
        }
    }
}

TEST_CASE("mm1 design coefficients follow the closed form") {
    Instance inst(2, {{0, 1, LatencyFn::mm1(Rat(2))}, {0, 1, LatencyFn::mm1(Rat(2))}},
                  {{0, 1, Rat(1)}});
    auto spec2 = design_modified_potential(inst, 2.0);
    CHECK(spec2.edge[0].design_a() == doctest::Approx(0.0));
    CHECK(spec2.phi(0, 0.3) == doctest::Approx(0.5));  // 1/(u - 0*x)

    auto spec15 = design_modified_potential(inst, 1.5);
    CHECK(spec15.edge[0].design_a() == doctest::Approx(0.5));
    CHECK(spec15.phi(0, 1.0) == doctest::Approx(2.0 / 3.0));  // 1/(2 - 0.5)
}

TEST_CASE("designed flows certify the requested positive-path ratio") {
    Crossing cr = crossing_gadget();
    for (double theta : {1.3, 2.0}) {
        auto spec = design_modified_potential(cr.inst, theta);
        SolverConfig cfg;
        cfg.tol = 1e-10;
        auto r = minimize_potential(cr.inst, spec, cfg);
        CHECK_FALSE(check_PNE_acyclic(cr.inst, r.flow).has_value());
        auto fr = measure_fairness(cr.inst, greedy_decomposition(cr.inst, r.flow));
        CHECK(fr.theta_pne <= theta * (1 + 1e-6));
    }
}

TEST_CASE("toll potential caps the surcharge") {
    Instance inst = unit_pigou();
    auto spec = bounded_toll_potential(inst, 0.5);
    CHECK(spec.phi(0, 0.7) == doctest::Approx(1.0));   // constant edge: toll min(0, eps*l) = 0
    CHECK(spec.phi(1, 0.8) == doctest::Approx(1.2));   // x + min(x, 0.5x)

    SolverConfig cfg;
    cfg.tol = 1e-10;
    auto r = minimize_potential(inst, spec, cfg);
    CHECK(r.flow.load[0][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
    auto fr = measure_fairness(inst, greedy_decomposition(inst, r.flow));
    CHECK(fr.theta_pne <= 1.5 * (1 + 1e-6));

    auto plain = bounded_toll_potential(inst, 0.0);
    CHECK(plain.edge[1].form() == PotentialFn::Form::Latency);
    CHECK_THROWS_AS((void)bounded_toll_potential(inst, -0.1), DomainError);
    CHECK_THROWS_AS((void)design_modified_potential(inst, 0.9), DomainError);
}

TEST_CASE("mm1 instances solve without touching a pole") {
    auto m11 = LatencyFn::mm1(Rat(11, 10));
    auto m5 = LatencyFn::mm1(Rat(5));
    Instance inst(2, {{0, 1, m11}, {0, 1, m5}}, {{0, 1, Rat(2)}});
    auto r = solve_nash(inst);
    CHECK(check_feasible(inst, r.flow).feasible);
    CHECK(r.flow.load[0][0] < 1.1);
    CHECK(r.flow.load[0][1] < 5.0);
    // the wide edge stays cheaper even with the whole demand on it
    CHECK(r.flow.load[0][1] == doctest::Approx(2.0).epsilon(1e-5));

    Instance jammed(2, {{0, 1, m11}}, {{0, 1, Rat(2)}});
    CHECK_THROWS_AS((void)solve_nash(jammed), ValidationError);
}
