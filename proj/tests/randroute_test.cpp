#include <cmath>

#include "doctest.h"
#include "fairflow/decompose.hpp"
#include "fairflow/gadgets.hpp"
#include "fairflow/randroute.hpp"

using namespace fairflow;

namespace {

PathFlow crossing_pf() { return crossing_gadget().flow.to_double(); }

}  // namespace

TEST_CASE("ordering intervals mirror the path weights") {
    Crossing cr = crossing_gadget();
    PathFlow pf = crossing_pf();
    PathOrdering ord = build_ordering(cr.inst, pf);
    REQUIRE(ord.per_commodity.size() == 1);
    const auto& ci = ord.per_commodity[0];
    REQUIRE(ci.paths.size() == 2);
    CHECK(ci.paths[0] == Path{0, 2});
    CHECK(ci.paths[1] == Path{1, 3});
    CHECK(ci.upper[0] == doctest::Approx(0.5));
    CHECK(ci.upper[1] == 1.0);

    Cascade c = cascade(4, Rat(1, 2));
    PathOrdering co = build_ordering(c.inst, c.balanced.to_double());
    REQUIRE(co.per_commodity[0].paths.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(co.per_commodity[0].upper[i] == doctest::Approx(0.25 * (i + 1)));
}

TEST_CASE("ordering rejects degenerate inputs") {
    Crossing cr = crossing_gadget();
    PathFlow empty = PathFlow::zero(cr.inst);
    CHECK_THROWS_AS((void)build_ordering(cr.inst, empty), ValidationError);

    PathFlow off = crossing_pf();
    off.flow[0][{0, 2}] = 0.25;
    CHECK_THROWS_AS((void)build_ordering(cr.inst, off), ValidationError);
}

TEST_CASE("hash assignment endpoints and rotation") {
    Crossing cr = crossing_gadget();
    PathOrdering ord = build_ordering(cr.inst, crossing_pf());

    CHECK(hash_assign_index(ord, 0.0, 0, 0.25) == 0);
    CHECK(hash_assign_index(ord, 0.0, 0, 0.75) == 1);
    // an endpoint belongs to the interval it starts
    CHECK(hash_assign_index(ord, 0.0, 0, 0.5) == 1);
    CHECK(hash_assign_index(ord, 0.0, 0, 0.0) == 0);
    // rotation by 1/2 wraps the id back to the first interval
    CHECK(hash_assign_index(ord, 0.5, 0, 0.75) == 0);
    CHECK(hash_assign_index(ord, 0.5, 0, 0.5) == 0);
    CHECK(&hash_assign(ord, 0.5, 0, 0.75) == &ord.per_commodity[0].paths[0]);

    CHECK_THROWS_AS((void)hash_assign_index(ord, 1.0, 0, 0.5), DomainError);
    CHECK_THROWS_AS((void)hash_assign_index(ord, 0.5, 0, 1.0), DomainError);
    CHECK_THROWS_AS((void)hash_assign_index(ord, -0.1, 0, 0.5), DomainError);
}

TEST_CASE("every rotation preserves the interval masses") {
    Cascade c = cascade(4, Rat(1, 4));
    PathOrdering ord = build_ordering(c.inst, c.balanced.to_double());
    const auto& ci = ord.per_commodity[0];
    const int m = 4096;
    for (double X : {0.0, 0.125, 1.0 / 3.0, 0.5, 0.999}) {
        std::vector<int> hits(ci.paths.size(), 0);
        for (int j = 0; j < m; ++j) ++hits[hash_assign_index(ord, X, 0, (j + 0.5) / m)];
        for (size_t i = 0; i < ci.paths.size(); ++i) {
            double width = ci.upper[i] - (i ? ci.upper[i - 1] : 0.0);
            // a half-open interval of length w catches floor/ceil of w*m grid points
            CHECK(std::abs(hits[i] - width * m) <= 1.0);
        }
    }
}

TEST_CASE("uniform rotation makes each id uniform over paths") {
    Crossing cr = crossing_gadget();
    PathOrdering ord = build_ordering(cr.inst, crossing_pf());
    const int grid = 10000;
    for (double id : {0.0, 0.3, 0.77}) {
        int first = 0;
        for (int i = 0; i < grid; ++i)
            if (hash_assign_index(ord, (i + 0.5) / grid, 0, id) == 0) ++first;
        CHECK(std::abs(first / double(grid) - 0.5) <= 1e-3);
    }
}

TEST_CASE("expected latency matches the weighted mean") {
    Crossing cr = crossing_gadget();
    CHECK(expected_latency(cr.inst, crossing_pf(), 0) == doctest::Approx(1.5).epsilon(1e-12));

    Cascade c = cascade(4, Rat(1, 4));
    PathFlow pf = c.balanced.to_double();
    // half the demand on the all-bottom path (7/2), an eighth on each detour (35/8)
    CHECK(expected_latency(c.inst, pf, 0) == doctest::Approx(63.0 / 16.0).epsilon(1e-12));

    PathOrdering ord = build_ordering(c.inst, pf);
    auto costs = edge_costs(c.inst, induced_edge_flow(c.inst, pf));
    double mean = 0;
    const auto& ci = ord.per_commodity[0];
    for (size_t i = 0; i < ci.paths.size(); ++i) {
        double w = ci.upper[i] - (i ? ci.upper[i - 1] : 0.0);
        mean += w * path_latency(c.inst, ci.paths[i], costs);
    }
    CHECK(mean == doctest::Approx(expected_latency(c.inst, pf, 0)).epsilon(1e-12));
}

TEST_CASE("deviation bounds") {
    Cascade tight = cascade(4, Rat(1, 2));
    auto b = stddev_bound(tight.inst, tight.balanced.to_double(), 0, 1.0);
    CHECK(b.formula == 0.0);
    CHECK(b.bhatia_davis == doctest::Approx(0.0));

    Cascade c = cascade(4, Rat(1, 4));
    PathFlow pf = c.balanced.to_double();
    double theta = measure_fairness(c.inst, pf).theta_une;
    CHECK(theta == doctest::Approx(1.25).epsilon(1e-12));
    auto bc = stddev_bound(c.inst, pf, 0, theta);
    double mean = expected_latency(c.inst, pf, 0);
    CHECK(bc.formula == doctest::Approx((theta - 1) / (4 * std::sqrt(theta)) * mean).epsilon(1e-12));
    // two-point distribution: Bhatia-Davis is tight at 7/16
    CHECK(bc.bhatia_davis == doctest::Approx(7.0 / 16.0).epsilon(1e-12));

    auto b4 = stddev_bound(c.inst, pf, 0, 4.0);
    CHECK(b4.formula == doctest::Approx(3.0 / 8.0 * mean).epsilon(1e-12));
    CHECK_THROWS_AS((void)stddev_bound(c.inst, pf, 0, 0.5), DomainError);
}

TEST_CASE("monte carlo is deterministic and validated") {
    Crossing cr = crossing_gadget();
    PathFlow pf = crossing_pf();
    CHECK_THROWS_AS((void)monte_carlo(cr.inst, pf, 0, 8, 1), DomainError);
    CHECK_THROWS_AS((void)monte_carlo(cr.inst, pf, 10, 0, 1), DomainError);

    auto r1 = monte_carlo(cr.inst, pf, 500, 16, 42);
    auto r2 = monte_carlo(cr.inst, pf, 500, 16, 42);
    REQUIRE(r1.per_commodity.size() == 1);
    CHECK(r1.per_commodity[0].mean == r2.per_commodity[0].mean);
    CHECK(r1.per_commodity[0].stddev == r2.per_commodity[0].stddev);
    CHECK(r1.per_commodity[0].path_mass == r2.per_commodity[0].path_mass);
}

TEST_CASE("monte carlo statistics on the crossing fixture") {
    Crossing cr = crossing_gadget();
    PathFlow pf = crossing_pf();
    auto r = monte_carlo(cr.inst, pf, 2000, 32, 0);
    const auto& s = r.per_commodity[0];
    // both used paths cost 3/2, so the latency draw is constant
    CHECK(s.mean == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.stddev == doctest::Approx(0.0));
    double se = 3 * std::sqrt(0.25 / (2000.0 * 32));
    CHECK(std::abs(s.path_mass[0] - 0.5) <= se);
    CHECK(std::abs(s.path_mass[1] - 0.5) <= se);
}

TEST_CASE("monte carlo tracks the analytic mean and deviation cap") {
    Cascade c = cascade(4, Rat(1, 4));
    PathFlow pf = c.balanced.to_double();
    auto r = monte_carlo(c.inst, pf, 4000, 32, 7);
    const auto& s = r.per_commodity[0];
    double mean = expected_latency(c.inst, pf, 0);
    CHECK(std::abs(s.mean - mean) <= 0.02);
    auto b = stddev_bound(c.inst, pf, 0, measure_fairness(c.inst, pf).theta_une);
    CHECK(s.stddev <= b.bhatia_davis + 0.01);
    double total = 0;
    for (double m : s.path_mass) total += m;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}
