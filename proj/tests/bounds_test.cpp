#include <cmath>
#include <limits>

#include "doctest.h"
#include "fairflow/bounds.hpp"
#include "fairflow/decompose.hpp"
#include "fairflow/gadgets.hpp"
#include "fairflow/solver.hpp"

using namespace fairflow;

TEST_CASE("gamma per latency class") {
    CHECK(gamma_of(LatencyClass::affine()) == 2.0);
    for (int p = 0; p <= 6; ++p) CHECK(gamma_of(LatencyClass::poly(p)) == p + 1.0);
    CHECK(gamma_of(LatencyClass::mm1(0.5)) == doctest::Approx(2.0));
    CHECK(gamma_of(LatencyClass::mm1(0.75)) == doctest::Approx(4.0));
}

TEST_CASE("class detection") {
    Crossing cr = crossing_gadget();
    auto cls = LatencyClass::of_instance(cr.inst);
    CHECK(cls.family == LatencyClass::Family::Poly);
    CHECK(cls.degree == 8);
    CHECK(gamma_of(cls) == 9.0);

    Instance aff = pigou(LatencyFn::constant(Rat(1)), LatencyFn::affine(Rat(1), Rat(0)), Rat(1));
    CHECK(LatencyClass::of_instance(aff).family == LatencyClass::Family::Affine);

    auto m2 = LatencyFn::mm1(Rat(2));
    auto m4 = LatencyFn::mm1(Rat(4));
    Instance queues(2, {{0, 1, m2}, {0, 1, m4}}, {{0, 1, Rat(1)}});
    auto q = LatencyClass::of_instance(queues);
    CHECK(q.family == LatencyClass::Family::MM1);
    CHECK(q.rho_max == doctest::Approx(0.5));  // tightest single queue

    Instance mixed(2, {{0, 1, m2}, {0, 1, LatencyFn::affine(Rat(1), Rat(0))}}, {{0, 1, Rat(1)}});
    CHECK_THROWS_AS((void)LatencyClass::of_instance(mixed), CapabilityError);

    Instance hot(2, {{0, 1, m2}}, {{0, 1, Rat(2)}});
    CHECK_THROWS_AS((void)LatencyClass::of_instance(hot), DomainError);
}

TEST_CASE("omega closed forms") {
    CHECK(omega(LatencyClass::affine(), 1.0) == doctest::Approx(0.25));
    CHECK(omega(LatencyClass::affine(), 2.0) == doctest::Approx(0.125));
    CHECK(std::isinf(omega(LatencyClass::affine(), 0.5)));
    // degree-2 supremum: (2/3) * 3^{-1/2}
    CHECK(omega(LatencyClass::poly(2), 1.0) == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))));
    CHECK(omega(LatencyClass::poly(0), 1.0) == doctest::Approx(0.0));
}

TEST_CASE("anarchy bounds for the affine class") {
    auto b1 = poa_upper_bound(LatencyClass::affine(), 1.0);
    CHECK(b1.value == doctest::Approx(4.0 / 3.0).epsilon(1e-4));
    auto b2 = poa_upper_bound(LatencyClass::affine(), 2.0);
    CHECK(b2.value == doctest::Approx(4.0).epsilon(1e-3));
    auto b3 = poa_upper_bound(LatencyClass::affine(), 3.0);
    CHECK(b3.value == doctest::Approx(9.0).epsilon(1e-3));
    CHECK(b1.params.count("lambda") == 1);
}

TEST_CASE("anarchy bound for quadratics") {
    auto b = poa_upper_bound(LatencyClass::poly(2), 1.0);
    // 3*sqrt(3) / (3*sqrt(3) - 2)
    double s = 3.0 * std::sqrt(3.0);
    CHECK(b.value == doctest::Approx(s / (s - 2.0)).epsilon(2e-3));
}

TEST_CASE("anarchy bound for queues is numeric and monotone") {
    auto b1 = poa_upper_bound(LatencyClass::mm1(0.5), 1.0);
    CHECK(b1.method == BoundResult::Method::NumericGrid);
    CHECK(b1.value >= 1.0);
    CHECK(std::isfinite(b1.value));
    auto b2 = poa_upper_bound(LatencyClass::mm1(0.5), 2.0);
    CHECK(b2.value >= b1.value - 1e-9);
}

TEST_CASE("stability bound closed forms") {
    CHECK(pos_upper_bound_poly(1, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    double s = 3.0 * std::sqrt(3.0);
    CHECK(pos_upper_bound_poly(2, 1.0) == doctest::Approx(s / (s - 2.0)).epsilon(1e-9));
    CHECK(pos_upper_bound_poly(1, 2.0) == 1.0);
    CHECK(pos_upper_bound_poly(3, 4.0) == 1.0);

    double prev = std::numeric_limits<double>::infinity();
    for (double theta = 1.0; theta <= 2.0; theta += 0.05) {
        double v = pos_upper_bound_poly(1, theta);
        CHECK(v <= prev + 1e-12);
        CHECK(v >= 1.0);
        prev = v;
    }
}

TEST_CASE("queue stability bound") {
    CHECK(pos_upper_bound_mm1(0.5, 1.0) == doctest::Approx(0.5 * (1 + std::sqrt(2.0))).epsilon(1e-12));
    CHECK(pos_upper_bound_mm1(0.5, 1.5) == doctest::Approx(0.5 * (1 + 2.0 / std::sqrt(3.0))).epsilon(1e-12));
    CHECK(pos_upper_bound_mm1(0.5, 2.0) == 1.0);
    CHECK(pos_upper_bound_mm1(0.5, 3.0) == 1.0);
    CHECK_THROWS_AS((void)pos_upper_bound_mm1(0.5, 0.5), DomainError);
    CHECK_THROWS_AS((void)pos_upper_bound_mm1(1.0, 1.5), DomainError);
}

TEST_CASE("series-parallel stability bound") {
    double v = pos_upper_bound_series_parallel(LatencyClass::affine(), 1.0, 1.0);
    CHECK(v == doctest::Approx(4.0 / 3.0).epsilon(2e-3));
    CHECK(pos_upper_bound_series_parallel(LatencyClass::affine(), 3.0, 1.0) >= 1.0);
    double far = pos_upper_bound_series_parallel(LatencyClass::poly(1), 2.5, 1.0);
    CHECK(far >= 1.0);
    CHECK(far <= v + 1e-9);
}

TEST_CASE("separation between unilateral fairness and the one-shot certificate") {
    // two routes: eps*x versus the constant L; nearly all demand on the cheap one
    const double L = 10, eps = 0.1, delta = 0.01;
    Instance inst = pigou(LatencyFn::affine(Rat(1, 10), Rat(0)), LatencyFn::constant(Rat(10)), Rat(1));
    EdgeFlow f = EdgeFlow::zero(inst);
    f.load[0][1] = delta * eps / L;
    f.load[0][0] = 1.0 - f.load[0][1];

    double theta_star =
        1 + (L * L * delta - L * delta * eps + delta * delta * eps * eps) / (L * (L - delta * eps));
    auto cert = check_variational_inequality(inst, f, theta_star + 1e-9);
    CHECK(cert.satisfied);
    CHECK(cert.min_counter_cost == doctest::Approx(eps * f.load[0][0]).epsilon(1e-12));
    auto tighter = check_variational_inequality(inst, f, theta_star * (1 - 1e-5));
    CHECK_FALSE(tighter.satisfied);

    PathFlow pf = PathFlow::zero(inst);
    pf.flow[0][{0}] = f.load[0][0];
    pf.flow[0][{1}] = f.load[0][1];
    auto fr = measure_fairness(inst, pf);
    CHECK(fr.theta_une >= L / eps);
}

TEST_CASE("equilibria satisfy the certificate at ratio one") {
    Instance inst = pigou(LatencyFn::constant(Rat(1)), LatencyFn::affine(Rat(1), Rat(0)), Rat(1));
    auto ne = solve_nash(inst);
    auto cert = check_variational_inequality(inst, ne.flow, 1.0);
    CHECK(cert.satisfied);
    CHECK(cert.social_cost == doctest::Approx(cert.min_counter_cost).epsilon(1e-8));
}
