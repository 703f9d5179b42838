#pragma once

#include <map>
#include <string>

#include "fairflow/flow.hpp"
#include "fairflow/instance.hpp"

namespace fairflow {

struct LatencyClass {
    enum class Family { Affine, Poly, MM1 };
    Family family = Family::Affine;
    int degree = 1;        // Poly
    double rho_max = 0.5;  // MM1: max demand-to-capacity ratio, < 1

    static LatencyClass affine();
    static LatencyClass poly(int degree);
    static LatencyClass mm1(double rho_max);
    // Tightest supported class containing every latency of the instance.
    static LatencyClass of_instance(const Instance& inst);

    std::string describe() const;
};

struct BoundResult {
    double value = 1;
    enum class Method { Analytic, NumericGrid } method = Method::Analytic;
    std::map<std::string, double> params;
};

// gamma = min{g : l*(x) <= g * l(x)}: Affine 2, Poly(p) p+1, MM1 1/(1-rho).
double gamma_of(const LatencyClass& cls);

// omega(L, lambda) = sup_{l, x, x'} (l(x) - lambda l(x')) x' / (x l(x)).
// +inf when the class admits an unbounded ratio (lambda < 1 with constants).
double omega(const LatencyClass& cls, double lambda);

// inf over lambda in [max{1, theta/4}, 1e3] with omega <= 1/theta of
// theta*lambda / (1 - theta*omega); coarse geometric grid plus golden-section.
BoundResult poa_upper_bound(const LatencyClass& cls, double theta);

struct VICertificate {
    bool satisfied = false;
    double social_cost = 0;
    double min_counter_cost = 0;  // min over feasible x' of sum x'_e l_e(x_e)
    double theta = 1;
    PathFlow counter;  // the minimizing all-or-nothing response
};

// SC(x) <= theta * min_{x'} sum_e x'_e l_e(x_e) + 1e-9, the one-way
// unilateral-stability certificate (every theta-UNE flow passes; the converse
// fails).
VICertificate check_variational_inequality(const Instance& inst,
                                           const EdgeFlow& flow, double theta);

// 0.5 * (1 + 1/sqrt(1 - rho_theta)) with rho_theta = max{0, 1-theta(1-rho)};
// reaches exactly 1 once theta >= 1/(1-rho_max).
double pos_upper_bound_mm1(double rho_max, double theta);

// (theta (1 - p theta^{1/p} / (p+1)^{1+1/p}))^{-1} below theta = p+1, else 1.
double pos_upper_bound_poly(int p, double theta);

// Series-parallel bound max{1, 1/(1 - beta_theta)} with beta_theta a numeric
// supremum over 0 <= y <= x <= d; +inf when beta_theta >= 1. Series-parallel
// applicability is the caller's responsibility.
double pos_upper_bound_series_parallel(const LatencyClass& cls, double theta,
                                       double d);

}  // namespace fairflow
