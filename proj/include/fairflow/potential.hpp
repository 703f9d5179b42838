#pragma once

#include <vector>

#include "fairflow/instance.hpp"

namespace fairflow {

// Per-edge integrand phi of a convex separable potential sum_e int_0^{x_e}
// phi_e. All forms are nonnegative and nondecreasing, so the potential is
// convex and the gradient at load x is just phi(x).
class PotentialFn {
  public:
    enum class Form {
        Latency,    // phi = l          (Wardrop / Beckmann)
        Marginal,   // phi = l*         (social optimum)
        MM1Design,  // phi = 1/(u - a x), 0 <= a <= 1
        Band,       // phi = min{ l, max{ l/theta, l*/gamma } }
        Tolled,     // phi = l + min{ x l', eps l }
    };

    static PotentialFn latency(LatencyFn base);
    static PotentialFn marginal(LatencyFn base);
    static PotentialFn mm1_design(LatencyFn base, double a);
    static PotentialFn band(LatencyFn base, double theta, double gamma);
    static PotentialFn tolled(LatencyFn base, double eps);

    Form form() const { return form_; }
    const LatencyFn& base() const { return base_; }
    double design_a() const { return a_; }

    double phi(double x) const;
    // int_0^x phi; closed form where one exists, adaptive Simpson otherwise
    double integral(double x) const;
    // largest admissible load (pole of phi), +inf when none
    double pole() const;

  private:
    PotentialFn(Form f, LatencyFn base) : form_(f), base_(std::move(base)) {}

    Form form_;
    LatencyFn base_;
    double a_ = 0;      // MM1Design
    double theta_ = 1;  // Band
    double gamma_ = 1;  // Band
    double eps_ = 0;    // Tolled
};

struct PotentialSpec {
    std::vector<PotentialFn> edge;

    static PotentialSpec beckmann(const Instance& inst);
    static PotentialSpec marginal(const Instance& inst);

    double phi(int e, double x) const { return edge[e].phi(x); }
    double value(const std::vector<double>& aggregate_loads) const;
};

}  // namespace fairflow
