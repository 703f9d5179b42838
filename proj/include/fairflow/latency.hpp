#pragma once

#include <string>
#include <vector>

#include "fairflow/errors.hpp"
#include "fairflow/rational.hpp"

namespace fairflow {

enum class LatencyKind { Constant, Affine, Polynomial, MM1 };

std::string to_string(LatencyKind k);

// Edge latency l(x): nonnegative, nondecreasing, differentiable, with x*l(x)
// convex. The supported families guarantee this by construction (nonnegative
// coefficients, positive capacity). Parameters are kept as exact rationals;
// doubles are cached for the numeric solver path.
class LatencyFn {
  public:
    static LatencyFn constant(Rat c);
    static LatencyFn affine(Rat a, Rat b);
    static LatencyFn polynomial(std::vector<Rat> coeffs);
    static LatencyFn mm1(Rat capacity);

    LatencyKind kind() const { return kind_; }
    const std::vector<Rat>& params() const { return params_; }

    double eval(double x) const;
    double deriv(double x) const;
    // marginal latency l*(x) = l(x) + x*l'(x)
    double marginal(double x) const;
    // integral of l over [0, x]
    double integral(double x) const;

    Rat eval_exact(const Rat& x) const;
    Rat marginal_exact(const Rat& x) const;

    // Highest power with a nonzero coefficient; MM1 has no polynomial degree.
    int poly_degree() const;

    // Pole location for MM1 (+inf otherwise); used by line-search caps.
    double pole() const;

    bool operator==(const LatencyFn& o) const {
        return kind_ == o.kind_ && params_ == o.params_;
    }

  private:
    LatencyFn(LatencyKind k, std::vector<Rat> p);
    void check_mm1_domain(double x) const;

    LatencyKind kind_;
    std::vector<Rat> params_;
    std::vector<double> dparams_;
};

}  // namespace fairflow
