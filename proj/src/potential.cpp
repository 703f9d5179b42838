#include "fairflow/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairflow/errors.hpp"

namespace fairflow {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_step(const F& f, double a, double b, double fa, double fm,
                     double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b) {
    if (!(b > a)) return 0.0;
    double fa = f(a);
    double m = 0.5 * (a + b);
    double fm = f(m);
    double fb = f(b);
    double whole = simpson(fa, fm, fb, b - a);
    double tol = 1e-12 * std::max(1.0, std::abs(whole));
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

PotentialFn PotentialFn::latency(LatencyFn base) {
    return PotentialFn(Form::Latency, std::move(base));
}

PotentialFn PotentialFn::marginal(LatencyFn base) {
    return PotentialFn(Form::Marginal, std::move(base));
}

PotentialFn PotentialFn::mm1_design(LatencyFn base, double a) {
    if (base.kind() != LatencyKind::MM1)
        throw DomainError("mm1_design requires an M/M/1 latency");
    if (!(a >= 0.0) || !(a <= 1.0))
        throw DomainError("mm1_design scale must lie in [0, 1]");
    PotentialFn p(Form::MM1Design, std::move(base));
    p.a_ = a;
    return p;
}

PotentialFn PotentialFn::band(LatencyFn base, double theta, double gamma) {
    if (!(theta >= 1.0)) throw DomainError("band requires theta >= 1");
    if (!(gamma >= 1.0)) throw DomainError("band requires gamma >= 1");
    PotentialFn p(Form::Band, std::move(base));
    p.theta_ = theta;
    p.gamma_ = gamma;
    return p;
}

PotentialFn PotentialFn::tolled(LatencyFn base, double eps) {
    if (!(eps >= 0.0)) throw DomainError("tolled requires eps >= 0");
    PotentialFn p(Form::Tolled, std::move(base));
    p.eps_ = eps;
    return p;
}

double PotentialFn::phi(double x) const {
    switch (form_) {
        case Form::Latency:
            return base_.eval(x);
        case Form::Marginal:
            return base_.marginal(x);
        case Form::MM1Design: {
            double cap = to_double(base_.params()[0]);
            double denom = cap - a_ * x;
            if (!(denom > 0.0))
                throw DomainError("design potential evaluated at or beyond its pole");
            return 1.0 / denom;
        }
        case Form::Band: {
            double l = base_.eval(x);
            double m = base_.marginal(x);
            return std::min(l, std::max(l / theta_, m / gamma_));
        }
        case Form::Tolled: {
            double l = base_.eval(x);
            double toll = x * base_.deriv(x);
            return l + std::min(toll, eps_ * l);
        }
    }
    throw CapabilityError("unknown potential form");
}

double PotentialFn::integral(double x) const {
    switch (form_) {
        case Form::Latency:
            return base_.integral(x);
        case Form::Marginal:
            return x <= 0.0 ? 0.0 : x * base_.eval(x);
        case Form::MM1Design: {
            double cap = to_double(base_.params()[0]);
            if (a_ == 0.0) return x / cap;
            double denom = cap - a_ * x;
            if (!(denom > 0.0))
                throw DomainError("design potential evaluated at or beyond its pole");
            return std::log(cap / denom) / a_;
        }
        case Form::Band:
        case Form::Tolled:
            return integrate([this](double t) { return phi(t); }, 0.0, x);
    }
    throw CapabilityError("unknown potential form");
}

double PotentialFn::pole() const {
    double p = base_.pole();
    if (form_ == Form::MM1Design && a_ > 0.0)
        p = std::min(p, to_double(base_.params()[0]) / a_);
    return p;
}

PotentialSpec PotentialSpec::beckmann(const Instance& inst) {
    PotentialSpec spec;
    spec.edge.reserve(inst.num_edges());
    for (const auto& e : inst.edges())
        spec.edge.push_back(PotentialFn::latency(e.latency));
    return spec;
}

PotentialSpec PotentialSpec::marginal(const Instance& inst) {
    PotentialSpec spec;
    spec.edge.reserve(inst.num_edges());
    for (const auto& e : inst.edges())
        spec.edge.push_back(PotentialFn::marginal(e.latency));
    return spec;
}

double PotentialSpec::value(const std::vector<double>& aggregate_loads) const {
    double total = 0.0;
    for (std::size_t e = 0; e < edge.size(); ++e)
        total += edge[e].integral(aggregate_loads[e]);
    return total;
}

}  // namespace fairflow
