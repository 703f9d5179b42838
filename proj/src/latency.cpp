#include "fairflow/latency.hpp"

#include <algorithm>
#include <cmath>

namespace fairflow {

std::string to_string(LatencyKind k) {
    switch (k) {
        case LatencyKind::Constant: return "constant";
        case LatencyKind::Affine: return "affine";
        case LatencyKind::Polynomial: return "polynomial";
        case LatencyKind::MM1: return "mm1";
    }
    return "?";
}

LatencyFn::LatencyFn(LatencyKind k, std::vector<Rat> p) : kind_(k), params_(std::move(p)) {
    dparams_.reserve(params_.size());
    for (const auto& r : params_) dparams_.push_back(to_double(r));
}

LatencyFn LatencyFn::constant(Rat c) {
    if (c < 0) throw DomainError("constant latency must be nonnegative");
    return LatencyFn(LatencyKind::Constant, {std::move(c)});
}

LatencyFn LatencyFn::affine(Rat a, Rat b) {
    if (a < 0 || b < 0) throw DomainError("affine latency needs a, b >= 0");
    return LatencyFn(LatencyKind::Affine, {std::move(a), std::move(b)});
}

LatencyFn LatencyFn::polynomial(std::vector<Rat> coeffs) {
    if (coeffs.empty()) throw DomainError("polynomial latency needs at least one coefficient");
    for (const auto& c : coeffs)
        if (c < 0) throw DomainError("polynomial latency needs nonnegative coefficients");
    return LatencyFn(LatencyKind::Polynomial, std::move(coeffs));
}

LatencyFn LatencyFn::mm1(Rat capacity) {
    if (capacity <= 0) throw DomainError("mm1 latency needs capacity > 0");
    return LatencyFn(LatencyKind::MM1, {std::move(capacity)});
}

void LatencyFn::check_mm1_domain(double x) const {
    const double u = dparams_[0];
    const double guard = 1e-12 * std::max(1.0, std::abs(u));
    if (x > u - guard)
        throw DomainError("mm1 latency evaluated at load " + std::to_string(x) +
                          " at or beyond capacity " + std::to_string(u));
}

double LatencyFn::eval(double x) const {
    switch (kind_) {
        case LatencyKind::Constant: return dparams_[0];
        case LatencyKind::Affine: return dparams_[0] * x + dparams_[1];
        case LatencyKind::Polynomial: {
            double acc = 0.0;
            for (size_t i = dparams_.size(); i-- > 0;) acc = acc * x + dparams_[i];
            return acc;
        }
        case LatencyKind::MM1: {
            check_mm1_domain(x);
            return 1.0 / (dparams_[0] - x);
        }
    }
    return 0.0;
}

double LatencyFn::deriv(double x) const {
    switch (kind_) {
        case LatencyKind::Constant: return 0.0;
        case LatencyKind::Affine: return dparams_[0];
        case LatencyKind::Polynomial: {
            double acc = 0.0;
            for (size_t i = dparams_.size(); i-- > 1;)
                acc = acc * x + static_cast<double>(i) * dparams_[i];
            return acc;
        }
        case LatencyKind::MM1: {
            check_mm1_domain(x);
            const double d = dparams_[0] - x;
            return 1.0 / (d * d);
        }
    }
    return 0.0;
}

double LatencyFn::marginal(double x) const { return eval(x) + x * deriv(x); }

double LatencyFn::integral(double x) const {
    switch (kind_) {
        case LatencyKind::Constant: return dparams_[0] * x;
        case LatencyKind::Affine: return 0.5 * dparams_[0] * x * x + dparams_[1] * x;
        case LatencyKind::Polynomial: {
            double acc = 0.0;
            for (size_t i = dparams_.size(); i-- > 0;)
                acc = acc * x + dparams_[i] / static_cast<double>(i + 1);
            return acc * x;
        }
        case LatencyKind::MM1: {
            check_mm1_domain(x);
            return std::log(dparams_[0] / (dparams_[0] - x));
        }
    }
    return 0.0;
}

Rat LatencyFn::eval_exact(const Rat& x) const {
    switch (kind_) {
        case LatencyKind::Constant: return params_[0];
        case LatencyKind::Affine: return params_[0] * x + params_[1];
        case LatencyKind::Polynomial: {
            Rat acc(0);
            for (size_t i = params_.size(); i-- > 0;) acc = acc * x + params_[i];
            return acc;
        }
        case LatencyKind::MM1: {
            if (x >= params_[0]) throw DomainError("mm1 latency evaluated at or beyond capacity");
            return Rat(1) / (params_[0] - x);
        }
    }
    return Rat(0);
}

Rat LatencyFn::marginal_exact(const Rat& x) const {
    switch (kind_) {
        case LatencyKind::Constant: return params_[0];
        case LatencyKind::Affine: return 2 * params_[0] * x + params_[1];
        case LatencyKind::Polynomial: {
            Rat acc(0);
            for (size_t i = params_.size(); i-- > 0;)
                acc = acc * x + Rat(i + 1) * params_[i];
            return acc;
        }
        case LatencyKind::MM1: {
            if (x >= params_[0]) throw DomainError("mm1 latency evaluated at or beyond capacity");
            const Rat d = params_[0] - x;
            return params_[0] / (d * d);
        }
    }
    return Rat(0);
}

int LatencyFn::poly_degree() const {
    switch (kind_) {
        case LatencyKind::Constant: return 0;
        case LatencyKind::Affine: return params_[0] > 0 ? 1 : 0;
        case LatencyKind::Polynomial: {
            for (size_t i = params_.size(); i-- > 0;)
                if (params_[i] != 0) return static_cast<int>(i);
            return 0;
        }
        case LatencyKind::MM1:
            throw CapabilityError("mm1 latency has no polynomial degree");
    }
    return 0;
}

double LatencyFn::pole() const {
    if (kind_ == LatencyKind::MM1) return dparams_[0];
    return std::numeric_limits<double>::infinity();
}

}  // namespace fairflow
