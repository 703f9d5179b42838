#include "fairflow/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fairflow/errors.hpp"
#include "fairflow/paths.hpp"

namespace fairflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGrid = 2000;

// Maximum of f over a 2D grid box with one local refinement pass around the
// coarse argmax. `upper_triangle` restricts to y <= x.
template <typename F>
double grid_sup(const F& f, double xlo, double xhi, double ylo, double yhi,
                bool upper_triangle) {
    double best = -kInf;
    double bx = xlo, by = ylo;
    auto scan = [&](double x0, double x1, double y0, double y1, int n) {
        for (int i = 0; i <= n; ++i) {
            double x = x0 + (x1 - x0) * i / n;
            for (int j = 0; j <= n; ++j) {
                double y = y0 + (y1 - y0) * j / n;
                if (upper_triangle && y > x) break;
                double v = f(x, y);
                if (v > best) best = v, bx = x, by = y;
            }
        }
    };
    scan(xlo, xhi, ylo, yhi, kGrid);
    double hx = (xhi - xlo) / kGrid, hy = (yhi - ylo) / kGrid;
    scan(std::max(xlo, bx - hx), std::min(xhi, bx + hx),
         std::max(ylo, by - hy), std::min(yhi, by + hy), 200);
    return best;
}

double omega_poly(int degree, double lambda) {
    if (lambda < 1.0) return kInf;  // constants make the ratio unbounded
    double best = 0.0;
    for (int j = 1; j <= degree; ++j) {
        double v = (double(j) / (j + 1)) * std::pow(lambda * (j + 1), -1.0 / j);
        best = std::max(best, v);
    }
    return best;
}

double omega_mm1(double rho, double lambda) {
    if (lambda < 1.0) return kInf;  // ratio blows up as x -> 0
    auto g = [](double t) { return 1.0 / (1.0 - t); };
    auto f = [&](double t, double tp) {
        if (t <= 0.0) return -kInf;
        return tp * (g(t) - lambda * g(tp)) / (t * g(t));
    };
    double eps = rho / kGrid;
    return std::max(0.0, grid_sup(f, eps, rho, 0.0, rho, false));
}

}  // namespace

LatencyClass LatencyClass::affine() { return LatencyClass{Family::Affine, 1, 0.5}; }

LatencyClass LatencyClass::poly(int degree) {
    if (degree < 0) throw DomainError("polynomial class needs degree >= 0");
    return LatencyClass{Family::Poly, degree, 0.5};
}

LatencyClass LatencyClass::mm1(double rho_max) {
    if (!(rho_max > 0.0) || !(rho_max < 1.0))
        throw DomainError("mm1 class needs rho_max in (0, 1)");
    return LatencyClass{Family::MM1, 1, rho_max};
}

LatencyClass LatencyClass::of_instance(const Instance& inst) {
    bool any_mm1 = false, any_other = false;
    int max_deg = 0;
    double u_min = kInf;
    for (const auto& e : inst.edges()) {
        if (e.latency.kind() == LatencyKind::MM1) {
            any_mm1 = true;
            u_min = std::min(u_min, to_double(e.latency.params()[0]));
        } else {
            any_other = true;
            max_deg = std::max(max_deg, e.latency.poly_degree());
        }
    }
    if (any_mm1) {
        if (any_other)
            throw CapabilityError(
                "no single supported class covers M/M/1 mixed with other "
                "latency kinds");
        double rho = inst.total_demand() / u_min;
        if (!(rho < 1.0))
            throw DomainError("total demand reaches the smallest capacity");
        return mm1(rho);
    }
    if (max_deg <= 1) return affine();
    return poly(max_deg);
}

std::string LatencyClass::describe() const {
    std::ostringstream s;
    switch (family) {
        case Family::Affine:
            s << "affine";
            break;
        case Family::Poly:
            s << "poly:" << degree;
            break;
        case Family::MM1:
            s << "mm1:" << rho_max;
            break;
    }
    return s.str();
}

double gamma_of(const LatencyClass& cls) {
    switch (cls.family) {
        case LatencyClass::Family::Affine:
            return 2.0;
        case LatencyClass::Family::Poly:
            return cls.degree + 1.0;
        case LatencyClass::Family::MM1:
            return 1.0 / (1.0 - cls.rho_max);
    }
    throw CapabilityError("unknown latency class");
}

double omega(const LatencyClass& cls, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("omega needs lambda > 0");
    switch (cls.family) {
        case LatencyClass::Family::Affine:
            return omega_poly(1, lambda);
        case LatencyClass::Family::Poly:
            return omega_poly(cls.degree, lambda);
        case LatencyClass::Family::MM1:
            return omega_mm1(cls.rho_max, lambda);
    }
    throw CapabilityError("unknown latency class");
}

BoundResult poa_upper_bound(const LatencyClass& cls, double theta) {
    if (!(theta >= 1.0)) throw DomainError("theta must be at least 1");
    double lo = std::max(1.0, theta / 4.0), hi = 1e3;

    auto value_at = [&](double lambda) {
        double w = omega(cls, lambda);
        double denom = 1.0 - theta * w;
        if (!(denom > 0.0)) return kInf;
        return theta * lambda / denom;
    };

    const int coarse = 256;
    int best_i = -1;
    double best = kInf;
    for (int i = 0; i <= coarse; ++i) {
        double lambda = lo * std::pow(hi / lo, double(i) / coarse);
        double v = value_at(lambda);
        if (v < best) best = v, best_i = i;
    }
    BoundResult res;
    res.method = cls.family == LatencyClass::Family::MM1
                     ? BoundResult::Method::NumericGrid
                     : BoundResult::Method::Analytic;
    if (best_i < 0) {
        res.value = kInf;
        return res;
    }
    double a = lo * std::pow(hi / lo, double(std::max(0, best_i - 1)) / coarse);
    double b = lo * std::pow(hi / lo, double(std::min(coarse, best_i + 1)) / coarse);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = value_at(x1), f2 = value_at(x2);
    for (int i = 0; i < 120 && b - a > 1e-10 * std::max(1.0, b); ++i) {
        if (f1 <= f2) {
            b = x2, x2 = x1, f2 = f1;
            x1 = b - phi * (b - a);
            f1 = value_at(x1);
        } else {
            a = x1, x1 = x2, f1 = f2;
            x2 = a + phi * (b - a);
            f2 = value_at(x2);
        }
    }
    double lambda = 0.5 * (a + b);
    res.value = std::min(best, value_at(lambda));
    res.params["lambda"] = lambda;
    res.params["omega"] = omega(cls, lambda);
    return res;
}

VICertificate check_variational_inequality(const Instance& inst,
                                           const EdgeFlow& flow,
                                           double theta) {
    if (!(theta >= 1.0)) throw DomainError("theta must be at least 1");
    VICertificate cert;
    cert.theta = theta;
    cert.social_cost = social_cost(inst, flow);
    std::vector<double> costs = edge_costs(inst, flow);
    cert.counter = PathFlow::zero(inst);
    cert.min_counter_cost = 0.0;
    for (int k = 0; k < inst.num_commodities(); ++k) {
        PathResult sp = shortest_path(inst, costs, k);
        double d = inst.commodities()[k].demand_d();
        cert.min_counter_cost += d * sp.cost;
        cert.counter.flow[k][sp.path] = d;
    }
    cert.satisfied = cert.social_cost <= theta * cert.min_counter_cost + 1e-9;
    return cert;
}

double pos_upper_bound_mm1(double rho_max, double theta) {
    if (!(rho_max > 0.0) || !(rho_max < 1.0))
        throw DomainError("rho_max must lie in (0, 1)");
    if (!(theta >= 1.0)) throw DomainError("theta must be at least 1");
    double rho_theta = std::max(0.0, 1.0 - theta * (1.0 - rho_max));
    return 0.5 * (1.0 + 1.0 / std::sqrt(1.0 - rho_theta));
}

double pos_upper_bound_poly(int p, double theta) {
    if (p < 1) throw DomainError("degree must be at least 1");
    if (!(theta >= 1.0)) throw DomainError("theta must be at least 1");
    if (theta >= p + 1.0) return 1.0;
    double denom =
        theta * (1.0 - p * std::pow(theta, 1.0 / p) /
                           std::pow(p + 1.0, 1.0 + 1.0 / p));
    return 1.0 / denom;
}

double pos_upper_bound_series_parallel(const LatencyClass& cls, double theta,
                                       double d) {
    if (!(theta >= 1.0)) throw DomainError("theta must be at least 1");
    if (!(d > 0.0)) throw DomainError("demand must be positive");

    double beta = 0.0;
    auto accumulate = [&](auto&& ell) {
        auto f = [&](double x, double y) {
            if (x <= 0.0) return -kInf;
            double lx = ell(x);
            if (lx <= 0.0) return -kInf;
            return (y * (lx - ell(y)) - (theta - 1.0) * (x - y) * lx) /
                   (x * lx);
        };
        double eps = d / kGrid;
        beta = std::max(beta, grid_sup(f, eps, d, 0.0, d, true));
    };

    switch (cls.family) {
        case LatencyClass::Family::Affine:
            accumulate([](double t) { return t; });
            break;
        case LatencyClass::Family::Poly:
            for (int j = 1; j <= cls.degree; ++j)
                accumulate([j](double t) { return std::pow(t, j); });
            break;
        case LatencyClass::Family::MM1: {
            double r = cls.rho_max;
            auto ell = [](double t) { return 1.0 / (1.0 - t); };
            auto f = [&](double x, double y) {
                if (x <= 0.0) return -kInf;
                double lx = ell(x);
                return (y * (lx - ell(y)) - (theta - 1.0) * (x - y) * lx) /
                       (x * lx);
            };
            double eps = r / kGrid;
            beta = std::max(beta, grid_sup(f, eps, r, 0.0, r, true));
            break;
        }
    }
    if (beta >= 1.0) return kInf;
    return std::max(1.0, 1.0 / (1.0 - beta));
}

}  // namespace fairflow
