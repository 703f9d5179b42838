#include "fairflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fairflow/errors.hpp"
#include "fairflow/paths.hpp"

namespace fairflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Edges of `a` not contained in `b` (as multisets of edge ids).
std::vector<int> edge_difference(const Path& a, const Path& b) {
    std::vector<int> sa = a, sb = b, out;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(out));
    return out;
}

class Minimizer {
  public:
    Minimizer(const Instance& inst, const PotentialSpec& spec,
              const SolverConfig& cfg)
        : inst_(inst),
          spec_(spec),
          cfg_(cfg),
          E_(inst.num_edges()),
          K_(inst.num_commodities()),
          active_(K_),
          com_(K_, std::vector<double>(E_, 0.0)),
          agg_(E_, 0.0),
          cost_(E_, 0.0),
          pole_(E_, kInf) {
        if (static_cast<int>(spec.edge.size()) != E_)
            throw ValidationError("potential spec does not match the instance");
        for (int e = 0; e < E_; ++e) pole_[e] = spec.edge[e].pole();
    }

    SolveResult run() {
        if (inst_.has_mm1()) check_mm1_capacity(inst_);
        initialize();

        SolveResult res;
        for (int it = 1; it <= cfg_.max_iters; ++it) {
            rebuild_loads();
            refresh_costs();

            std::vector<Path> direction(K_);
            double sp_total = 0.0;
            for (int k = 0; k < K_; ++k) {
                PathResult sp = shortest_path(inst_, cost_, k);
                direction[k] = std::move(sp.path);
                sp_total += inst_.commodities()[k].demand_d() * sp.cost;
            }
            double cur_total = 0.0;
            for (int e = 0; e < E_; ++e) cur_total += agg_[e] * cost_[e];
            double gap = cur_total - sp_total;
            double value = spec_.value(agg_);
            if (cfg_.record_trace) res.trace.push_back(value);

            if (gap <= cfg_.tol * std::max(1.0, std::abs(value))) {
                res.iterations = it;
                res.duality_gap = gap;
                res.potential_value = value;
                finalize(res);
                return res;
            }

            take_step(direction, it);
            if (cfg_.refine_active_paths) equalize_active_paths();
        }
        std::ostringstream msg;
        msg << "potential minimization did not reach the gap tolerance within "
            << cfg_.max_iters << " iterations";
        throw ConvergenceError(msg.str());
    }

  private:
    void finalize(SolveResult& res) {
        res.flow = EdgeFlow::zero(inst_);
        res.flow.load = com_;
        res.support = PathFlow::zero(inst_);
        res.support.flow = active_;
    }

    void rebuild_loads() {
        for (int k = 0; k < K_; ++k) {
            std::fill(com_[k].begin(), com_[k].end(), 0.0);
            for (const auto& [path, f] : active_[k])
                for (int e : path) com_[k][e] += f;
        }
        std::fill(agg_.begin(), agg_.end(), 0.0);
        for (int k = 0; k < K_; ++k)
            for (int e = 0; e < E_; ++e) agg_[e] += com_[k][e];
    }

    void refresh_costs() {
        for (int e = 0; e < E_; ++e) cost_[e] = spec_.phi(e, agg_[e]);
    }

    double path_cost(const Path& p) const {
        double c = 0.0;
        for (int e : p) c += cost_[e];
        return c;
    }

    // All-or-nothing start; with M/M/1 edges the demand is spread over
    // masked shortest paths so every load stays strictly below its pole.
    void initialize() {
        for (int k = 0; k < K_; ++k) {
            double d = inst_.commodities()[k].demand_d();
            if (!inst_.has_mm1()) {
                refresh_costs();
                active_[k][shortest_path(inst_, cost_, k).path] = d;
                rebuild_loads();
                continue;
            }
            double remaining = d;
            double fold = 1e-13 * d;
            int budget = 64 * (E_ + 2);
            while (remaining > 0.0 && budget-- > 0) {
                std::vector<char> usable(E_, 1);
                std::vector<double> costs(E_, 0.0);
                for (int e = 0; e < E_; ++e) {
                    double resid = pole_[e] - agg_[e];
                    if (pole_[e] < kInf &&
                        resid <= 1e-9 * std::max(1.0, pole_[e])) {
                        usable[e] = 0;
                        continue;
                    }
                    costs[e] = spec_.phi(e, agg_[e]);
                }
                auto sp = shortest_path_masked(inst_, costs, k, usable);
                if (!sp)
                    throw ValidationError(
                        "demand cannot be routed strictly within the M/M/1 "
                        "capacities");
                double resid_min = kInf;
                for (int e : sp->path)
                    if (pole_[e] < kInf)
                        resid_min = std::min(resid_min, pole_[e] - agg_[e]);
                double amount = std::min(remaining, 0.9 * resid_min);
                if (remaining - amount <= fold && remaining <= 0.95 * resid_min)
                    amount = remaining;
                active_[k][sp->path] += amount;
                for (int e : sp->path) {
                    agg_[e] += amount;
                    com_[k][e] += amount;
                }
                remaining -= amount;
            }
            if (remaining > 0.0)
                throw ValidationError(
                    "could not build a strictly feasible starting flow");
        }
        rebuild_loads();
    }

    void take_step(const std::vector<Path>& direction, int iter) {
        std::vector<double> delta(E_, 0.0);
        for (int e = 0; e < E_; ++e) delta[e] = -agg_[e];
        for (int k = 0; k < K_; ++k) {
            double d = inst_.commodities()[k].demand_d();
            for (int e : direction[k]) delta[e] += d;
        }

        double t_hi = 1.0;
        for (int e = 0; e < E_; ++e) {
            if (delta[e] <= 0.0 || pole_[e] == kInf) continue;
            double guard = 1e-11 * std::max(1.0, pole_[e]);
            double cap = (pole_[e] - guard - agg_[e]) / delta[e];
            t_hi = std::min(t_hi, std::max(cap, 0.0));
        }
        if (t_hi <= 0.0) return;

        double t;
        if (cfg_.step_rule == SolverConfig::StepRule::Harmonic) {
            t = std::min(2.0 / (iter + 2.0), t_hi);
        } else {
            auto slope = [&](double s) {
                double v = 0.0;
                for (int e = 0; e < E_; ++e) {
                    if (delta[e] == 0.0) continue;
                    v += spec_.phi(e, agg_[e] + s * delta[e]) * delta[e];
                }
                return v;
            };
            if (slope(t_hi) <= 0.0) {
                t = t_hi;
            } else {
                double lo = 0.0, hi = t_hi;
                for (int i = 0; i < 60; ++i) {
                    double mid = 0.5 * (lo + hi);
                    (slope(mid) <= 0.0 ? lo : hi) = mid;
                }
                t = 0.5 * (lo + hi);
            }
        }
        if (t <= 0.0) return;

        for (int k = 0; k < K_; ++k) {
            double d = inst_.commodities()[k].demand_d();
            if (t >= 1.0) {
                active_[k].clear();
                active_[k][direction[k]] = d;
                continue;
            }
            for (auto& [path, f] : active_[k]) f *= 1.0 - t;
            active_[k][direction[k]] += t * d;
            drop_dust(k);
        }
        rebuild_loads();
    }

    // Fold negligible path flows into the largest carrier so supports stay
    // exact and short.
    void drop_dust(int k) {
        double d = inst_.commodities()[k].demand_d();
        double tol = 1e-13 * d;
        auto& m = active_[k];
        if (m.size() <= 1) return;
        auto big = m.begin();
        for (auto it = m.begin(); it != m.end(); ++it)
            if (it->second > big->second) big = it;
        for (auto it = m.begin(); it != m.end();) {
            if (it != big && it->second <= tol) {
                big->second += it->second;
                it = m.erase(it);
            } else {
                ++it;
            }
        }
    }

    // Pairwise cost equalization across each commodity's active paths. Moves
    // flow from the costliest to the cheapest active path until their fixed-
    // point costs agree; a full transfer erases the donor outright, which is
    // what keeps supports minimal.
    void equalize_active_paths() {
        for (int k = 0; k < K_; ++k) {
            double d = inst_.commodities()[k].demand_d();
            double fold = 1e-13 * d;
            for (int round = 0; round < 64; ++round) {
                auto& m = active_[k];
                if (m.size() <= 1) break;
                auto hi = m.begin(), lo = m.begin();
                double chi = -kInf, clo = kInf;
                for (auto it = m.begin(); it != m.end(); ++it) {
                    double c = path_cost(it->first);
                    if (c > chi) chi = c, hi = it;
                    if (c < clo) clo = c, lo = it;
                }
                if (chi - clo <= 0.25 * cfg_.tol * std::max(1.0, std::abs(chi)))
                    break;

                std::vector<int> gain = edge_difference(lo->first, hi->first);
                std::vector<int> lose = edge_difference(hi->first, lo->first);
                double cap = hi->second;
                for (int e : gain) {
                    if (pole_[e] == kInf) continue;
                    double guard = 1e-11 * std::max(1.0, pole_[e]);
                    cap = std::min(cap, pole_[e] - guard - agg_[e]);
                }
                if (cap <= 0.0) break;

                auto imbalance = [&](double s) {
                    double a = 0.0, b = 0.0;
                    for (int e : gain) a += spec_.phi(e, agg_[e] + s);
                    for (int e : lose) b += spec_.phi(e, agg_[e] - s);
                    return a - b;
                };
                double t;
                if (imbalance(cap) <= 0.0) {
                    t = cap;
                } else {
                    double a = 0.0, b = cap;
                    for (int i = 0; i < 60; ++i) {
                        double mid = 0.5 * (a + b);
                        (imbalance(mid) <= 0.0 ? a : b) = mid;
                    }
                    t = 0.5 * (a + b);
                }
                if (t <= 0.0) break;

                for (int e : gain) {
                    agg_[e] += t;
                    com_[k][e] += t;
                    cost_[e] = spec_.phi(e, agg_[e]);
                }
                for (int e : lose) {
                    agg_[e] -= t;
                    com_[k][e] -= t;
                    cost_[e] = spec_.phi(e, agg_[e]);
                }
                lo->second += t;
                if (t >= hi->second || hi->second - t <= fold) {
                    double rest = hi->second - t;
                    if (rest > 0.0) {
                        lo->second += rest;
                        for (int e : gain) {
                            agg_[e] += rest;
                            com_[k][e] += rest;
                            cost_[e] = spec_.phi(e, agg_[e]);
                        }
                        for (int e : lose) {
                            agg_[e] -= rest;
                            com_[k][e] -= rest;
                            cost_[e] = spec_.phi(e, agg_[e]);
                        }
                    }
                    m.erase(hi);
                } else {
                    hi->second -= t;
                }
            }
        }
    }

    const Instance& inst_;
    const PotentialSpec& spec_;
    const SolverConfig& cfg_;
    int E_, K_;
    std::vector<std::map<Path, double>> active_;
    std::vector<std::vector<double>> com_;
    std::vector<double> agg_, cost_, pole_;
};

}  // namespace

SolveResult minimize_potential(const Instance& inst, const PotentialSpec& spec,
                               const SolverConfig& config) {
    if (!(config.tol > 0)) throw DomainError("solver tolerance must be positive");
    if (config.max_iters < 1) throw DomainError("max_iters must be positive");
    return Minimizer(inst, spec, config).run();
}

SolveResult solve_nash(const Instance& inst, const SolverConfig& config) {
    return minimize_potential(inst, PotentialSpec::beckmann(inst), config);
}

SolveResult solve_social_optimum(const Instance& inst,
                                 const SolverConfig& config) {
    return minimize_potential(inst, PotentialSpec::marginal(inst), config);
}

PotentialSpec design_modified_potential(const Instance& inst, double theta) {
    if (!(theta >= 1.0)) throw DomainError("theta must be at least 1");

    int max_deg = 0;
    bool has_poly = false;
    for (const auto& e : inst.edges()) {
        if (e.latency.kind() == LatencyKind::MM1) continue;
        has_poly = true;
        max_deg = std::max(max_deg, e.latency.poly_degree());
    }
    double gamma = has_poly ? max_deg + 1.0 : 1.0;
    double d_tot = to_double(inst.total_demand_exact());

    PotentialSpec spec;
    spec.edge.reserve(inst.num_edges());
    for (const auto& e : inst.edges()) {
        if (theta == 1.0) {
            spec.edge.push_back(PotentialFn::latency(e.latency));
            continue;
        }
        if (e.latency.kind() == LatencyKind::MM1) {
            double u = to_double(e.latency.params()[0]);
            double rho = d_tot / u;
            double a = 1.0;
            if (rho < 1.0) {
                double rho_theta = std::max(0.0, 1.0 - theta * (1.0 - rho));
                a = rho_theta / rho;
            }
            spec.edge.push_back(PotentialFn::mm1_design(e.latency, a));
        } else {
            spec.edge.push_back(PotentialFn::band(e.latency, theta, gamma));
        }
    }
    return spec;
}

PotentialSpec bounded_toll_potential(const Instance& inst, double eps) {
    if (!(eps >= 0.0)) throw DomainError("eps must be nonnegative");
    PotentialSpec spec;
    spec.edge.reserve(inst.num_edges());
    for (const auto& e : inst.edges()) {
        if (eps == 0.0)
            spec.edge.push_back(PotentialFn::latency(e.latency));
        else
            spec.edge.push_back(PotentialFn::tolled(e.latency, eps));
    }
    return spec;
}

}  // namespace fairflow
