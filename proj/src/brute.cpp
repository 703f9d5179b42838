#include "fairflow/brute.hpp"

#include <algorithm>
#include <set>

#include "fairflow/errors.hpp"
#include "fairflow/paths.hpp"

namespace fairflow {

namespace {

// Phase-1 simplex with Bland's rule, exact rationals. Decides whether
// sum_j f_j * chi(paths[j]) = b has a nonnegative solution and returns a
// basic one when it does.
class ExactFeasibility {
  public:
    ExactFeasibility(const std::vector<std::vector<Rat>>& columns,
                     const std::vector<Rat>& b)
        : m_(b.size()), n_(columns.size()) {
        tab_.assign(m_, std::vector<Rat>(n_ + m_ + 1, Rat(0)));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = columns[j][i];
            tab_[i][n_ + i] = 1;
            tab_[i].back() = b[i];
            basis_[i] = static_cast<int>(n_ + i);
        }
        obj_.assign(n_ + m_ + 1, Rat(0));
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t i = 0; i < m_; ++i) obj_[j] -= tab_[i][j];
        for (std::size_t i = 0; i < m_; ++i) obj_.back() -= tab_[i].back();
    }

    bool solve(std::vector<Rat>* solution) {
        for (;;) {
            int enter = -1;
            for (std::size_t j = 0; j < n_ + m_; ++j)
                if (obj_[j] < 0) {
                    enter = static_cast<int>(j);
                    break;
                }
            if (enter < 0) break;
            int leave = -1;
            Rat best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (tab_[i][enter] <= 0) continue;
                Rat ratio = tab_[i].back() / tab_[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave]))
                    leave = static_cast<int>(i), best = ratio;
            }
            if (leave < 0)
                throw ValidationError("feasibility program is unbounded");
            pivot(leave, enter);
        }
        if (obj_.back() != 0) return false;
        if (solution) {
            solution->assign(n_, Rat(0));
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_[i] < static_cast<int>(n_))
                    (*solution)[basis_[i]] = tab_[i].back();
        }
        return true;
    }

  private:
    void pivot(int leave, int enter) {
        Rat p = tab_[leave][enter];
        for (auto& v : tab_[leave]) v /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (static_cast<int>(i) == leave || tab_[i][enter] == 0) continue;
            Rat f = tab_[i][enter];
            for (std::size_t j = 0; j < tab_[i].size(); ++j)
                tab_[i][j] -= f * tab_[leave][j];
        }
        if (obj_[enter] != 0) {
            Rat f = obj_[enter];
            for (std::size_t j = 0; j < obj_.size(); ++j)
                obj_[j] -= f * tab_[leave][j];
        }
        basis_[leave] = enter;
    }

    std::size_t m_, n_;
    std::vector<std::vector<Rat>> tab_;
    std::vector<Rat> obj_;
    std::vector<int> basis_;
};

struct CommodityData {
    std::vector<int> rows;            // edges with positive load
    std::vector<Rat> b;               // their loads
    std::vector<Path> paths;          // columns: paths within positive edges
    std::vector<Rat> cost;            // exact cost per column
    std::vector<std::vector<Rat>> chi;
    Rat sp{0};                        // exact shortest cost over all paths
};

CommodityData gather(const Instance& inst, const ExactEdgeFlow& flow,
                     const std::vector<Rat>& costs, int k,
                     std::size_t path_limit) {
    CommodityData d;
    int E = inst.num_edges();
    std::vector<char> positive(E, 0);
    for (int e = 0; e < E; ++e) {
        if (flow.load[k][e] < 0)
            throw ValidationError("negative exact edge load");
        if (flow.load[k][e] > 0) {
            positive[e] = 1;
            d.rows.push_back(e);
            d.b.push_back(flow.load[k][e]);
        }
    }
    if (auto cyc = find_cycle(inst, positive))
        throw ValidationError(
            "flow keeps circulation and has no path decomposition");

    std::vector<Path> all = enumerate_paths(inst, k, path_limit);
    bool first = true;
    for (const auto& p : all) {
        Rat c = path_latency_exact(inst, p, costs);
        if (first || c < d.sp) d.sp = c;
        first = false;
        bool inside = true;
        for (int e : p)
            if (!positive[e]) {
                inside = false;
                break;
            }
        if (!inside) continue;
        d.paths.push_back(p);
        d.cost.push_back(c);
        std::vector<Rat> col(d.rows.size(), Rat(0));
        for (int e : p) {
            auto it = std::lower_bound(d.rows.begin(), d.rows.end(), e);
            col[it - d.rows.begin()] += 1;
        }
        d.chi.push_back(std::move(col));
    }
    if (d.paths.empty())
        throw ValidationError(
            "no source-sink path fits inside the positive edges");
    return d;
}

bool feasible_with(const CommodityData& d, const std::vector<char>& allowed,
                   std::map<Path, Rat>* solution) {
    std::vector<std::vector<Rat>> cols;
    std::vector<int> idx;
    for (std::size_t j = 0; j < d.paths.size(); ++j)
        if (allowed[j]) {
            cols.push_back(d.chi[j]);
            idx.push_back(static_cast<int>(j));
        }
    if (cols.empty()) return d.rows.empty();
    std::vector<Rat> sol;
    if (!ExactFeasibility(cols, d.b).solve(solution ? &sol : nullptr))
        return false;
    if (solution) {
        solution->clear();
        for (std::size_t j = 0; j < idx.size(); ++j)
            if (sol[j] > 0) (*solution)[d.paths[idx[j]]] = sol[j];
    }
    return true;
}

// Smallest absolute cost cutoff whose path set reproduces the loads.
std::map<Path, Rat> solve_une(const CommodityData& d, Rat* theta_out) {
    std::set<Rat> cut_set(d.cost.begin(), d.cost.end());
    std::vector<Rat> cuts(cut_set.begin(), cut_set.end());
    auto ok = [&](const Rat& cut, std::map<Path, Rat>* sol) {
        std::vector<char> allowed(d.paths.size(), 0);
        for (std::size_t j = 0; j < d.paths.size(); ++j)
            allowed[j] = d.cost[j] <= cut;
        return feasible_with(d, allowed, sol);
    };
    std::size_t lo = 0, hi = cuts.size() - 1;
    if (!ok(cuts[hi], nullptr))
        throw ValidationError("flow is not decomposable into its paths");
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (ok(cuts[mid], nullptr))
            hi = mid;
        else
            lo = mid + 1;
    }
    std::map<Path, Rat> sol;
    ok(cuts[lo], &sol);
    if (d.sp > 0) {
        *theta_out = cuts[lo] / d.sp;
    } else if (cuts[lo] == 0) {
        *theta_out = 1;
    } else {
        throw ValidationError(
            "zero shortest cost with positive used cost: ratio unbounded");
    }
    return sol;
}

// Smallest window ratio max/min over used costs; windows are anchored at
// existing cost values.
std::map<Path, Rat> solve_ef(const CommodityData& d, Rat* theta_out) {
    std::set<Rat> dset(d.cost.begin(), d.cost.end());
    std::vector<Rat> costs(dset.begin(), dset.end());
    std::set<Rat> ratios{Rat(1)};
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (costs[i] == 0) continue;
        for (std::size_t j = i; j < costs.size(); ++j)
            ratios.insert(costs[j] / costs[i]);
    }
    std::vector<Rat> cand(ratios.begin(), ratios.end());

    auto ok = [&](const Rat& theta, std::map<Path, Rat>* sol) {
        for (const Rat& lo : costs) {
            Rat hi = lo * theta;
            std::vector<char> allowed(d.paths.size(), 0);
            for (std::size_t j = 0; j < d.paths.size(); ++j)
                allowed[j] = d.cost[j] >= lo && d.cost[j] <= hi;
            if (feasible_with(d, allowed, sol)) return true;
        }
        return false;
    };
    std::size_t lo = 0, hi = cand.size() - 1;
    if (!ok(cand[hi], nullptr))
        throw ValidationError("flow is not decomposable into its paths");
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (ok(cand[mid], nullptr))
            hi = mid;
        else
            lo = mid + 1;
    }
    std::map<Path, Rat> sol;
    ok(cand[lo], &sol);
    *theta_out = cand[lo];
    return sol;
}

}  // namespace

bool exact_decomposition_feasible(const Instance& inst,
                                  const ExactEdgeFlow& flow, int k,
                                  const std::vector<Path>& paths,
                                  std::map<Path, Rat>* solution) {
    int E = inst.num_edges();
    std::vector<int> rows;
    std::vector<Rat> b;
    for (int e = 0; e < E; ++e)
        if (flow.load[k][e] != 0) {
            rows.push_back(e);
            b.push_back(flow.load[k][e]);
            if (flow.load[k][e] < 0)
                throw ValidationError("negative exact edge load");
        }
    std::vector<std::vector<Rat>> cols;
    std::vector<const Path*> kept;
    for (const auto& p : paths) {
        std::vector<Rat> col(rows.size(), Rat(0));
        bool inside = true;
        for (int e : p) {
            auto it = std::lower_bound(rows.begin(), rows.end(), e);
            if (it == rows.end() || *it != e) {
                inside = false;
                break;
            }
            col[it - rows.begin()] += 1;
        }
        if (!inside) continue;
        cols.push_back(std::move(col));
        kept.push_back(&p);
    }
    if (cols.empty()) return rows.empty();
    std::vector<Rat> sol;
    if (!ExactFeasibility(cols, b).solve(solution ? &sol : nullptr))
        return false;
    if (solution) {
        solution->clear();
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (sol[j] > 0) (*solution)[*kept[j]] = sol[j];
    }
    return true;
}

namespace {

// Best rational approximation with bounded denominator via the continued
// fraction of x, keeping the last convergent within tolerance.
std::optional<Rat> snap_value(double x, std::int64_t max_den, double tol) {
    double scale = std::max(1.0, std::abs(x));
    if (std::abs(x) <= tol) return Rat{0};
    if (x < 0) return std::nullopt;
    BigInt p0{0}, q0{1};  // convergents h(-2), h(-1)
    BigInt p1{1}, q1{0};
    double frac = x;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(frac);
        if (fl > 9e18) return std::nullopt;
        BigInt a{static_cast<std::int64_t>(fl)};
        BigInt p2 = a * p1 + p0;
        BigInt q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Rat r{p1, q1};
        if (std::abs(to_double(r) - x) <= tol * scale) return r;
        double rem = frac - fl;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    if (q1 > 0) {
        Rat r{p1, q1};
        if (std::abs(to_double(r) - x) <= tol * scale) return r;
    }
    return std::nullopt;
}

}  // namespace

std::optional<ExactEdgeFlow> snap_flow(const Instance& inst, const EdgeFlow& flow,
                                       std::int64_t max_den, double tol) {
    ExactEdgeFlow out = ExactEdgeFlow::zero(inst);
    for (int k = 0; k < inst.num_commodities(); ++k)
        for (int e = 0; e < inst.num_edges(); ++e) {
            auto r = snap_value(flow.load[k][e], max_den, tol);
            if (!r) return std::nullopt;
            out.load[k][e] = *r;
        }
    // Exact conservation: commodity's demand out of the source, zero balance
    // elsewhere.
    for (int k = 0; k < inst.num_commodities(); ++k) {
        const Commodity& com = inst.commodity(k);
        for (int v = 0; v < inst.num_nodes(); ++v) {
            Rat bal{0};
            for (int e : inst.out_edges()[v]) bal += out.load[k][e];
            for (int e : inst.in_edges()[v]) bal -= out.load[k][e];
            Rat want{0};
            if (v == com.source) want = com.demand;
            else if (v == com.sink) want = -com.demand;
            if (bal != want) return std::nullopt;
        }
    }
    return out;
}

BestDecomposition brute_force_best_decomposition(const Instance& inst,
                                                 const ExactEdgeFlow& flow,
                                                 FairnessObjective objective,
                                                 std::size_t path_limit) {
    std::vector<Rat> costs = edge_costs_exact(inst, flow);
    BestDecomposition out;
    out.flow = ExactPathFlow::zero(inst);
    out.theta = 1;
    for (int k = 0; k < inst.num_commodities(); ++k) {
        CommodityData data = gather(inst, flow, costs, k, path_limit);
        Rat theta;
        std::map<Path, Rat> sol = objective == FairnessObjective::UNE
                                      ? solve_une(data, &theta)
                                      : solve_ef(data, &theta);
        out.flow.flow[k] = std::move(sol);
        out.per_commodity_theta.push_back(theta);
        out.theta = std::max(out.theta, theta);
    }
    return out;
}

}  // namespace fairflow
