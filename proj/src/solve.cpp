#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "lnf/milp.hpp"
#include "simplex.hpp"

namespace lnf {

using detail::Simplex;

LpResult lp_solve(const Model& m, const LpOptions& opt) {
    Simplex s(m, opt);
    LpResult res;
    res.status = s.solve();
    res.iterations = s.iterations();
    if (res.status == LpStatus::Optimal) {
        res.value = s.objective();
        res.x = s.primal();
    }
    return res;
}

namespace {

struct Node {
    double bound;
    long id;
    std::vector<std::pair<int, double>> fix;
    std::shared_ptr<const Simplex::Basis> basis;
    int var = -1;       // branched variable, -1 at the root
    double frac = 0.0;  // distance the branch moved it
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;
    }
};

int most_fractional(const std::vector<int>& ints, const std::vector<double>& x, double tol) {
    int best = -1;
    double best_f = tol;
    for (int j : ints) {
        double f = x[j] - std::floor(x[j]);
        double dist = std::min(f, 1.0 - f);
        if (dist > best_f) {
            best_f = dist;
            best = j;
        }
    }
    return best;
}

// Per-unit objective change observed on each branch direction.
class Pseudocosts {
public:
    explicit Pseudocosts(int n) : sum_(2 * n, 0.0), cnt_(2 * n, 0) {}

    void record(int j, bool up, double frac, double change) {
        if (j < 0 || frac <= 1e-9) return;
        double c = std::max(change, 0.0) / frac;
        sum_[2 * j + up] += c;
        ++cnt_[2 * j + up];
        all_[up] += c;
        ++all_cnt_[up];
    }

    // Product score; most fractional until any estimate exists.
    int select(const std::vector<int>& ints, const std::vector<double>& x, double tol) const {
        if (all_cnt_[0] + all_cnt_[1] == 0) return most_fractional(ints, x, tol);
        int best = -1;
        double best_s = -1.0;
        for (int j : ints) {
            double f = x[j] - std::floor(x[j]);
            if (std::min(f, 1.0 - f) <= tol) continue;
            double s = std::max(f * cost(j, false), 1e-6) * std::max((1.0 - f) * cost(j, true), 1e-6);
            if (s > best_s) {
                best_s = s;
                best = j;
            }
        }
        return best;
    }

private:
    double cost(int j, bool up) const {
        if (cnt_[2 * j + up]) return sum_[2 * j + up] / cnt_[2 * j + up];
        return all_cnt_[up] ? all_[up] / all_cnt_[up] : 1.0;
    }

    std::vector<double> sum_;
    std::vector<int> cnt_;
    double all_[2] = {0.0, 0.0};
    int all_cnt_[2] = {0, 0};
};

}  // namespace

SolveResult bb_solve(const Model& m, const BbOptions& opt) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

    SolveResult res;
    std::vector<int> ints;
    for (int j = 0; j < m.num_vars(); ++j)
        if (m.vars[j].kind == VarKind::Binary) ints.push_back(j);

    LpOptions lpo;
    if (std::isfinite(opt.time_limit))
        lpo.deadline = t0 + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(opt.time_limit));
    Simplex lp(m, lpo);
    auto reset_bounds = [&] {
        for (int j : ints) lp.set_bounds(j, m.vars[j].lb, m.vars[j].ub);
    };
    auto accept = [&](double val, std::vector<double> x) {
        if (res.has_incumbent && val >= res.incumbent) return false;
        for (int j : ints) x[j] = std::round(x[j]);
        res.has_incumbent = true;
        res.incumbent = val;
        res.x = std::move(x);
        return true;
    };
    auto prunable = [&](double bound) {
        return res.has_incumbent && bound >= res.incumbent - std::max(1e-9, opt.gap_tol * std::fabs(res.incumbent));
    };

    LpStatus st = lp.solve();
    res.nodes = 1;
    if (st == LpStatus::Unbounded) throw ModelError("LP relaxation is unbounded");
    if (st == LpStatus::IterLimit) {
        res.status = SolveStatus::TimeLimit;
        res.seconds = elapsed();
        res.lower_bound = -kInf;
        return res;
    }
    if (st != LpStatus::Optimal) {
        res.status = SolveStatus::Infeasible;
        res.seconds = elapsed();
        return res;
    }
    res.root_lp = lp.objective();
    std::vector<double> x = lp.primal();
    auto root_basis = std::make_shared<const Simplex::Basis>(lp.basis());

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    Pseudocosts pc(m.num_vars());
    long next_id = 0;
    if (most_fractional(ints, x, opt.int_tol) < 0) {
        accept(res.root_lp, x);
    } else {
        for (int j : ints) {
            double v = std::round(x[j]);
            lp.set_bounds(j, v, v);
        }
        if (lp.solve() == LpStatus::Optimal) {
            res.rounding_found = accept(lp.objective(), lp.primal());
        }
        reset_bounds();
        open.push({res.root_lp, next_id++, {}, root_basis});
    }
    res.events.push_back({0, elapsed(), res.root_lp, res.incumbent});

    auto global_bound = [&] {
        if (open.empty()) return res.has_incumbent ? res.incumbent : kInf;
        return res.has_incumbent ? std::min(open.top().bound, res.incumbent) : open.top().bound;
    };

    bool first = true;
    SolveStatus stop = SolveStatus::Optimal;
    bool stopped = false;
    while (!open.empty()) {
        if (res.has_incumbent && relative_gap(res.incumbent, global_bound()) <= opt.gap_tol) {
            stopped = true;
            stop = SolveStatus::GapLimit;
            break;
        }
        if (elapsed() > opt.time_limit) {
            stopped = true;
            stop = SolveStatus::TimeLimit;
            break;
        }
        if (res.nodes >= opt.node_limit) {
            stopped = true;
            stop = SolveStatus::NodeLimit;
            break;
        }
        Node node = open.top();
        open.pop();
        if (prunable(node.bound)) continue;

        double val;
        std::shared_ptr<const Simplex::Basis> basis;
        if (first) {
            // root was solved already
            first = false;
            val = res.root_lp;
            basis = root_basis;
        } else {
            reset_bounds();
            for (auto [j, v] : node.fix) lp.set_bounds(j, v, v);
            lp.set_basis(*node.basis);
            ++res.nodes;
            st = lp.solve();
            if (st == LpStatus::IterLimit) {
                open.push(std::move(node));
                stopped = true;
                stop = SolveStatus::TimeLimit;
                break;
            }
            if (st != LpStatus::Optimal) continue;
            val = lp.objective();
            x = lp.primal();
            basis = std::make_shared<const Simplex::Basis>(lp.basis());
            pc.record(node.var, node.fix.back().second > 0.5, node.frac, val - node.bound);
        }
        if (prunable(val)) continue;

        int j = pc.select(ints, x, opt.int_tol);
        if (j < 0) {
            if (accept(val, x)) res.events.push_back({res.nodes, elapsed(), global_bound(), res.incumbent});
            continue;
        }
        const double f = x[j] - std::floor(x[j]);
        Node down{val, next_id++, node.fix, basis, j, f};
        down.fix.emplace_back(j, 0.0);
        Node up{val, next_id++, std::move(node.fix), basis, j, 1.0 - f};
        up.fix.emplace_back(j, 1.0);
        open.push(std::move(down));
        open.push(std::move(up));
        if (res.nodes % 100 == 0) res.events.push_back({res.nodes, elapsed(), global_bound(), res.incumbent});
    }

    res.seconds = elapsed();
    res.lower_bound = global_bound();
    if (!res.has_incumbent) {
        res.status = stopped ? stop : SolveStatus::Infeasible;
        res.events.push_back({res.nodes, res.seconds, res.lower_bound, res.incumbent});
        return res;
    }
    res.abs_gap = relative_gap(res.incumbent, res.lower_bound);
    res.root_gap = relative_gap(res.incumbent, res.root_lp);
    if (!stopped || res.abs_gap <= 1e-6)
        res.status = SolveStatus::Optimal;
    else
        res.status = stop;
    res.events.push_back({res.nodes, res.seconds, res.lower_bound, res.incumbent});
    return res;
}

}  // namespace lnf
