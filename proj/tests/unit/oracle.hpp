#pragma once
// Brute-force reference solvers for small models.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

#include "lnf/milp.hpp"

namespace oracle {

// Enumerates every basic solution of a small LP whose variables are all bounded.
inline std::optional<double> lp_vertex_min(const lnf::Model& m, double tol = 1e-7) {
    const int n = m.num_vars();
    struct Plane {
        Eigen::VectorXd a;
        double b;
    };
    std::vector<Plane> planes;
    for (const auto& r : m.rows) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        for (const auto& t : r.terms) a[t.var] = t.coef;
        planes.push_back({a, r.rhs});
    }
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        a[j] = 1.0;
        planes.push_back({a, m.vars[j].lb});
        planes.push_back({a, m.vars[j].ub});
    }
    const int P = static_cast<int>(planes.size());
    std::optional<double> best;
    std::vector<int> pick(n);
    auto rec = [&](auto&& self, int depth, int start) -> void {
        if (depth == n) {
            Eigen::MatrixXd A(n, n);
            Eigen::VectorXd b(n);
            for (int i = 0; i < n; ++i) {
                A.row(i) = planes[pick[i]].a.transpose();
                b[i] = planes[pick[i]].b;
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (lu.rank() < n) return;
            Eigen::VectorXd x = lu.solve(b);
            std::vector<double> xv(x.data(), x.data() + n);
            if (m.max_violation(xv) > tol) return;
            double v = m.eval_objective(xv);
            if (!best || v < *best) best = v;
            return;
        }
        for (int p = start; p < P; ++p) {
            pick[depth] = p;
            self(self, depth + 1, p + 1);
        }
    };
    if (n == 0) {
        if (m.max_violation({}) <= tol) best = m.obj_const;
        return best;
    }
    rec(rec, 0, 0);
    return best;
}

// Enumerates binary assignments and solves the remaining LP by vertex enumeration.
inline std::optional<double> milp_min(const lnf::Model& m) {
    std::vector<int> bins;
    for (int j = 0; j < m.num_vars(); ++j)
        if (m.vars[j].kind == lnf::VarKind::Binary) bins.push_back(j);
    std::optional<double> best;
    for (unsigned long mask = 0; mask < (1UL << bins.size()); ++mask) {
        lnf::Model f = m;
        for (std::size_t k = 0; k < bins.size(); ++k) {
            double v = (mask >> k) & 1UL ? 1.0 : 0.0;
            f.vars[bins[k]].lb = f.vars[bins[k]].ub = v;
        }
        auto v = lp_vertex_min(f);
        if (v && (!best || *v < *best)) best = v;
    }
    return best;
}

}  // namespace oracle
