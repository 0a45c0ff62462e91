#include <cmath>

#include "lnf/dynamics.hpp"

namespace lnf {

namespace {

std::string idx(const std::string& base, int k, int d) { return base + "_" + std::to_string(k) + "_" + std::to_string(d); }

// rows lb*y <= v <= ub*y, written as two rows per component
void gated_bounds(Model& m, const std::string& name, const std::vector<int>& v, int y, const Eigen::VectorXd& lb,
                  const Eigen::VectorXd& ub) {
    for (std::size_t d = 0; d < v.size(); ++d) {
        m.add_row(name + "_lo_" + std::to_string(d), {{v[d], 1.0}, {y, -lb[d]}}, Sense::Ge, 0.0);
        m.add_row(name + "_up_" + std::to_string(d), {{v[d], 1.0}, {y, -ub[d]}}, Sense::Le, 0.0);
    }
}

// A s + B a (+ extra terms) as rows, one per state component
std::vector<std::vector<Term>> affine(const MinTimeProblem& p, const std::vector<int>& s, const std::vector<int>& a) {
    std::vector<std::vector<Term>> rows(p.A.rows());
    for (long d = 0; d < p.A.rows(); ++d) {
        for (long c = 0; c < p.A.cols(); ++c) rows[d].push_back({s[c], p.A(d, c)});
        for (long c = 0; c < p.B.cols(); ++c) rows[d].push_back({a[c], p.B(d, c)});
    }
    return rows;
}

std::vector<int> add_free(Model& m, const std::string& base, int k, long n) {
    std::vector<int> v;
    for (long d = 0; d < n; ++d) v.push_back(m.add_continuous(idx(base, k, static_cast<int>(d)), -kInf, kInf));
    return v;
}

struct EdgeVars {
    std::vector<int> y, yp;
};

// binaries, objective 1 + sum_{k <= K-2} y_k, and the conservation rows shared by GCS and its projection
EdgeVars add_edge_part(Model& m, int K) {
    EdgeVars e;
    for (int k = 0; k < K; ++k) e.y.push_back(m.add_binary("y_" + std::to_string(k)));
    for (int k = 0; k < K; ++k) e.yp.push_back(m.add_binary("yp_" + std::to_string(k)));
    m.obj_const = 1.0;
    for (int k = 0; k + 1 < K; ++k) m.set_obj(e.y[k], 1.0);
    m.add_row("init", {{e.y[0], 1.0}, {e.yp[0], 1.0}}, Sense::Eq, 1.0);
    m.add_row("term", {{e.y[K - 1], 1.0}}, Sense::Eq, 0.0);
    for (int k = 0; k + 1 < K; ++k)
        m.add_row("flow_" + std::to_string(k), {{e.y[k + 1], 1.0}, {e.yp[k + 1], 1.0}, {e.y[k], -1.0}}, Sense::Eq, 0.0);
    return e;
}

struct StateVars {
    std::vector<std::vector<int>> s, a;
};

// state and input variables with the baseline rows; gate(k) is the binary bounding step k
template <class Gate>
StateVars add_state_part(Model& m, const MinTimeProblem& p, Gate gate) {
    const int K = p.K;
    const long n = p.A.rows(), u = p.B.cols();
    StateVars v;
    for (int k = 0; k <= K; ++k) v.s.push_back(add_free(m, "s", k, n));
    for (int k = 0; k < K; ++k) v.a.push_back(add_free(m, "a", k, u));
    for (long d = 0; d < n; ++d) m.add_row(idx("s_init", 0, static_cast<int>(d)), {{v.s[0][d], 1.0}}, Sense::Eq, p.s_hat[d]);
    for (long d = 0; d < n; ++d) m.add_row(idx("s_final", K, static_cast<int>(d)), {{v.s[K][d], 1.0}}, Sense::Eq, 0.0);
    for (long d = 0; d < u; ++d) {
        m.add_row(idx("a_lo", 0, static_cast<int>(d)), {{v.a[0][d], 1.0}}, Sense::Ge, p.a_lb[d]);
        m.add_row(idx("a_up", 0, static_cast<int>(d)), {{v.a[0][d], 1.0}}, Sense::Le, p.a_ub[d]);
    }
    for (int k = 1; k + 1 < K; ++k) {
        gated_bounds(m, "s_" + std::to_string(k), v.s[k], gate(k - 1), p.s_lb, p.s_ub);
        gated_bounds(m, "a_" + std::to_string(k), v.a[k], gate(k - 1), p.a_lb, p.a_ub);
    }
    for (int k = 0; k < K; ++k) {
        auto rows = affine(p, v.s[k], v.a[k]);
        for (long d = 0; d < n; ++d) {
            std::vector<Term> t{{v.s[k + 1][d], 1.0}};
            for (const Term& x : rows[d]) t.push_back({x.var, -x.coef});
            m.add_row(idx("dyn", k, static_cast<int>(d)), t, Sense::Eq, 0.0);
        }
    }
    return v;
}

Model build_gcs(const MinTimeProblem& p) {
    const int K = p.K;
    const long n = p.A.rows(), u = p.B.cols();
    Model m;
    m.name = "min_time_gcs";
    EdgeVars e = add_edge_part(m, K);
    std::vector<std::vector<int>> sg, ag, sp, ap;
    for (int k = 0; k < K; ++k) {
        sg.push_back(add_free(m, "sigma", k, n));
        ag.push_back(add_free(m, "alpha", k, u));
        sp.push_back(add_free(m, "sigmap", k, n));
        ap.push_back(add_free(m, "alphap", k, u));
    }
    for (long d = 0; d < n; ++d)
        m.add_row(idx("s_init", 0, static_cast<int>(d)), {{sg[0][d], 1.0}, {sp[0][d], 1.0}}, Sense::Eq, p.s_hat[d]);
    for (int k = 0; k < K; ++k) {
        const std::string ks = std::to_string(k);
        gated_bounds(m, "sigma_" + ks, sg[k], e.y[k], p.s_lb, p.s_ub);
        gated_bounds(m, "alpha_" + ks, ag[k], e.y[k], p.a_lb, p.a_ub);
        gated_bounds(m, "sigmap_" + ks, sp[k], e.yp[k], p.s_lb, p.s_ub);
        gated_bounds(m, "alphap_" + ks, ap[k], e.yp[k], p.a_lb, p.a_ub);
    }
    for (int k = 0; k + 1 < K; ++k) {
        auto rows = affine(p, sg[k], ag[k]);
        for (long d = 0; d < n; ++d) {
            rows[d].push_back({sg[k + 1][d], -1.0});
            rows[d].push_back({sp[k + 1][d], -1.0});
            m.add_row(idx("dyn", k, static_cast<int>(d)), rows[d], Sense::Eq, 0.0);
        }
    }
    for (int k = 0; k < K; ++k) {
        auto rows = affine(p, sp[k], ap[k]);
        for (long d = 0; d < n; ++d) m.add_row(idx("exit", k, static_cast<int>(d)), rows[d], Sense::Eq, 0.0);
    }
    return m;
}

bool same_model(const Model& a, const Model& b) {
    if (a.num_vars() != b.num_vars() || a.num_rows() != b.num_rows()) return false;
    for (int j = 0; j < a.num_vars(); ++j)
        if (a.vars[j].name != b.vars[j].name || a.vars[j].kind != b.vars[j].kind) return false;
    for (int i = 0; i < a.num_rows(); ++i) {
        const Constraint &x = a.rows[i], &y = b.rows[i];
        if (x.sense != y.sense || x.terms.size() != y.terms.size() || std::fabs(x.rhs - y.rhs) > 1e-12) return false;
        for (std::size_t t = 0; t < x.terms.size(); ++t)
            if (x.terms[t].var != y.terms[t].var || std::fabs(x.terms[t].coef - y.terms[t].coef) > 1e-12) return false;
    }
    return true;
}

}  // namespace

void MinTimeProblem::validate() const {
    if (K < 1) throw ModelError("horizon must be at least 1");
    const long n = A.rows(), u = B.cols();
    if (n == 0 || A.cols() != n || B.rows() != n) throw ModelError("system matrices have inconsistent sizes");
    if (s_hat.size() != n || s_lb.size() != n || s_ub.size() != n) throw ModelError("state vectors have the wrong size");
    if (a_lb.size() != u || a_ub.size() != u) throw ModelError("input bounds have the wrong size");
}

MinTimeProblem double_integrator(int K, const Eigen::Vector2d& s_hat) {
    MinTimeProblem p;
    p.K = K;
    p.A.resize(2, 2);
    p.A << 1.0, 0.01, 0.0, 1.0;
    p.B.resize(2, 1);
    p.B << 0.0, 0.01;
    p.s_hat = s_hat;
    p.s_lb = Eigen::Vector2d(-1.0, -1.0);
    p.s_ub = Eigen::Vector2d(1.0, 1.0);
    p.a_lb = Eigen::VectorXd::Constant(1, -1.0);
    p.a_ub = Eigen::VectorXd::Constant(1, 1.0);
    return p;
}

MinTimeModels build_min_time_models(const MinTimeProblem& p) {
    p.validate();
    MinTimeModels out;
    out.gcs.problem = p;
    out.gcs.model = build_gcs(p);

    Model& b = out.baseline;
    b.name = "min_time_baseline";
    std::vector<int> y;
    for (int k = 0; k < p.K; ++k) y.push_back(b.add_binary("y_" + std::to_string(k)));
    b.obj_const = 1.0;
    for (int k = 0; k + 1 < p.K; ++k) b.set_obj(y[k], 1.0);
    add_state_part(b, p, [&](int k) { return y[k]; });
    return out;
}

Model eliminate_gcs_flows(const GcsModel& g, bool tightening) {
    const MinTimeProblem& p = g.problem;
    p.validate();
    if (!same_model(g.model, build_gcs(p))) throw ModelError("model is not the minimum-time graph-of-convex-sets structure");
    if (tightening && ((p.A.array() < 0.0).any() || (p.B.array() < 0.0).any()))
        throw ModelError("tightening rows need nonnegative system matrices");

    Model m;
    m.name = "min_time_projected";
    EdgeVars e = add_edge_part(m, p.K);
    StateVars v = add_state_part(m, p, [&](int k) { return e.y[k]; });
    if (!tightening) return m;

    const long n = p.A.rows();
    const Eigen::VectorXd As_lb = p.A * p.s_lb, As_ub = p.A * p.s_ub, Ba_lb = p.B * p.a_lb, Ba_ub = p.B * p.a_ub;
    for (int k = 0; k < p.K; ++k) {
        auto Ba = affine(p, std::vector<int>(n, -1), v.a[k]);
        auto As = affine(p, v.s[k], std::vector<int>(p.B.cols(), -1));
        for (long d = 0; d < n; ++d) {
            std::vector<Term> bak, ask;
            for (const Term& t : Ba[d])
                if (t.var >= 0 && t.coef != 0.0) bak.push_back(t);
            for (const Term& t : As[d])
                if (t.var >= 0 && t.coef != 0.0) ask.push_back(t);
            auto with = [](std::vector<Term> t, double s, std::vector<Term> more) {
                for (Term& x : t) x.coef *= s;
                t.insert(t.end(), more.begin(), more.end());
                return t;
            };
            const int i = static_cast<int>(d);
            m.add_row(idx("tight3", k, i), with(bak, 1.0, {{e.yp[k], As_lb[d]}, {e.y[k], -Ba_ub[d]}}), Sense::Le, 0.0);
            m.add_row(idx("tight4", k, i), with(bak, -1.0, {{e.y[k], Ba_lb[d]}, {e.yp[k], -As_ub[d]}}), Sense::Le, 0.0);
            m.add_row(idx("tight5", k, i), with(ask, 1.0, {{e.yp[k], Ba_lb[d]}, {e.y[k], -As_ub[d]}}), Sense::Le, 0.0);
            m.add_row(idx("tight6", k, i), with(ask, -1.0, {{e.y[k], As_lb[d]}, {e.yp[k], -Ba_ub[d]}}), Sense::Le, 0.0);
        }
    }
    return m;
}

}  // namespace lnf
