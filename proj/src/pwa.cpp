#include <cmath>

#include "lnf/dynamics.hpp"

namespace lnf {

namespace {

void check_dims(const Eigen::MatrixXd& M, long rows, long cols, const std::string& what) {
    if (M.rows() != rows || M.cols() != cols)
        throw ModelError(what + " is " + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) + ", expected " +
                         std::to_string(rows) + "x" + std::to_string(cols));
}

// max c'x + d'u over the domain of `mode`
class DomainLp {
public:
    DomainLp(const PwaSystem& s, const PwaMode& mode) : nx_(s.nx), name_(mode.name) {
        for (int d = 0; d < s.nx; ++d) m_.add_continuous("x" + std::to_string(d), -kInf, kInf);
        for (int d = 0; d < s.nu; ++d) {
            double lb = s.u_lb.size() ? s.u_lb[d] : -kInf, ub = s.u_ub.size() ? s.u_ub[d] : kInf;
            m_.add_continuous("u" + std::to_string(d), lb, ub);
        }
        for (long r = 0; r < mode.h.size(); ++r) {
            std::vector<Term> t;
            for (int d = 0; d < s.nx; ++d) t.push_back({d, mode.H1(r, d)});
            for (int d = 0; d < s.nu; ++d) t.push_back({s.nx + d, mode.H2(r, d)});
            m_.add_row("h" + std::to_string(r), t, Sense::Le, mode.h[r]);
        }
    }

    // Returns 0 for an empty domain: the mode can never be active.
    double max(const Eigen::VectorXd& c, const Eigen::VectorXd& d) {
        if (c.isZero(0.0) && d.isZero(0.0)) return 0.0;
        for (int j = 0; j < m_.num_vars(); ++j) m_.obj[j] = -(j < nx_ ? c[j] : d[j - nx_]);
        LpResult r = lp_solve(m_);
        if (r.status == LpStatus::Unbounded) throw ModelError("domain of mode '" + name_ + "' is unbounded");
        if (r.status != LpStatus::Optimal) return 0.0;
        return -r.value;
    }

private:
    Model m_;
    int nx_;
    std::string name_;
};

}  // namespace

void PwaSystem::validate() const {
    if (nx <= 0 || nu < 0) throw ModelError("bad state or input dimension");
    if (modes.empty()) throw ModelError("system has no modes");
    for (const PwaMode& m : modes) {
        check_dims(m.A, nx, nx, "A of " + m.name);
        check_dims(m.B, nx, nu, "B of " + m.name);
        check_dims(m.H1, m.h.size(), nx, "H1 of " + m.name);
        check_dims(m.H2, m.h.size(), nu, "H2 of " + m.name);
    }
    if (x0_lb.size() != nx || x0_ub.size() != nx) throw ModelError("initial state box has the wrong dimension");
    if (u_lb.size() != u_ub.size() || (u_lb.size() && u_lb.size() != nu)) throw ModelError("input box has the wrong dimension");
}

BigM compute_big_m(const PwaSystem& s, int i, int j) {
    s.validate();
    const PwaMode& mi = s.modes.at(i);
    const PwaMode& mj = s.modes.at(j);
    DomainLp lp(s, mj);
    BigM out;
    out.m1.resize(s.nx);
    out.m2.resize(s.nx);
    out.m3.resize(mi.h.size());
    // with mode j active, x+ - A^i x - B^i u = (A^j - A^i) x + (B^j - B^i) u
    for (int d = 0; d < s.nx; ++d) {
        Eigen::VectorXd c = (mi.A.row(d) - mj.A.row(d)).transpose();
        Eigen::VectorXd e = (mi.B.row(d) - mj.B.row(d)).transpose();
        out.m1[d] = lp.max(c, e);
        out.m2[d] = lp.max(-c, -e);
    }
    for (long r = 0; r < mi.h.size(); ++r)
        out.m3[r] = lp.max(mi.H1.row(r).transpose(), mi.H2.row(r).transpose()) - mi.h[r];
    return out;
}

PwaEncoding encode_pwa_bigm(const PwaSystem& s, int T, Model& m, AtomVars& z, const PwaOptions& opt) {
    s.validate();
    if (T < 1) throw ModelError("horizon must be at least 1");
    const int I = static_cast<int>(s.modes.size());
    if (opt.alias_predicates)
        for (const PwaMode& md : s.modes)
            if (!md.H2.isZero(0.0)) throw ModelError("mode '" + md.name + "' has H2 != 0, its indicator cannot act as a predicate");

    PwaEncoding enc;
    enc.big_m.assign(I, std::vector<BigM>(I));
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < I; ++j)
            if (i != j) enc.big_m[i][j] = compute_big_m(s, i, j);

    for (int k = 0; k <= T; ++k) {
        enc.x.emplace_back();
        for (int d = 0; d < s.nx; ++d) {
            double lb = k == 0 ? s.x0_lb[d] : -kInf, ub = k == 0 ? s.x0_ub[d] : kInf;
            enc.x.back().push_back(m.add_continuous("x_" + std::to_string(k) + "_" + std::to_string(d), lb, ub));
        }
    }
    for (int k = 0; k < T; ++k) {
        enc.u.emplace_back();
        for (int d = 0; d < s.nu; ++d) {
            double lb = s.u_lb.size() ? s.u_lb[d] : -kInf, ub = s.u_ub.size() ? s.u_ub[d] : kInf;
            enc.u.back().push_back(m.add_continuous("u_" + std::to_string(k) + "_" + std::to_string(d), lb, ub));
        }
        enc.delta.emplace_back();
        for (int i = 0; i < I; ++i) {
            int v = m.add_binary("d_" + s.modes[i].name + "_" + std::to_string(k));
            enc.delta.back().push_back(v);
            if (opt.alias_predicates && !z.bind(s.modes[i].name, k, v))
                m.add_row("alias_" + s.modes[i].name + "_" + std::to_string(k), {{v, 1.0}, {z.find(s.modes[i].name, k), -1.0}},
                          Sense::Eq, 0.0);
        }
    }

    for (int k = 0; k < T; ++k) {
        const auto& x = enc.x[k];
        const auto& xn = enc.x[k + 1];
        const auto& u = enc.u[k];
        const auto& dl = enc.delta[k];
        const std::string ks = std::to_string(k);
        for (int i = 0; i < I; ++i) {
            const PwaMode& md = s.modes[i];
            const std::string base = md.name + "_" + ks;
            for (int d = 0; d < s.nx; ++d) {
                std::vector<Term> t{{xn[d], 1.0}};
                for (int c = 0; c < s.nx; ++c) t.push_back({x[c], -md.A(d, c)});
                for (int c = 0; c < s.nu; ++c) t.push_back({u[c], -md.B(d, c)});
                std::vector<Term> lo = t, up = t;
                for (int j = 0; j < I; ++j) {
                    if (j == i) continue;
                    lo.push_back({dl[j], enc.big_m[i][j].m1[d]});
                    up.push_back({dl[j], -enc.big_m[i][j].m2[d]});
                }
                m.add_row("dyn_lo_" + base + "_" + std::to_string(d), lo, Sense::Ge, 0.0);
                m.add_row("dyn_up_" + base + "_" + std::to_string(d), up, Sense::Le, 0.0);
            }
            for (long r = 0; r < md.h.size(); ++r) {
                std::vector<Term> t;
                for (int c = 0; c < s.nx; ++c) t.push_back({x[c], md.H1(r, c)});
                for (int c = 0; c < s.nu; ++c) t.push_back({u[c], md.H2(r, c)});
                for (int j = 0; j < I; ++j)
                    if (j != i) t.push_back({dl[j], -enc.big_m[i][j].m3[r]});
                m.add_row("dom_" + base + "_" + std::to_string(r), t, Sense::Le, md.h[r]);
            }
        }
        std::vector<Term> one;
        for (int v : dl) one.push_back({v, 1.0});
        m.add_row("mode_" + ks, one, Sense::Eq, 1.0);
    }
    return enc;
}

PwaSystem point_mass(const std::vector<Box2>& regions, double dt, double vmax, double umax, const Eigen::Vector4d& x0) {
    PwaSystem s;
    s.nx = 4;
    s.nu = 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(4, 4);
    A(0, 2) = A(1, 3) = dt;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
    B(0, 0) = B(1, 1) = 0.5 * dt * dt;
    B(2, 0) = B(3, 1) = dt;
    for (std::size_t r = 0; r < regions.size(); ++r) {
        const Box2& b = regions[r];
        PwaMode md;
        md.name = "region" + std::to_string(r);
        md.A = A;
        md.B = B;
        md.H1 = Eigen::MatrixXd::Zero(8, 4);
        md.H2 = Eigen::MatrixXd::Zero(8, 2);
        md.h.resize(8);
        for (int d = 0; d < 4; ++d) {
            md.H1(2 * d, d) = 1.0;
            md.H1(2 * d + 1, d) = -1.0;
        }
        md.h << b.x1, -b.x0, b.y1, -b.y0, vmax, vmax, vmax, vmax;
        s.modes.push_back(std::move(md));
    }
    s.x0_lb = s.x0_ub = x0;
    s.u_lb = Eigen::VectorXd::Constant(2, -umax);
    s.u_ub = Eigen::VectorXd::Constant(2, umax);
    return s;
}

std::vector<Box2> point_mass_environment() {
    // a ring of corridors around a central obstacle
    return {{0.0, 0.0, 2.0, 1.5}, {1.5, 0.0, 4.5, 1.0}, {4.0, 0.0, 6.0, 1.5}, {0.0, 1.0, 1.0, 4.0},
            {5.0, 1.0, 6.0, 4.0}, {0.0, 3.5, 2.0, 5.0}, {1.5, 4.0, 4.5, 5.0}, {4.0, 3.5, 6.0, 5.0}};
}

}  // namespace lnf
