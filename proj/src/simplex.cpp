#include "simplex.hpp"

#include <algorithm>
#include <cmath>

namespace lnf::detail {

namespace {
constexpr double kPivotTol = 1e-7;
constexpr double kDropTol = 1e-13;
constexpr std::size_t kRefactorEvery = 100;

bool finite(double v) { return std::isfinite(v); }
}  // namespace

Simplex::Simplex(const Model& mdl, const LpOptions& opt) : opt_(opt) {
    if (!mdl.quad.empty()) throw ModelError("quadratic objective terms are not supported by the internal solver");
    mdl.validate();
    m_ = mdl.num_rows();
    n_ = mdl.num_vars();
    N_ = n_ + m_;
    obj_const_ = mdl.obj_const;

    std::vector<int> cnt(n_, 0);
    rs_.assign(m_ + 1, 0);
    for (int i = 0; i < m_; ++i) {
        rs_[i + 1] = rs_[i] + static_cast<int>(mdl.rows[i].terms.size());
        for (const Term& t : mdl.rows[i].terms) ++cnt[t.var];
    }
    ri_.resize(rs_[m_]);
    rv_.resize(rs_[m_]);
    cs_.assign(n_ + 1, 0);
    for (int j = 0; j < n_; ++j) cs_[j + 1] = cs_[j] + cnt[j];
    ci_.resize(cs_[n_]);
    cv_.resize(cs_[n_]);
    std::vector<int> fill(cs_.begin(), cs_.end() - 1);
    for (int i = 0; i < m_; ++i) {
        int k = rs_[i];
        for (const Term& t : mdl.rows[i].terms) {
            ri_[k] = t.var;
            rv_[k] = t.coef;
            ++k;
            ci_[fill[t.var]] = i;
            cv_[fill[t.var]] = t.coef;
            ++fill[t.var];
        }
    }

    c_.assign(N_, 0.0);
    shift_.assign(N_, 0.0);
    lb_.resize(N_);
    ub_.resize(N_);
    for (int j = 0; j < n_; ++j) {
        c_[j] = mdl.obj[j];
        lb_[j] = mdl.vars[j].lb;
        ub_[j] = mdl.vars[j].ub;
    }
    for (int i = 0; i < m_; ++i) {
        const Constraint& r = mdl.rows[i];
        lb_[n_ + i] = r.sense == Sense::Le ? -kInf : r.rhs;
        ub_[n_ + i] = r.sense == Sense::Ge ? kInf : r.rhs;
    }
    x_.assign(N_, 0.0);
    d_.assign(N_, 0.0);
    slack_basis();
}

void Simplex::slack_basis() {
    head_.resize(m_);
    pos_.assign(N_, -1);
    status_.assign(N_, AtLower);
    for (int i = 0; i < m_; ++i) {
        head_[i] = n_ + i;
        pos_[n_ + i] = i;
        status_[n_ + i] = Basic;
    }
    for (int j = 0; j < n_; ++j) {
        bool fl = finite(lb_[j]), fu = finite(ub_[j]);
        if (fl && fu)
            status_[j] = c_[j] >= 0.0 ? AtLower : AtUpper;
        else if (fl)
            status_[j] = AtLower;
        else if (fu)
            status_[j] = AtUpper;
        else
            status_[j] = Free;
        place_nonbasic(j);
    }
    w_.assign(m_, 1.0);
    factored_ = false;
}

void Simplex::place_nonbasic(int j) {
    if (status_[j] == Basic) return;
    if (status_[j] == AtUpper && !finite(ub_[j])) status_[j] = AtLower;
    if (status_[j] == AtLower && !finite(lb_[j])) status_[j] = finite(ub_[j]) ? AtUpper : Free;
    if (status_[j] == Free && (finite(lb_[j]) || finite(ub_[j]))) status_[j] = finite(lb_[j]) ? AtLower : AtUpper;
    switch (status_[j]) {
        case AtLower: x_[j] = lb_[j]; break;
        case AtUpper: x_[j] = ub_[j]; break;
        default: x_[j] = 0.0; break;
    }
}

void Simplex::set_bounds(int j, double lb, double ub) {
    lb_[j] = lb;
    ub_[j] = ub;
    place_nonbasic(j);
}

void Simplex::set_basis(const Basis& b) {
    head_ = b.head;
    status_ = b.status;
    pos_.assign(N_, -1);
    for (int p = 0; p < m_; ++p) pos_[head_[p]] = p;
    for (int j = 0; j < N_; ++j) place_nonbasic(j);
    w_.assign(m_, 1.0);
    factored_ = false;
}

bool Simplex::refactor() {
    etas_.clear();
    if (m_ == 0) {
        factored_ = true;
        return true;
    }
    std::vector<Eigen::Triplet<double>> trip;
    for (int p = 0; p < m_; ++p) {
        int j = head_[p];
        if (j < n_) {
            for (int k = cs_[j]; k < cs_[j + 1]; ++k) trip.emplace_back(ci_[k], p, cv_[k]);
        } else {
            trip.emplace_back(j - n_, p, -1.0);
        }
    }
    Eigen::SparseMatrix<double> B(m_, m_);
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();
    lu_.analyzePattern(B);
    lu_.factorize(B);
    factored_ = lu_.info() == Eigen::Success;
    return factored_;
}

void Simplex::ftran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    Eigen::VectorXd t = lu_.solve(v);
    v.swap(t);
    for (const Eta& e : etas_) {
        double xr = v[e.r] / e.pivot;
        v[e.r] = xr;
        if (xr == 0.0) continue;
        for (const auto& [i, a] : e.col) v[i] -= a * xr;
    }
}

void Simplex::btran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double s = v[it->r];
        for (const auto& [i, a] : it->col) s -= a * v[i];
        v[it->r] = s / it->pivot;
    }
    Eigen::VectorXd t = lu_.transpose().solve(v);
    v.swap(t);
}

void Simplex::column(int j, Eigen::VectorXd& v) const {
    v.setZero(m_);
    if (j < n_) {
        for (int k = cs_[j]; k < cs_[j + 1]; ++k) v[ci_[k]] = cv_[k];
    } else {
        v[j - n_] = -1.0;
    }
}

void Simplex::compute_primal() {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < N_; ++j) {
        if (status_[j] == Basic || x_[j] == 0.0) continue;
        if (j < n_) {
            for (int k = cs_[j]; k < cs_[j + 1]; ++k) r[ci_[k]] -= cv_[k] * x_[j];
        } else {
            r[j - n_] += x_[j];
        }
    }
    ftran(r);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = r[p];
}

void Simplex::compute_dual() {
    Eigen::VectorXd pi(m_);
    for (int p = 0; p < m_; ++p) pi[p] = c_[head_[p]] + shift_[head_[p]];
    btran(pi);
    for (int j = 0; j < n_; ++j) {
        if (status_[j] == Basic) {
            d_[j] = 0.0;
            continue;
        }
        double s = c_[j] + shift_[j];
        for (int k = cs_[j]; k < cs_[j + 1]; ++k) s -= pi[ci_[k]] * cv_[k];
        d_[j] = s;
    }
    for (int i = 0; i < m_; ++i) d_[n_ + i] = status_[n_ + i] == Basic ? 0.0 : shift_[n_ + i] + pi[i];
}

bool Simplex::make_dual_feasible() {
    bool flipped = false;
    for (int j = 0; j < N_; ++j) {
        if (status_[j] == Basic || lb_[j] == ub_[j]) continue;
        if (status_[j] == AtLower && d_[j] < -opt_.opt_tol) {
            if (finite(ub_[j])) {
                status_[j] = AtUpper;
                x_[j] = ub_[j];
                flipped = true;
            } else {
                shift_[j] -= d_[j];
                d_[j] = 0.0;
            }
        } else if (status_[j] == AtUpper && d_[j] > opt_.opt_tol) {
            if (finite(lb_[j])) {
                status_[j] = AtLower;
                x_[j] = lb_[j];
                flipped = true;
            } else {
                shift_[j] -= d_[j];
                d_[j] = 0.0;
            }
        } else if (status_[j] == Free && std::fabs(d_[j]) > opt_.opt_tol) {
            shift_[j] -= d_[j];
            d_[j] = 0.0;
        }
    }
    return flipped;
}

bool Simplex::has_shift() const {
    return std::any_of(shift_.begin(), shift_.end(), [](double s) { return s != 0.0; });
}

void Simplex::clear_shift() { std::fill(shift_.begin(), shift_.end(), 0.0); }

void Simplex::pivot_row(const Eigen::VectorXd& rho, std::vector<double>& alpha) const {
    alpha.assign(N_, 0.0);
    for (int i = 0; i < m_; ++i) {
        double r = rho[i];
        if (std::fabs(r) <= kDropTol) continue;
        for (int k = rs_[i]; k < rs_[i + 1]; ++k) alpha[ri_[k]] += r * rv_[k];
        alpha[n_ + i] = -r;
    }
}

void Simplex::register_degenerate(double step) {
    if (std::fabs(step) <= 1e-12) {
        if (++degenerate_ > 10L * (m_ + n_)) bland_ = true;
    } else {
        degenerate_ = 0;
        bland_ = false;
    }
}

void Simplex::push_eta(int r, const Eigen::VectorXd& a) {
    Eta e{r, a[r], {}};
    for (int i = 0; i < m_; ++i)
        if (i != r && std::fabs(a[i]) > kDropTol) e.col.emplace_back(i, a[i]);
    etas_.push_back(std::move(e));
}

void Simplex::replace(int r, int q, std::int8_t leave_status) {
    int p = head_[r];
    status_[p] = leave_status;
    pos_[p] = -1;
    head_[r] = q;
    pos_[q] = r;
    status_[q] = Basic;
}

double Simplex::primal_infeasibility(int j) const {
    if (x_[j] < lb_[j] - opt_.feas_tol) return lb_[j] - x_[j];
    if (x_[j] > ub_[j] + opt_.feas_tol) return x_[j] - ub_[j];
    return 0.0;
}

bool Simplex::primal_feasible(double tol) const {
    for (int p = 0; p < m_; ++p) {
        int j = head_[p];
        if (x_[j] < lb_[j] - tol || x_[j] > ub_[j] + tol) return false;
    }
    return true;
}

bool Simplex::dual_feasible(double tol) const {
    for (int j = 0; j < N_; ++j) {
        if (status_[j] == Basic || lb_[j] == ub_[j]) continue;
        if (status_[j] == AtLower && d_[j] < -tol) return false;
        if (status_[j] == AtUpper && d_[j] > tol) return false;
        if (status_[j] == Free && std::fabs(d_[j]) > tol) return false;
    }
    return true;
}

Simplex::Phase Simplex::dual_phase() {
    std::vector<double> alpha;
    Eigen::VectorXd rho(m_), col(m_), tau(m_);
    while (true) {
        if (iters_ >= opt_.max_iter || out_of_time()) return Phase::Limit;
        if (etas_.size() >= kRefactorEvery) {
            if (!refactor()) return Phase::Refactor;
            compute_primal();
            compute_dual();
            if (make_dual_feasible()) compute_primal();
        }

        int r = -1;
        double best = 0.0;
        for (int p = 0; p < m_; ++p) {
            double inf = primal_infeasibility(head_[p]);
            if (inf <= 0.0) continue;
            if (bland_) {
                if (r < 0 || head_[p] < head_[r]) r = p;
            } else {
                double score = inf * inf / w_[p];
                if (score > best) {
                    best = score;
                    r = p;
                }
            }
        }
        if (r < 0) return Phase::Done;

        const int leave = head_[r];
        const bool to_lower = x_[leave] < lb_[leave];
        const double delta = to_lower ? x_[leave] - lb_[leave] : x_[leave] - ub_[leave];
        const double sgn = delta > 0.0 ? 1.0 : -1.0;

        rho.setZero(m_);
        rho[r] = 1.0;
        btran(rho);
        pivot_row(rho, alpha);

        double theta_max = kInf;
        bool any = false;
        for (int j = 0; j < N_; ++j) {
            std::int8_t s = status_[j];
            if (s == Basic || lb_[j] == ub_[j]) continue;
            double a = sgn * alpha[j];
            double ratio;
            if (s == AtLower && a > kPivotTol)
                ratio = (std::max(d_[j], 0.0) + opt_.opt_tol) / a;
            else if (s == AtUpper && a < -kPivotTol)
                ratio = (std::max(-d_[j], 0.0) + opt_.opt_tol) / -a;
            else if (s == Free && std::fabs(a) > kPivotTol)
                ratio = (std::fabs(d_[j]) + opt_.opt_tol) / std::fabs(a);
            else
                continue;
            any = true;
            theta_max = std::min(theta_max, ratio);
        }
        if (!any) return Phase::Infeasible;

        int q = -1;
        double best_a = 0.0, best_ratio = kInf;
        for (int j = 0; j < N_; ++j) {
            std::int8_t s = status_[j];
            if (s == Basic || lb_[j] == ub_[j]) continue;
            double a = sgn * alpha[j];
            double dj;
            if (s == AtLower && a > kPivotTol)
                dj = std::max(d_[j], 0.0);
            else if (s == AtUpper && a < -kPivotTol)
                dj = std::max(-d_[j], 0.0);
            else if (s == Free && std::fabs(a) > kPivotTol)
                dj = std::fabs(d_[j]);
            else
                continue;
            double ratio = dj / std::fabs(a);
            if (bland_) {
                if (ratio < best_ratio - 1e-15 || (ratio <= best_ratio + 1e-15 && (q < 0 || j < q))) {
                    if (ratio < best_ratio) best_ratio = ratio;
                    q = j;
                }
            } else if (ratio <= theta_max && std::fabs(a) > best_a) {
                best_a = std::fabs(a);
                q = j;
            }
        }
        if (q < 0) return Phase::Infeasible;

        column(q, col);
        ftran(col);
        double piv = col[r];
        if (std::fabs(piv - alpha[q]) > 1e-7 * (1.0 + std::fabs(piv)) || std::fabs(piv) < kPivotTol * 1e-2) {
            if (!etas_.empty()) {
                if (!refactor()) return Phase::Refactor;
                compute_primal();
                compute_dual();
                if (make_dual_feasible()) compute_primal();
                continue;
            }
            if (std::fabs(piv) < kPivotTol * 1e-2) return Phase::Refactor;
        }

        double theta_d = d_[q] / piv;
        if (sgn * theta_d < 0.0) {
            shift_[q] -= d_[q];
            d_[q] = 0.0;
            theta_d = 0.0;
        }
        if (theta_d != 0.0) {
            for (int j = 0; j < N_; ++j)
                if (status_[j] != Basic && alpha[j] != 0.0) d_[j] -= theta_d * alpha[j];
        }
        d_[leave] = -theta_d;
        d_[q] = 0.0;

        double theta_p = delta / piv;
        for (int p = 0; p < m_; ++p)
            if (col[p] != 0.0) x_[head_[p]] -= theta_p * col[p];
        x_[q] += theta_p;
        x_[leave] = to_lower ? lb_[leave] : ub_[leave];

        tau = rho;
        ftran(tau);
        double wr = w_[r];
        for (int p = 0; p < m_; ++p) {
            if (p == r || col[p] == 0.0) continue;
            double ratio = col[p] / piv;
            w_[p] = std::max(w_[p] - 2.0 * ratio * tau[p] + ratio * ratio * wr, 1e-8);
        }
        w_[r] = std::max(wr / (piv * piv), 1e-8);

        replace(r, q, to_lower ? AtLower : AtUpper);
        push_eta(r, col);
        ++iters_;
        register_degenerate(theta_d);
    }
}

Simplex::Phase Simplex::primal_phase() {
    std::vector<double> alpha;
    Eigen::VectorXd rho(m_), col(m_);
    bool pivoted = false;
    while (true) {
        if (iters_ >= opt_.max_iter || out_of_time()) return Phase::Limit;
        if (etas_.size() >= kRefactorEvery) {
            if (!refactor()) return Phase::Refactor;
            compute_primal();
            compute_dual();
        }

        int q = -1;
        double best = 0.0;
        for (int j = 0; j < N_; ++j) {
            std::int8_t s = status_[j];
            if (s == Basic || lb_[j] == ub_[j]) continue;
            double v = 0.0;
            if (s == AtLower && d_[j] < -opt_.opt_tol)
                v = -d_[j];
            else if (s == AtUpper && d_[j] > opt_.opt_tol)
                v = d_[j];
            else if (s == Free && std::fabs(d_[j]) > opt_.opt_tol)
                v = std::fabs(d_[j]);
            else
                continue;
            if (bland_) {
                q = j;
                break;
            }
            if (v > best) {
                best = v;
                q = j;
            }
        }
        if (q < 0) {
            if (pivoted) w_.assign(m_, 1.0);
            return Phase::Done;
        }

        const double dir = (status_[q] == AtLower || (status_[q] == Free && d_[q] < 0.0)) ? 1.0 : -1.0;
        column(q, col);
        ftran(col);

        double range = ub_[q] - lb_[q];
        double theta_max = finite(range) ? range : kInf;
        for (int p = 0; p < m_; ++p) {
            double a = dir * col[p];
            int j = head_[p];
            if (a > kPivotTol && finite(lb_[j]))
                theta_max = std::min(theta_max, (x_[j] - lb_[j] + opt_.feas_tol) / a);
            else if (a < -kPivotTol && finite(ub_[j]))
                theta_max = std::min(theta_max, (ub_[j] - x_[j] + opt_.feas_tol) / -a);
        }
        if (!finite(theta_max)) return Phase::Unbounded;

        if (finite(range) && range <= theta_max) {
            for (int p = 0; p < m_; ++p)
                if (col[p] != 0.0) x_[head_[p]] -= dir * range * col[p];
            status_[q] = status_[q] == AtLower ? AtUpper : AtLower;
            x_[q] = status_[q] == AtLower ? lb_[q] : ub_[q];
            ++iters_;
            register_degenerate(range);
            continue;
        }

        int r = -1;
        double best_a = 0.0, best_ratio = kInf;
        for (int p = 0; p < m_; ++p) {
            double a = dir * col[p];
            int j = head_[p];
            double ratio;
            if (a > kPivotTol && finite(lb_[j]))
                ratio = std::max(x_[j] - lb_[j], 0.0) / a;
            else if (a < -kPivotTol && finite(ub_[j]))
                ratio = std::max(ub_[j] - x_[j], 0.0) / -a;
            else
                continue;
            if (bland_) {
                if (ratio < best_ratio - 1e-15 || (ratio <= best_ratio + 1e-15 && (r < 0 || head_[p] < head_[r]))) {
                    if (ratio < best_ratio) best_ratio = ratio;
                    r = p;
                }
            } else if (ratio <= theta_max && std::fabs(a) > best_a) {
                best_a = std::fabs(a);
                best_ratio = ratio;
                r = p;
            }
        }
        if (r < 0) return Phase::Unbounded;

        const int leave = head_[r];
        const double a_r = dir * col[r];
        const bool to_lower = a_r > 0.0;
        double t = best_ratio;
        if (bland_) t = a_r > 0.0 ? std::max(x_[leave] - lb_[leave], 0.0) / a_r : std::max(ub_[leave] - x_[leave], 0.0) / -a_r;

        rho.setZero(m_);
        rho[r] = 1.0;
        btran(rho);
        pivot_row(rho, alpha);
        double piv = col[r];

        for (int p = 0; p < m_; ++p)
            if (col[p] != 0.0) x_[head_[p]] -= dir * t * col[p];
        x_[q] += dir * t;
        x_[leave] = to_lower ? lb_[leave] : ub_[leave];

        double theta_d = d_[q] / piv;
        for (int j = 0; j < N_; ++j)
            if (status_[j] != Basic && alpha[j] != 0.0) d_[j] -= theta_d * alpha[j];
        d_[leave] = -theta_d;
        d_[q] = 0.0;

        replace(r, q, to_lower ? AtLower : AtUpper);
        push_eta(r, col);
        ++iters_;
        pivoted = true;
        register_degenerate(t);
    }
}

LpStatus Simplex::solve() {
    bool retried_infeasible = false;
    for (int round = 0; round < 50; ++round) {
        if (!factored_ || !etas_.empty()) {
            if (!refactor()) {
                slack_basis();
                refactor();
            }
        }
        compute_primal();
        compute_dual();
        if (make_dual_feasible()) compute_primal();

        Phase ph = dual_phase();
        if (ph == Phase::Limit) return LpStatus::IterLimit;
        if (ph == Phase::Refactor) {
            slack_basis();
            continue;
        }
        if (ph == Phase::Infeasible) {
            if (!retried_infeasible && !etas_.empty()) {
                retried_infeasible = true;
                continue;
            }
            clear_shift();
            return LpStatus::Infeasible;
        }
        if (has_shift()) {
            clear_shift();
            compute_dual();
        }
        ph = primal_phase();
        if (ph == Phase::Limit) return LpStatus::IterLimit;
        if (ph == Phase::Unbounded) return LpStatus::Unbounded;
        if (ph == Phase::Refactor) {
            slack_basis();
            continue;
        }
        if (!refactor()) {
            slack_basis();
            continue;
        }
        compute_primal();
        compute_dual();
        if (primal_feasible(opt_.feas_tol) && dual_feasible(opt_.opt_tol)) return LpStatus::Optimal;
    }
    return LpStatus::IterLimit;
}

double Simplex::objective() const {
    double v = obj_const_;
    for (int j = 0; j < n_; ++j) v += c_[j] * x_[j];
    return v;
}

std::vector<double> Simplex::primal() const { return {x_.begin(), x_.begin() + n_}; }

}  // namespace lnf::detail
